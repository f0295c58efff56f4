//! Formal ℘-symbol calculus, the ξ-expansion of the Kleinian formula into the
//! ρ polynomials, w-resultants, degree reduction and parity splitting.

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{self, Rational};
use crate::algebra::resultant::{normalize, resultant};
use crate::algebra::{AbelianSymbol, Monomial, Parity, Poly, Registry, SymbolKind, Var, VariableRegistry};
use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::series::{local_expansions, ExpansionInput, LaurentSeries, EXACT};

/// Sign of the offset in the Taylor expansion of `℘_ij` about `u`.
///
/// `Minus` expands `℘_ij(u - ε)`, so the order-`α` term carries `(-1)^|α|`;
/// `Plus` expands `℘_ij(u + ε)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OffsetSign {
    Plus,
    Minus,
}

impl OffsetSign {
    fn factor(self, order: u32) -> Rational {
        match self {
            OffsetSign::Minus if order % 2 == 1 => -Rational::one(),
            _ => Rational::one(),
        }
    }
}

/// Which form of the Kleinian formula is expanded in ξ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulaForm {
    /// `Σ ℘_ij g_i g_j - F / (x - z)^2`.
    Quotient,
    /// `(x - z)^2 Σ ℘_ij g_i g_j - F`.
    Cleared,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KleinianOptions {
    pub sign: OffsetSign,
    pub form: FormulaForm,
}

/// Convention that reproduces the printed ρ polynomials and resultant table.
pub const PRINTED: KleinianOptions = KleinianOptions {
    sign: OffsetSign::Plus,
    form: FormulaForm::Cleared,
};

/// Multi-indices `α` over `0..weights.len()` with `Σ α_k weights[k] <= budget`,
/// in graded order (by `|α|`, then lexicographically).
pub fn multi_indices(weights: &[i32], budget: i32) -> Vec<Vec<u32>> {
    fn rec(weights: &[i32], k: usize, left: i32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == weights.len() {
            out.push(cur.clone());
            return;
        }
        let mut e = 0;
        loop {
            cur.push(e);
            rec(weights, k + 1, left - e as i32 * weights[k], cur, out);
            cur.pop();
            e += 1;
            if (e as i32) * weights[k] > left {
                break;
            }
        }
    }
    let mut out = Vec::new();
    if budget >= 0 {
        rec(weights, 0, budget, &mut Vec::new(), &mut out);
    }
    out.sort_by(|a, b| {
        let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    out
}

/// `℘` symbol with the base indices plus `α_k` copies of each `k+1`.
pub fn extended_symbol(base: &[u8], alpha: &[u32]) -> AbelianSymbol {
    let mut idx = base.to_vec();
    for (k, &e) in alpha.iter().enumerate() {
        idx.extend(std::iter::repeat((k + 1) as u8).take(e as usize));
    }
    AbelianSymbol::p(&idx)
}

fn alpha_factorial(alpha: &[u32]) -> Rational {
    alpha
        .iter()
        .fold(Rational::one(), |acc, &e| acc * Rational::from_integer(rational::factorial(e)))
}

/// `Π ε_k^{α_k} / α_k!` for every `α` in `alphas`, sharing powers.
fn offset_monomials(
    offset: &[LaurentSeries],
    alphas: &[Vec<u32>],
    trunc: i32,
) -> Result<Vec<LaurentSeries>> {
    let mut powers: FxHashMap<(usize, u32), LaurentSeries> = FxHashMap::default();
    let mut out = Vec::with_capacity(alphas.len());
    for alpha in alphas {
        let reg = offset[0].registry();
        let mut acc = LaurentSeries::constant(Poly::one(reg));
        for (k, &e) in alpha.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let pw = match powers.get(&(k, e)) {
                Some(p) => p.clone(),
                None => {
                    let p = offset[k].with_truncation(trunc).pow(e)?.with_truncation(trunc);
                    powers.insert((k, e), p.clone());
                    p
                }
            };
            acc = acc.mul(&pw)?.with_truncation(trunc);
        }
        out.push(acc.scale_rational(&(Rational::one() / alpha_factorial(alpha))));
    }
    Ok(out)
}

fn lowest_valuations(offset: &[LaurentSeries]) -> Result<Vec<i32>> {
    offset
        .iter()
        .map(|s| match s.valuation() {
            Some(v) if v > 0 => Ok(v),
            Some(v) => Err(Error::usage(format!(
                "offset component has leading exponent {v}; it must be positive"
            ))),
            None => Err(Error::usage("offset component is zero")),
        })
        .collect()
}

/// Taylor expansion of `℘_{base}(u ± ε(ξ))` in the symbols `℘_{base ∪ α}(u)`,
/// keeping derivative orders `|α| <= order`.
///
/// The result lives over the offset registry extended by the needed symbols
/// and is truncated where the omitted orders could contribute.
pub fn taylor_pfunction(
    base: &[u8],
    offset: &[LaurentSeries],
    order: u32,
    sign: OffsetSign,
) -> Result<LaurentSeries> {
    if offset.is_empty() {
        return Err(Error::usage("empty offset vector"));
    }
    let vals = lowest_valuations(offset)?;
    let vmin = *vals.iter().min().expect("nonempty");
    let trunc_in = offset.iter().map(|s| s.truncation()).min().expect("nonempty");
    let trunc = trunc_in.min(vmin.saturating_mul(order as i32 + 1));
    let alphas: Vec<Vec<u32>> = multi_indices(&vals, trunc - 1)
        .into_iter()
        .filter(|a| a.iter().sum::<u32>() <= order)
        .collect();
    let syms: Vec<Var> = alphas.iter().map(|a| Var::Sym(extended_symbol(base, a))).collect();
    let reg = VariableRegistry::extended(offset[0].registry(), syms.iter().cloned());
    let offset: Vec<LaurentSeries> = offset.iter().map(|s| s.with_registry(&reg)).collect::<Result<_>>()?;
    let monos = offset_monomials(&offset, &alphas, trunc)?;
    let mut acc = LaurentSeries::zero(&reg, trunc);
    for ((alpha, e), sym) in alphas.iter().zip(monos).zip(syms) {
        let c = Poly::var(&reg, &sym)?.scale(&sign.factor(alpha.iter().sum()));
        acc = acc.add(&e.scale(&c)?)?;
    }
    Ok(acc.with_truncation(trunc))
}

/// Registry for Kleinian-formula work: λ, x, y, z, w and the given symbols.
fn kleinian_registry(curve: &CurveModel, syms: impl IntoIterator<Item = AbelianSymbol>) -> Registry {
    VariableRegistry::extended(&curve.pair_registry(), syms.into_iter().map(Var::Sym))
}

/// `g_j(z, w)` over `reg`.
fn g_at_zw(g: &Poly, reg: &Registry) -> Result<Poly> {
    let p = g.with_registry(reg)?;
    let (x, y) = (reg.require(&Var::X)?, reg.require(&Var::Y)?);
    Ok(p.substitute(&[(x, Poly::var(reg, &Var::Z)?), (y, Poly::var(reg, &Var::W)?)]))
}

/// Coefficients of the ξ-expansion of `LHS - RHS` of the Kleinian formula.
#[derive(Clone, Debug)]
pub struct KleinianExpansion {
    /// Lowest ξ-exponent of the left side.
    pub lead: i32,
    /// Highest exponent whose coefficient is known.
    pub top: i32,
    /// `(exponent, coefficient)` for `lead <= exponent <= top`, zeros included.
    pub coefficients: Vec<(i32, Poly)>,
}

/// Pole orders at infinity of `g_i(x, y)`, i.e. `n a + s b` for the monomial `x^a y^b`.
fn pole_orders(curve: &CurveModel) -> Result<Vec<i32>> {
    let reg = curve.coordinate_registry();
    let (xi, yi) = (reg.require(&Var::X)?, reg.require(&Var::Y)?);
    curve
        .g
        .iter()
        .map(|g| {
            let g = g.with_registry(&reg)?;
            g.terms()
                .iter()
                .map(|(m, _)| (curve.n * m.exponent(xi) + curve.s * m.exponent(yi)) as i32)
                .max()
                .ok_or_else(|| Error::usage("zero holomorphic differential"))
        })
        .collect()
}

/// Expand the Kleinian formula through the coefficient of `ξ^top`.
///
/// In the cleared form the ξ-coefficients are those of the quotient form
/// times `ξ^{-2n} (1 - z ξ^n)^2`.
///
/// Every coefficient below the left side's leading exponent must cancel;
/// a survivor means the curve data is inconsistent and is an internal error.
pub fn expand_kleinian(curve: &CurveModel, top: i32, opts: KleinianOptions) -> Result<KleinianExpansion> {
    match opts.form {
        FormulaForm::Quotient => expand_quotient(curve, top, opts.sign),
        FormulaForm::Cleared => {
            let n = curve.n as i32;
            let q = expand_quotient(curve, top + 2 * n, opts.sign)?;
            let reg = q.coefficients[0].1.registry().clone();
            let d = LaurentSeries::from_terms(&reg, q.coefficients.iter().cloned(), q.top + 1);
            let z = Poly::var(&reg, &Var::Z)?;
            let sq = LaurentSeries::from_terms(
                &reg,
                [(-2 * n, Poly::one(&reg)), (-n, z.scale(&rational::int(-2))), (0, z.pow(2))],
                EXACT,
            );
            let c = d.mul(&sq)?;
            let lead = q.lead - 2 * n;
            let coefficients = (lead..=top)
                .map(|k| (k, c.coeff(k).unwrap_or_else(|| Poly::zero(&reg))))
                .collect();
            Ok(KleinianExpansion { lead, top, coefficients })
        }
    }
}

fn lead_exponent(curve: &CurveModel, form: FormulaForm) -> Result<i32> {
    let lead = -pole_orders(curve)?.into_iter().max().unwrap_or(0);
    Ok(match form {
        FormulaForm::Quotient => lead,
        FormulaForm::Cleared => lead - 2 * curve.n as i32,
    })
}

fn expand_quotient(curve: &CurveModel, top: i32, sign: OffsetSign) -> Result<KleinianExpansion> {
    let f = curve.require_f()?;
    let (n, s) = (curve.n as i32, curve.s as i32);
    let g = curve.genus;
    let poles = pole_orders(curve)?;
    let lead = -poles.iter().copied().max().unwrap_or(0);
    if top < lead {
        return Err(Error::usage(format!("top exponent {top} is below the leading exponent {lead}")));
    }
    let span = top - lead;
    let uw = &curve.weights.u_weights;
    let alphas = multi_indices(uw, span);
    // Pairs (i, α) that reach exponent `top`.
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut syms: Vec<AbelianSymbol> = Vec::new();
    for i in 0..g {
        for (ai, alpha) in alphas.iter().enumerate() {
            let wt: i32 = alpha.iter().zip(uw).map(|(&e, &w)| e as i32 * w).sum();
            if -poles[i] + wt <= top {
                pairs.push((i, ai));
                for j in 0..g {
                    syms.push(extended_symbol(&[(i + 1) as u8, (j + 1) as u8], alpha));
                }
            }
        }
    }
    syms.sort();
    syms.dedup();
    let reg = kleinian_registry(curve, syms);
    let trunc = top + 1;

    let gs: Vec<Poly> = curve.g.iter().map(|p| p.with_registry(&reg)).collect::<Result<_>>()?;
    // u_k(ξ) must be known through ξ^span; y through ξ^(top + pole) for the g_i and F.
    let order = span + 2 * n * s + 2;
    let exp = local_expansions(&ExpansionInput { n: curve.n, s: curve.s, reg: &reg, g: &gs }, order)?;
    let (xi, yi) = (reg.require(&Var::X)?, reg.require(&Var::Y)?);
    let big: Vec<LaurentSeries> = gs
        .iter()
        .map(|p| LaurentSeries::substitute_into(p, &[(xi, &exp.x), (yi, &exp.y)], &reg))
        .collect::<Result<_>>()?;
    let gzw: Vec<Poly> = curve.g.iter().map(|p| g_at_zw(p, &reg)).collect::<Result<_>>()?;

    let used: Vec<Vec<u32>> = {
        let mut seen = vec![false; alphas.len()];
        for &(_, ai) in &pairs {
            seen[ai] = true;
        }
        alphas.iter().zip(seen).filter(|(_, s)| *s).map(|(a, _)| a.clone()).collect()
    };
    let u_trunc: Vec<LaurentSeries> = exp.u.iter().map(|u| u.with_truncation(span + 1)).collect();
    let monos = offset_monomials(&u_trunc, &used, span + 1)?;
    let mono_of: FxHashMap<&Vec<u32>, &LaurentSeries> = used.iter().zip(monos.iter()).collect();

    let mut lhs = LaurentSeries::zero(&reg, EXACT);
    for &(i, ai) in &pairs {
        let alpha = &alphas[ai];
        let mut coeff = Poly::zero(&reg);
        for (j, gj) in gzw.iter().enumerate() {
            let sym = extended_symbol(&[(i + 1) as u8, (j + 1) as u8], alpha);
            coeff = &coeff + &(&Poly::var(&reg, &Var::Sym(sym))? * gj);
        }
        let coeff = coeff.scale(&sign.factor(alpha.iter().sum()));
        let term = big[i].with_truncation(trunc).mul(mono_of[alpha])?.with_truncation(trunc);
        lhs = lhs.add(&term.scale(&coeff)?)?;
    }
    let lhs = lhs.with_truncation(trunc);

    // F(x(ξ), y(ξ), z, w) · ξ^{2n} / (1 - z ξ^n)^2
    let f = f.with_registry(&reg)?;
    let fs = LaurentSeries::substitute_into(&f, &[(xi, &exp.x), (yi, &exp.y)], &reg)?;
    let fval = fs.valuation().unwrap_or(0);
    let geo_trunc = trunc - fval;
    let z = Poly::var(&reg, &Var::Z)?;
    let mut geo_terms = Vec::new();
    let mut k = 0;
    while 2 * n + n * k < geo_trunc {
        geo_terms.push((2 * n + n * k, z.pow(k as u32).scale(&rational::int(k as i64 + 1))));
        k += 1;
    }
    let geo = LaurentSeries::from_terms(&reg, geo_terms, geo_trunc.max(2 * n));
    let rhs = fs.with_truncation(trunc - 2 * n).mul(&geo)?.with_truncation(trunc);

    let diff = lhs.sub(&rhs)?;
    if diff.truncation() <= top {
        return Err(Error::internal(format!(
            "Kleinian expansion only known below ξ^{}, needed ξ^{top}",
            diff.truncation()
        )));
    }
    for (k, c) in diff.terms() {
        if k < lead && !c.is_zero() {
            return Err(Error::internal(format!(
                "principal part does not cancel: coefficient of ξ^{k} is {c}"
            )));
        }
    }
    let coefficients = (lead..=top)
        .map(|k| (k, diff.coeff(k).unwrap_or_else(|| Poly::zero(&reg))))
        .collect();
    Ok(KleinianExpansion { lead, top, coefficients })
}

/// `Some(c)` when `p = c·q` for a rational `c`.
pub fn rational_ratio(p: &Poly, q: &Poly) -> Option<Rational> {
    let (p, q) = Poly::align(p, q).ok()?;
    if q.is_zero() || p.len() != q.len() {
        return None;
    }
    let (pm, pc) = p.leading()?;
    let qc = q.coefficient(pm);
    if qc.is_zero() {
        return None;
    }
    let c = pc / qc;
    (q.scale(&c) == p).then_some(c)
}

/// One ρ polynomial and the ξ-exponent it came from.
#[derive(Clone, Debug)]
pub struct Rho {
    pub index: usize,
    pub xi_exponent: i32,
    pub poly: Poly,
}

/// The first `count` ρ's: nonzero ξ-coefficients in ascending order, skipping
/// any that are a rational multiple of an earlier one. The expansion depth
/// doubles until enough are found.
pub fn generate_rho(curve: &CurveModel, count: usize, opts: KleinianOptions) -> Result<Vec<Rho>> {
    let lead = lead_exponent(curve, opts.form)?;
    let mut span = (count as i32 + 1).max(2);
    loop {
        let ex = expand_kleinian(curve, lead + span, opts)?;
        let mut rhos: Vec<Rho> = Vec::new();
        for (k, c) in &ex.coefficients {
            if c.is_zero() {
                continue;
            }
            let c = c.compact();
            if rhos.iter().any(|r| rational_ratio(&c, &r.poly).is_some()) {
                continue;
            }
            if c.is_homogeneous()?.is_none() {
                return Err(Error::internal(format!("coefficient of ξ^{k} is not weight-homogeneous")));
            }
            rhos.push(Rho { index: rhos.len() + 1, xi_exponent: *k, poly: c });
            if rhos.len() == count {
                return Ok(rhos);
            }
        }
        if span > 400 {
            return Err(Error::internal(format!("only {} ρ's found up to ξ^{}", rhos.len(), lead + span)));
        }
        span *= 2;
    }
}

/// Statistics of an eliminated polynomial.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ResultantStats {
    pub terms: usize,
    pub z_degree: u32,
    pub weight: Option<i64>,
}

pub fn stats(p: &Poly) -> Result<ResultantStats> {
    let z_degree = match p.registry().index_of(&Var::Z) {
        Some(z) => p.degree_in(z),
        None => 0,
    };
    Ok(ResultantStats { terms: p.len(), z_degree, weight: p.is_homogeneous()? })
}

/// One printed row of resultant statistics.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct ResultantTableEntry {
    pub i: usize,
    pub j: usize,
    pub terms: usize,
    pub z_degree: u32,
}

#[derive(Deserialize)]
struct ResultantTable {
    resultant: Vec<ResultantTableEntry>,
}

/// Printed resultant statistics from `resultants.toml` in the curve's data directory.
pub fn load_resultant_table(data_dir: &std::path::Path, n: u32, s: u32) -> Result<Vec<ResultantTableEntry>> {
    let path = crate::curve::curve_dir(data_dir, n, s).join("resultants.toml");
    let text = std::fs::read_to_string(&path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let t: ResultantTable =
        toml::from_str(&text).map_err(|e| Error::usage(format!("{}: {e}", path.display())))?;
    Ok(t.resultant)
}

/// `ρ_{i,j}`: resultant of two ρ's in `w`, normalized against `reference` when given.
pub fn eliminate_w(a: &Poly, b: &Poly, reference: Option<&Poly>) -> Result<(Poly, ResultantStats)> {
    let (a, b) = Poly::align(a, b)?;
    let w = a
        .registry()
        .index_of(&Var::W)
        .filter(|&w| a.degree_in(w) > 0 && b.degree_in(w) > 0)
        .ok_or_else(|| Error::usage("both polynomials must depend on w"))?;
    let r = resultant(&a, &b, w)?.compact();
    let r = match reference {
        Some(rf) => {
            let (r2, rf2) = Poly::align(&r, rf)?;
            normalize(&r2, Some(&rf2)).compact()
        }
        None => normalize(&r, None),
    };
    let st = stats(&r)?;
    Ok((r, st))
}

/// Reduce `target` modulo the monic-up-to-constant `pivot` (degree `g` in z)
/// and return the `g` coefficients of `1, z, …, z^{g-1}`.
pub fn reduce_degree(target: &Poly, pivot: &Poly, g: usize) -> Result<Vec<Poly>> {
    let (t, p) = Poly::align(target, pivot)?;
    let z = p.registry().require(&Var::Z)?;
    let pc = p.coefficients_in(z);
    if pc.len() != g + 1 {
        return Err(Error::usage(format!("pivot has z-degree {}, expected {g}", pc.len() - 1)));
    }
    let lc = &pc[g];
    if !lc.is_constant() || lc.is_zero() {
        return Err(Error::usage(format!("pivot's leading z-coefficient {lc} is not a constant")));
    }
    let inv = Rational::one() / lc.constant_term();
    let mut tc = t.coefficients_in(z);
    while tc.len() > g {
        let d = tc.len() - 1;
        let top = tc.pop().expect("nonempty").scale(&inv);
        if !top.is_zero() {
            for (k, c) in pc.iter().enumerate().take(g) {
                let slot = d - g + k;
                tc[slot] = &tc[slot] - &(&top * c);
            }
        }
        while tc.len() > g && tc.last().map_or(false, |c| c.is_zero()) {
            tc.pop();
        }
    }
    tc.resize(g, Poly::zero(t.registry()));
    Ok(tc.into_iter().map(|c| c.compact()).collect())
}

/// Split into the parts even and odd under `u -> -u`.
pub fn parity_split(rel: &Poly) -> Result<(Poly, Poly)> {
    for (m, _) in rel.terms() {
        if rel.monomial_parity(m) == Parity::None {
            return Err(Error::usage(format!(
                "term {} has no parity under u -> -u",
                rel.format_monomial(m)
            )));
        }
    }
    let even = rel.filter_terms(|m| rel.monomial_parity(m) == Parity::Even);
    let odd = rel.filter_terms(|m| rel.monomial_parity(m) == Parity::Odd);
    Ok((even, odd))
}

/// The pair solving the Jacobi inversion problem.
#[derive(Clone, Debug)]
pub struct InversionPair {
    /// Degree `g` in `z`.
    pub rho12: Poly,
    /// Degree 1 in `w`.
    pub rho1: Poly,
}

/// `(ρ_{1,2}, ρ_1)` generated from F when the curve has it, else read from the
/// curve's `rho` data group.
pub fn jacobi_invert_symbolic(curve: &CurveModel) -> Result<InversionPair> {
    let (rho1, rho12) = if curve.f.is_some() {
        let r = generate_rho(curve, 2, PRINTED)?;
        let reference = curve.pack.group("rho").and_then(|g| g.get("rho12"));
        let (r12, _) = eliminate_w(&r[0].poly, &r[1].poly, reference)?;
        (r[0].poly.clone(), r12)
    } else {
        let grp = curve.pack.require_group("rho")?;
        (grp.require("rho1")?.clone(), grp.require("rho12")?.clone())
    };
    check_inversion_pair(curve.genus, &rho12, &rho1)?;
    Ok(InversionPair { rho12, rho1 })
}

fn check_inversion_pair(g: usize, rho12: &Poly, rho1: &Poly) -> Result<()> {
    let deg = |p: &Poly, v: Var| p.registry().index_of(&v).map_or(0, |i| p.degree_in(i));
    if deg(rho12, Var::Z) as usize != g || deg(rho12, Var::W) != 0 {
        return Err(Error::internal(format!(
            "ρ_(1,2) has z-degree {} and w-degree {}; expected {g} and 0",
            deg(rho12, Var::Z),
            deg(rho12, Var::W)
        )));
    }
    if deg(rho1, Var::W) != 1 {
        return Err(Error::internal(format!("ρ_1 has w-degree {}, expected 1", deg(rho1, Var::W))));
    }
    Ok(())
}

/// `∂/∂u_k` of a polynomial in ℘-symbols and λ, by `∂_k ℘_S = ℘_{S∪k}`.
pub fn differentiate_symbolic(p: &Poly, k: u8) -> Result<Poly> {
    let reg = p.registry();
    let mut extra = Vec::new();
    for i in p.support() {
        match reg.var(i) {
            Var::Lam(_) => {}
            Var::Sym(s) if s.kind == SymbolKind::P => {
                extra.push(Var::Sym(s.derivative(k).expect("p-symbol derivative")))
            }
            v => {
                return Err(Error::usage(format!("no differentiation rule for {v}")));
            }
        }
    }
    let ext = VariableRegistry::extended(reg, extra);
    let p = p.with_registry(&ext)?;
    let mut acc = Poly::zero(&ext);
    for i in p.support() {
        if let Var::Sym(s) = ext.var(i) {
            let d = Poly::var(&ext, &Var::Sym(s.derivative(k).expect("p-symbol")))?;
            acc = &acc + &(&p.differentiate_idx(i) * &d);
        }
    }
    Ok(acc.compact())
}

/// `∂_i relA - ∂_j relB`.
pub fn cross_differentiate(rel_a: &Poly, rel_b: &Poly, i: u8, j: u8) -> Result<Poly> {
    let a = differentiate_symbolic(rel_a, i)?;
    let b = differentiate_symbolic(rel_b, j)?;
    let (a, b) = Poly::align(&a, &b)?;
    Ok((&a - &b).compact())
}

/// Drop every term carrying a λ.
pub fn at_lambda_zero(p: &Poly) -> Poly {
    let reg = p.registry().clone();
    p.filter_terms(|m| m.factors().all(|(i, _)| !matches!(reg.var(i), Var::Lam(_))))
        .compact()
}

/// Monomial lookup helper used by tests and reports.
pub fn coefficient_of(p: &Poly, factors: &[(Var, u32)]) -> Rational {
    let idx: Option<Vec<(usize, u32)>> = factors
        .iter()
        .map(|(v, e)| p.registry().index_of(v).map(|i| (i, *e)))
        .collect();
    match idx {
        Some(idx) => p.coefficient(&Monomial::from_pairs(idx)),
        None => Rational::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_multi_indices() {
        let a = multi_indices(&[2, 1], 2);
        assert_eq!(a, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![0, 2]]);
    }

    #[test]
    fn symbol_extension() {
        assert_eq!(extended_symbol(&[6, 6], &[0, 0, 0, 0, 1, 2]).to_string(), "p[5,6,6,6,6]");
    }
}
