//! Exact values of σ, ℘ and Q at rational points of the λ = 0 model, where σ
//! is the Schur–Weierstrass polynomial.

use std::cell::RefCell;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rustc_hash::FxHashMap;

use crate::algebra::rational::{self, Rational};
use crate::algebra::{AbelianSymbol, Monomial, Point, Poly, SymbolKind, Var};
use crate::error::{Error, Result};
use crate::schur::schur_weierstrass;

/// σ at λ = 0 with memoized partial derivatives.
pub struct SigmaModel {
    genus: usize,
    sw: Poly,
    /// Registry index of `u_k` at position `k - 1`, if `u_k` occurs.
    u_idx: Vec<Option<usize>>,
    derivs: RefCell<FxHashMap<Vec<u32>, Poly>>,
}

impl SigmaModel {
    pub fn new(n: u32, s: u32) -> Result<Self> {
        let sw = schur_weierstrass(n, s)?;
        let genus = ((n - 1) * (s - 1) / 2) as usize;
        Self::from_poly(sw, genus)
    }

    /// Any polynomial in `u_1..u_genus` may play the role of σ.
    pub fn from_poly(sw: Poly, genus: usize) -> Result<Self> {
        let reg = sw.registry().clone();
        for v in reg.vars() {
            match v {
                Var::U(k) if (*k as usize) >= 1 && (*k as usize) <= genus => {}
                other => {
                    return Err(Error::usage(format!("σ may only involve u_1..u_{genus}, found {other}")))
                }
            }
        }
        let u_idx = (1..=genus).map(|k| reg.index_of(&Var::U(k as u8))).collect();
        Ok(SigmaModel {
            genus,
            sw,
            u_idx,
            derivs: RefCell::new(FxHashMap::default()),
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn polynomial(&self) -> &Poly {
        &self.sw
    }

    /// `∂^α σ` as a polynomial.
    pub fn derivative(&self, alpha: &[u32]) -> Poly {
        if let Some(p) = self.derivs.borrow().get(alpha) {
            return p.clone();
        }
        let Some(k) = alpha.iter().rposition(|&e| e > 0) else {
            return self.sw.clone();
        };
        let mut parent = alpha.to_vec();
        parent[k] -= 1;
        let d = match self.u_idx[k] {
            Some(i) => self.derivative(&parent).differentiate_idx(i),
            None => Poly::zero(self.sw.registry()),
        };
        self.derivs.borrow_mut().insert(alpha.to_vec(), d.clone());
        d
    }

    pub fn value_at(&self, point: &[Rational]) -> Rational {
        eval_u(&self.sw, &self.u_idx, point)
    }
}

fn eval_u(p: &Poly, u_idx: &[Option<usize>], point: &[Rational]) -> Rational {
    let mut by_reg: FxHashMap<usize, Rational> = FxHashMap::default();
    for (k, i) in u_idx.iter().enumerate() {
        if let Some(i) = i {
            by_reg.insert(*i, point[k].clone());
        }
    }
    p.evaluate(|i| by_reg.get(&i).cloned()).expect("σ involves only u variables")
}

fn alpha_of(indices: &[u8], genus: usize) -> Result<Vec<u32>> {
    let mut a = vec![0u32; genus];
    for &i in indices {
        if i == 0 || i as usize > genus {
            return Err(Error::usage(format!("index {i} outside 1..{genus}")));
        }
        a[i as usize - 1] += 1;
    }
    Ok(a)
}

fn factorial_of(alpha: &[u32]) -> Rational {
    alpha
        .iter()
        .fold(Rational::one(), |acc, &e| acc * Rational::from_integer(rational::factorial(e)))
}

/// Taylor coefficients `∂^α σ(u0) / α!` of σ about a rational point.
pub struct SigmaJet<'a> {
    model: &'a SigmaModel,
    point: Vec<Rational>,
    order: u32,
    coeffs: FxHashMap<Vec<u32>, Rational>,
}

impl<'a> SigmaJet<'a> {
    /// Jet with every coefficient of total order `<= order` computed; higher
    /// orders are filled in on demand.
    pub fn new(model: &'a SigmaModel, point: &[Rational], order: u32) -> Result<Self> {
        if point.len() != model.genus {
            return Err(Error::usage(format!(
                "point has {} coordinates, genus is {}",
                point.len(),
                model.genus
            )));
        }
        let mut jet = SigmaJet {
            model,
            point: point.to_vec(),
            order,
            coeffs: FxHashMap::default(),
        };
        for alpha in multi_indices_up_to(model.genus, order) {
            jet.coefficient(&alpha);
        }
        Ok(jet)
    }

    pub fn point(&self) -> &[Rational] {
        &self.point
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coefficient(&mut self, alpha: &[u32]) -> Rational {
        if let Some(c) = self.coeffs.get(alpha) {
            return c.clone();
        }
        let d = self.model.derivative(alpha);
        let c = eval_u(&d, &self.model.u_idx, &self.point) / factorial_of(alpha);
        self.coeffs.insert(alpha.to_vec(), c.clone());
        c
    }

    /// `∂^α σ(u0)`.
    pub fn derivative(&mut self, alpha: &[u32]) -> Rational {
        self.coefficient(alpha) * factorial_of(alpha)
    }

    pub fn value(&mut self) -> Rational {
        self.coefficient(&vec![0; self.model.genus])
    }

    /// Computed coefficients, sorted by multi-index.
    pub fn coefficients(&self) -> BTreeMap<Vec<u32>, Rational> {
        self.coeffs.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }
}

/// All multi-indices over `g` variables with total degree `<= order`.
pub fn multi_indices_up_to(g: usize, order: u32) -> Vec<Vec<u32>> {
    fn rec(g: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == g {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(g, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(g, order, &mut Vec::new(), &mut out);
    out
}

/// Exact ℘ and Q values at one point, all derived from the σ-jet.
pub struct AbelianValues<'a> {
    jet: SigmaJet<'a>,
    sigma: Rational,
    log: FxHashMap<Vec<u32>, Rational>,
    q: FxHashMap<Vec<u8>, Rational>,
}

impl<'a> AbelianValues<'a> {
    pub fn new(model: &'a SigmaModel, point: &[Rational]) -> Result<Self> {
        let mut jet = SigmaJet::new(model, point, 0)?;
        let sigma = jet.value();
        if sigma.is_zero() {
            let pt: Vec<String> = point.iter().map(rational::format).collect();
            return Err(Error::Divisor(format!("σ vanishes at ({})", pt.join(", "))));
        }
        Ok(AbelianValues {
            jet,
            sigma,
            log: FxHashMap::default(),
            q: FxHashMap::default(),
        })
    }

    pub fn sigma(&self) -> &Rational {
        &self.sigma
    }

    pub fn jet(&mut self) -> &mut SigmaJet<'a> {
        &mut self.jet
    }

    /// Taylor coefficient of `log σ` at `α != 0`, from
    /// `α_k S_0 L_α = α_k S_α - Σ_{0<β<α} β_k L_β S_{α-β}` with `k` any index where `α_k > 0`.
    fn log_coefficient(&mut self, alpha: &[u32]) -> Rational {
        if let Some(v) = self.log.get(alpha) {
            return v.clone();
        }
        let k = alpha.iter().position(|&e| e > 0).expect("nonzero multi-index");
        let ak = Rational::from_integer(alpha[k].into());
        let mut acc = &ak * self.jet.coefficient(alpha);
        for beta in sub_indices(alpha) {
            if beta[k] == 0 || beta.as_slice() == alpha {
                continue;
            }
            let rest: Vec<u32> = alpha.iter().zip(&beta).map(|(a, b)| a - b).collect();
            let lb = self.log_coefficient(&beta);
            let s = self.jet.coefficient(&rest);
            acc -= Rational::from_integer(beta[k].into()) * lb * s;
        }
        let v = acc / (ak * &self.sigma);
        self.log.insert(alpha.to_vec(), v.clone());
        v
    }

    /// `℘_S = -∂_S log σ`.
    pub fn p(&mut self, indices: &[u8]) -> Result<Rational> {
        if indices.is_empty() {
            return Err(Error::usage("℘ needs at least one index"));
        }
        let alpha = alpha_of(indices, self.jet.model.genus)?;
        Ok(-factorial_of(&alpha) * self.log_coefficient(&alpha))
    }

    /// `Q_S = -(1/2σ²) Δ_S σ(u)σ(v)|_{v=u}`; zero for an odd index count.
    pub fn q(&mut self, indices: &[u8]) -> Result<Rational> {
        let mut key = indices.to_vec();
        key.sort_unstable();
        if let Some(v) = self.q.get(&key) {
            return Ok(v.clone());
        }
        let g = self.jet.model.genus;
        alpha_of(&key, g)?;
        let m = key.len();
        if m % 2 == 1 {
            return Ok(Rational::zero());
        }
        if m > 24 {
            return Err(Error::usage("Q with more than 24 indices"));
        }
        let mut total = Rational::zero();
        for mask in 0u32..(1 << m) {
            let mut a = vec![0u32; g];
            let mut b = vec![0u32; g];
            for (pos, &i) in key.iter().enumerate() {
                if mask & (1 << pos) != 0 {
                    a[i as usize - 1] += 1;
                } else {
                    b[i as usize - 1] += 1;
                }
            }
            let term = self.jet.derivative(&a) * self.jet.derivative(&b);
            if (m - mask.count_ones() as usize) % 2 == 1 {
                total -= term;
            } else {
                total += term;
            }
        }
        let v = -total / (Rational::from_integer(2.into()) * &self.sigma * &self.sigma);
        self.q.insert(key, v.clone());
        Ok(v)
    }

    pub fn symbol(&mut self, s: &AbelianSymbol) -> Result<Rational> {
        match s.kind {
            SymbolKind::P => self.p(&s.indices),
            SymbolKind::Q => self.q(&s.indices),
        }
    }

    /// Value of a polynomial in ℘/Q symbols with every λ set to zero.
    pub fn evaluate(&mut self, rel: &Poly) -> Result<Rational> {
        let reg = rel.registry().clone();
        let mut vals: FxHashMap<usize, Rational> = FxHashMap::default();
        for i in rel.support() {
            let v = match reg.var(i) {
                Var::Lam(_) => Rational::zero(),
                Var::Sym(s) => self.symbol(s)?,
                other => return Err(Error::usage(format!("cannot evaluate {other} at a point of J"))),
            };
            vals.insert(i, v);
        }
        rel.evaluate(|i| vals.get(&i).cloned())
    }

    /// All `℘_S` with `2 <= |S| <= max_order`.
    pub fn pfunc_values(&mut self, max_order: usize) -> Result<Vec<(AbelianSymbol, Rational)>> {
        let g = self.jet.model.genus as u8;
        let mut out = Vec::new();
        for size in 2..=max_order {
            for idx in sorted_multisets(g, size) {
                let v = self.p(&idx)?;
                out.push((AbelianSymbol::p(&idx), v));
            }
        }
        Ok(out)
    }
}

/// Multi-indices `β <= α` componentwise.
fn sub_indices(alpha: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &a in alpha {
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for prefix in &out {
            for e in 0..=a {
                let mut p = prefix.clone();
                p.push(e);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Sorted index multisets of the given size over `1..=g`.
pub fn sorted_multisets(g: u8, size: usize) -> Vec<Vec<u8>> {
    fn rec(g: u8, start: u8, size: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..=g {
            cur.push(i);
            rec(g, i, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(g, 1, size, &mut Vec::new(), &mut out);
    out
}

/// Value of a two-point polynomial: symbols tagged `{u}` use `at_u`, `{v}` use `at_v`.
pub fn evaluate_two_point(rel: &Poly, at_u: &mut AbelianValues, at_v: &mut AbelianValues) -> Result<Rational> {
    let reg = rel.registry().clone();
    let mut vals: FxHashMap<usize, Rational> = FxHashMap::default();
    for i in rel.support() {
        let v = match reg.var(i) {
            Var::Lam(_) => Rational::zero(),
            Var::Sym(s) if s.point == Point::U => at_u.symbol(s)?,
            Var::Sym(s) if s.point == Point::V => at_v.symbol(s)?,
            other => {
                return Err(Error::usage(format!("{other} has no evaluation point tag")));
            }
        };
        vals.insert(i, v);
    }
    rel.evaluate(|i| vals.get(&i).cloned())
}

/// The even-block expansion `Q_S = -1/2 Σ_{partitions of S into even blocks} Π (-2 ℘_B)`,
/// as a polynomial in ℘ symbols. An odd index count has no such partition and gives zero.
pub fn q_expansion(indices: &[u8], reg_scheme: Option<&crate::algebra::WeightScheme>) -> Result<Poly> {
    if indices.len() < 2 {
        return Err(Error::usage("Q needs at least two indices"));
    }
    let mut parts: Vec<Vec<Vec<u8>>> = Vec::new();
    even_partitions(indices, &mut Vec::new(), &mut parts);
    let mut syms: Vec<Var> = Vec::new();
    for p in &parts {
        for b in p {
            syms.push(Var::Sym(AbelianSymbol::p(b)));
        }
    }
    let reg = crate::algebra::VariableRegistry::new(syms, reg_scheme);
    let mut terms = Vec::new();
    for p in &parts {
        let mut c = rational::rat(-1, 2);
        let mut pairs = Vec::new();
        for b in p {
            c *= rational::int(-2);
            pairs.push((reg.require(&Var::Sym(AbelianSymbol::p(b)))?, 1));
        }
        terms.push((Monomial::from_pairs(pairs), c));
    }
    Ok(Poly::from_terms(&reg, terms))
}

/// Set partitions of the positions of `rest` into blocks of even size.
fn even_partitions(rest: &[u8], cur: &mut Vec<Vec<u8>>, out: &mut Vec<Vec<Vec<u8>>>) {
    if rest.is_empty() {
        out.push(cur.clone());
        return;
    }
    let first = rest[0];
    let others = &rest[1..];
    let m = others.len();
    // Choose which of the others join the first element's block.
    for mask in 0u32..(1 << m) {
        if (mask.count_ones() + 1) % 2 == 1 {
            continue;
        }
        let mut block = vec![first];
        let mut remaining = Vec::new();
        for (pos, &i) in others.iter().enumerate() {
            if mask & (1 << pos) != 0 {
                block.push(i);
            } else {
                remaining.push(i);
            }
        }
        cur.push(block);
        even_partitions(&remaining, cur, out);
        cur.pop();
    }
}

/// Largest numerator or denominator magnitude of sampled coordinates.
pub const SAMPLE_BOUND: i64 = 40;

/// A random rational point with `|num|, |den| <= 40`.
pub fn sample_point<R: Rng>(rng: &mut R, genus: usize) -> Vec<Rational> {
    (0..genus)
        .map(|_| {
            let num = rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
            let den = rng.gen_range(1..=SAMPLE_BOUND);
            rational::rat(num, den)
        })
        .collect()
}

/// Sample until σ is nonzero; returns the point and the number of rejected draws.
pub fn sample_regular_point<R: Rng>(model: &SigmaModel, rng: &mut R) -> Result<(Vec<Rational>, usize)> {
    for rejected in 0..1000 {
        let p = sample_point(rng, model.genus);
        if !model.value_at(&p).is_zero() {
            if rejected > 0 {
                log::info!("resampled {rejected} point(s) on the theta divisor");
            }
            return Ok((p, rejected));
        }
    }
    Err(Error::internal("could not find a point off the theta divisor in 1000 draws"))
}

/// Magnitude order for residual reporting: exact zero or the rational itself.
pub fn max_abs<'r>(values: impl IntoIterator<Item = &'r Rational>) -> Rational {
    values
        .into_iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::VariableRegistry;

    fn linear_sigma() -> SigmaModel {
        let reg = VariableRegistry::new([Var::U(1)], None);
        SigmaModel::from_poly(Poly::var(&reg, &Var::U(1)).unwrap(), 1).unwrap()
    }

    #[test]
    fn jet_of_u1() {
        let m = linear_sigma();
        let jet = SigmaJet::new(&m, &[rational::int(5)], 3).unwrap();
        let c = jet.coefficients();
        assert_eq!(c[&vec![0]], rational::int(5));
        assert_eq!(c[&vec![1]], rational::int(1));
        assert!(c[&vec![2]].is_zero());
    }

    #[test]
    fn p11_of_linear_sigma() {
        // -(log u)'' = 1/u^2
        let m = linear_sigma();
        let mut v = AbelianValues::new(&m, &[rational::rat(3, 2)]).unwrap();
        assert_eq!(v.p(&[1, 1]).unwrap(), rational::rat(4, 9));
        assert_eq!(v.q(&[1, 1]).unwrap(), rational::rat(4, 9));
        assert!(v.q(&[1, 1, 1]).unwrap().is_zero());
        assert!(AbelianValues::new(&m, &[Rational::zero()]).is_err());
    }

    #[test]
    fn q4_expansion_shape() {
        let q = q_expansion(&[1, 2, 3, 4], None).unwrap();
        assert_eq!(q.len(), 4);
        let q6 = q_expansion(&[6, 6, 6, 6, 6, 6], None).unwrap();
        assert!(q_expansion(&[1, 2, 3], None).unwrap().is_zero());
        assert!(q_expansion(&[4], None).is_err());
        // ℘_666666 - 30 ℘_66 ℘_6666 + 60 ℘_66^3
        assert_eq!(q6.to_string(), "60*p[6,6]^3 - 30*p[6,6]*p[6,6,6,6] + p[6,6,6,6,6,6]");
    }
}
