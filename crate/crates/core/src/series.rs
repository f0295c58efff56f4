//! Truncated Laurent series in the local parameter ξ at the point at infinity,
//! with polynomial coefficients, and the curve-local expansions of x, y and u_i.

use std::fmt;

use num_traits::{One, Signed};

use crate::algebra::rational::{self, Rational};
use crate::algebra::{Poly, Registry};
use crate::error::{Error, Result};

/// Truncation marker for series that are exact (finite Laurent polynomials).
pub const EXACT: i32 = i32::MAX / 4;

/// `Σ c_k ξ^k` for `min ≤ k < trunc`; coefficients at `k ≥ trunc` are unknown.
#[derive(Clone, Debug)]
pub struct LaurentSeries {
    reg: Registry,
    min: i32,
    coeffs: Vec<Poly>,
    trunc: i32,
}

impl LaurentSeries {
    pub fn zero(reg: &Registry, trunc: i32) -> Self {
        LaurentSeries {
            reg: reg.clone(),
            min: trunc.min(0),
            coeffs: Vec::new(),
            trunc,
        }
    }

    /// `c · ξ^k`, exact.
    pub fn monomial(c: Poly, k: i32) -> Self {
        let reg = c.registry().clone();
        LaurentSeries {
            reg,
            min: k,
            coeffs: vec![c],
            trunc: EXACT,
        }
        .normalized()
    }

    pub fn constant(c: Poly) -> Self {
        Self::monomial(c, 0)
    }

    /// From `(exponent, coefficient)` pairs, known below `trunc`.
    pub fn from_terms(reg: &Registry, terms: impl IntoIterator<Item = (i32, Poly)>, trunc: i32) -> Self {
        let terms: Vec<(i32, Poly)> = terms.into_iter().filter(|(k, _)| *k < trunc).collect();
        let Some(min) = terms.iter().map(|(k, _)| *k).min() else {
            return Self::zero(reg, trunc);
        };
        let max = terms.iter().map(|(k, _)| *k).max().unwrap_or(min);
        let mut coeffs = vec![Poly::zero(reg); (max - min + 1) as usize];
        for (k, c) in terms {
            let slot = &mut coeffs[(k - min) as usize];
            *slot = &*slot + &c;
        }
        LaurentSeries {
            reg: reg.clone(),
            min,
            coeffs,
            trunc,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        let known = (self.trunc - self.min).max(0) as usize;
        self.coeffs.truncate(known);
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.min += lead_zeros as i32;
        }
        if self.coeffs.is_empty() {
            self.min = self.trunc.min(0);
        }
        self
    }

    pub fn registry(&self) -> &Registry {
        &self.reg
    }

    pub fn truncation(&self) -> i32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the leading nonzero coefficient.
    pub fn valuation(&self) -> Option<i32> {
        (!self.coeffs.is_empty()).then_some(self.min)
    }

    /// Coefficient at `ξ^k`; `None` when `k` lies at or beyond the truncation order.
    pub fn coeff(&self, k: i32) -> Option<Poly> {
        if k >= self.trunc {
            return None;
        }
        let idx = k - self.min;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Some(Poly::zero(&self.reg))
        } else {
            Some(self.coeffs[idx as usize].clone())
        }
    }

    pub fn coeff_ref(&self, k: i32) -> Option<&Poly> {
        let idx = k - self.min;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            None
        } else {
            Some(&self.coeffs[idx as usize])
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Poly)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min + i as i32, c))
    }

    pub fn with_truncation(&self, trunc: i32) -> Self {
        let mut s = self.clone();
        s.trunc = s.trunc.min(trunc);
        s.normalized()
    }

    /// Drop coefficients at `ξ^k`, `k ≥ trunc`, and treat the rest as exact.
    pub fn as_polynomial_below(&self, trunc: i32) -> Self {
        let mut s = self.with_truncation(trunc);
        s.trunc = EXACT;
        s
    }

    pub fn with_registry(&self, reg: &Registry) -> Result<Self> {
        Ok(LaurentSeries {
            reg: reg.clone(),
            min: self.min,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.with_registry(reg))
                .collect::<Result<_>>()?,
            trunc: self.trunc,
        })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.reg.same_as(&other.reg) {
            Ok(())
        } else {
            Err(Error::usage("series live over different registries"))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let trunc = self.trunc.min(other.trunc);
        let terms = self
            .terms()
            .chain(other.terms())
            .map(|(k, c)| (k, c.clone()));
        Ok(Self::from_terms(&self.reg, terms, trunc))
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            reg: self.reg.clone(),
            min: self.min,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            trunc: self.trunc,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (va, vb) = match (self.valuation(), other.valuation()) {
            (Some(a), Some(b)) => (a, b),
            (a, b) => {
                let trunc = sat_add(self.trunc, b.unwrap_or(other.trunc))
                    .min(sat_add(other.trunc, a.unwrap_or(self.trunc)));
                return Ok(Self::zero(&self.reg, trunc));
            }
        };
        let trunc = sat_add(self.trunc, vb).min(sat_add(other.trunc, va));
        let len = if trunc >= EXACT {
            self.coeffs.len() + other.coeffs.len() - 1
        } else {
            (trunc - va - vb).max(0) as usize
        };
        let mut coeffs = vec![Poly::zero(&self.reg); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                coeffs[i + j] = &coeffs[i + j] + &prod;
            }
        }
        Ok(LaurentSeries {
            reg: self.reg.clone(),
            min: va + vb,
            coeffs,
            trunc,
        }
        .normalized())
    }

    pub fn scale(&self, c: &Poly) -> Result<Self> {
        self.mul(&Self::constant(c.clone()).with_registry(&self.reg)?)
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        LaurentSeries {
            reg: self.reg.clone(),
            min: self.min,
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
            trunc: self.trunc,
        }
        .normalized()
    }

    /// Multiply by `ξ^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentSeries {
            reg: self.reg.clone(),
            min: self.min + k,
            coeffs: self.coeffs.clone(),
            trunc: sat_add(self.trunc, k),
        }
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::constant(Poly::one(&self.reg));
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Leading coefficient as a rational constant, or a usage error.
    fn unit_lead(&self, what: &str) -> Result<(i32, Rational)> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::usage(format!("{what} of a zero series")))?;
        let lead = &self.coeffs[0];
        if !lead.is_constant() {
            return Err(Error::usage(format!(
                "{what} needs a constant leading coefficient, got {lead}"
            )));
        }
        Ok((v, lead.constant_term()))
    }

    /// Relative precision: number of known coefficients from the valuation on.
    fn relative_precision(&self) -> i32 {
        match self.valuation() {
            Some(v) if self.trunc < EXACT => self.trunc - v,
            _ => EXACT,
        }
    }

    /// Multiplicative inverse; the leading coefficient must be a nonzero constant.
    pub fn inverse(&self) -> Result<Self> {
        let (v, c) = self.unit_lead("inverse")?;
        let unit = self.shift(-v).scale_rational(&(Rational::one() / &c));
        let rel = unit.relative_precision().min(self.default_precision_cap());
        let inv = unit_inverse(&unit, rel)?;
        Ok(inv.shift(-v).scale_rational(&(Rational::one() / c)))
    }

    fn default_precision_cap(&self) -> i32 {
        if self.trunc >= EXACT {
            // An exact series with a non-trivial tail has an infinite inverse;
            // callers truncate beforehand, this only guards against runaway loops.
            self.coeffs.len() as i32 * 64 + 64
        } else {
            EXACT
        }
    }

    /// Principal n-th root: leading term `c·ξ^m` needs `n | m` and a rational
    /// n-th root of `c`; the branch with positive real leading coefficient is taken.
    pub fn nth_root(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::usage("0-th root"));
        }
        let (v, c) = self.unit_lead("nth_root")?;
        if v % n as i32 != 0 {
            return Err(Error::usage(format!(
                "leading exponent {v} is not divisible by {n}"
            )));
        }
        let root_c = exact_root(&c, n).ok_or_else(|| {
            Error::usage(format!("leading coefficient {c} has no rational {n}-th root"))
        })?;
        let unit = self.shift(-v).scale_rational(&(Rational::one() / &c));
        let rel = unit.relative_precision().min(self.default_precision_cap());
        let r = unit_nth_root(&unit, n, rel)?;
        Ok(r.shift(v / n as i32).scale_rational(&root_c))
    }

    /// Term-wise antiderivative with zero constant of integration.
    pub fn integrate(&self) -> Result<Self> {
        let mut terms = Vec::new();
        for (k, c) in self.terms() {
            if k == -1 {
                return Err(Error::usage(
                    "series has a ξ^-1 term; its integral is a logarithm",
                ));
            }
            terms.push((k + 1, c.scale(&rational::rat(1, (k + 1) as i64))));
        }
        Ok(Self::from_terms(&self.reg, terms, sat_add(self.trunc, 1)))
    }

    /// Substitute series for polynomial variables: `p(s_1, …, s_k)`.
    /// Coefficients of `p` must be free of the substituted variables; the
    /// remaining variables of `p` must exist in the series registry.
    pub fn substitute_into(p: &Poly, subs: &[(usize, &LaurentSeries)], reg: &Registry) -> Result<Self> {
        let mut acc: Option<LaurentSeries> = None;
        let mut cache: rustc_hash::FxHashMap<(usize, u32), LaurentSeries> = Default::default();
        for (m, c) in p.terms() {
            let mut rest = Vec::new();
            let mut factor: Option<LaurentSeries> = None;
            for (i, e) in m.factors() {
                if let Some((_, s)) = subs.iter().find(|(j, _)| *j == i) {
                    let pw = match cache.get(&(i, e)) {
                        Some(pw) => pw.clone(),
                        None => {
                            let pw = s.pow(e)?;
                            cache.insert((i, e), pw.clone());
                            pw
                        }
                    };
                    factor = Some(match factor {
                        None => pw,
                        Some(f) => f.mul(&pw)?,
                    });
                } else {
                    rest.push((p.registry().var(i).clone(), e));
                }
            }
            let mut coeff = Poly::constant(reg, c.clone());
            for (var, e) in rest {
                coeff = &coeff * &Poly::var(reg, &var)?.pow(e);
            }
            let term = match factor {
                None => LaurentSeries::constant(coeff),
                Some(f) => f.scale(&coeff)?,
            };
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        Ok(acc.unwrap_or_else(|| LaurentSeries::zero(reg, EXACT)))
    }
}

fn sat_add(a: i32, b: i32) -> i32 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        a + b
    }
}

/// Rational n-th root when it exists (positive branch for even n).
pub fn exact_root(c: &Rational, n: u32) -> Option<Rational> {
    if c.is_negative() && n % 2 == 0 {
        return None;
    }
    let root_int = |x: &num_bigint::BigInt| -> Option<num_bigint::BigInt> {
        let r = x.abs().nth_root(n);
        (num_traits::pow(r.clone(), n as usize) == x.abs()).then_some(r)
    };
    let num = root_int(c.numer())?;
    let den = root_int(c.denom())?;
    let r = Rational::new(num, den);
    Some(if c.is_negative() { -r } else { r })
}

/// Inverse of a unit series `1 + O(ξ)` to relative precision `rel`.
fn unit_inverse(u: &LaurentSeries, rel: i32) -> Result<LaurentSeries> {
    let reg = u.registry().clone();
    let one = LaurentSeries::constant(Poly::one(&reg));
    let two = LaurentSeries::constant(Poly::constant(&reg, rational::int(2)));
    let mut r = one.with_truncation(1);
    let mut prec = 1;
    while prec < rel {
        prec = (prec * 2).min(rel);
        let ut = u.with_truncation(prec);
        // r <- r (2 - u r)
        r = r.as_polynomial_below(prec);
        let ur = ut.mul(&r)?;
        r = r.mul(&two.sub(&ur)?)?.with_truncation(prec);
    }
    Ok(r.with_truncation(rel))
}

/// n-th root of a unit series by Newton iteration on the inverse root.
fn unit_nth_root(u: &LaurentSeries, n: u32, rel: i32) -> Result<LaurentSeries> {
    if n == 1 {
        return Ok(u.with_truncation(rel));
    }
    let reg = u.registry().clone();
    let one = LaurentSeries::constant(Poly::one(&reg));
    let inv_n = rational::rat(1, n as i64);
    // t ≈ u^(-1/n); iteration t <- t + t (1 - u t^n) / n
    let mut t = one.with_truncation(1);
    let mut prec = 1;
    while prec < rel {
        prec = (prec * 2).min(rel);
        t = t.as_polynomial_below(prec);
        let ut = u.with_truncation(prec);
        let err = one.sub(&ut.mul(&t.pow(n)?)?)?;
        t = t.add(&t.mul(&err)?.scale_rational(&inv_n))?.with_truncation(prec);
    }
    // u^(1/n) = u · t^(n-1)
    Ok(u.mul(&t.pow(n - 1)?)?.with_truncation(rel))
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})*xi^{k}")?;
        }
        if self.trunc < EXACT {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "O(xi^{})", self.trunc)?;
        } else if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Expansions of the curve coordinates and Abelian coordinates near infinity.
#[derive(Clone, Debug)]
pub struct LocalExpansions {
    pub x: LaurentSeries,
    pub y: LaurentSeries,
    /// `u[i-1]` is the expansion of `u_i`.
    pub u: Vec<LaurentSeries>,
    /// `du[i-1]` is `du_i/dξ`.
    pub du: Vec<LaurentSeries>,
}

/// Series inputs needed to build the expansions; independent of how the curve
/// model is stored.
pub struct ExpansionInput<'a> {
    pub n: u32,
    pub s: u32,
    /// Coefficient registry; must contain `lam0..lam{s-1}`, `x` and `y`.
    pub reg: &'a Registry,
    /// Holomorphic differential numerators `g_i(x, y)` over `reg`.
    pub g: &'a [Poly],
}

/// `x = ξ^-n`, `y = (x^s + Σ λ_j x^j)^(1/n)`, `du_i/dξ = -g_i(x,y) ξ^(-n-1) / y^(n-1)`,
/// `u_i = ∫ du_i`, each known to `order` terms past its leading term.
pub fn local_expansions(input: &ExpansionInput<'_>, order: i32) -> Result<LocalExpansions> {
    use crate::algebra::Var;
    let (n, s) = (input.n as i32, input.s as i32);
    let reg = input.reg;
    if order < 1 {
        return Err(Error::usage("expansion order must be at least 1"));
    }
    let x = LaurentSeries::monomial(Poly::one(reg), -n);
    // f(x(ξ)) ξ^{ns} = 1 + Σ_j λ_j ξ^{n(s-j)}
    let mut terms = vec![(0, Poly::one(reg))];
    for j in 0..s {
        terms.push((n * (s - j), Poly::var(reg, &Var::Lam(j as u8))?));
    }
    let f_unit = LaurentSeries::from_terms(reg, terms, order + 2 * n);
    let y = f_unit.nth_root(input.n)?.shift(-s).with_truncation(-s + order + 2 * n);

    let xi_idx = reg.require(&Var::X)?;
    let yi_idx = reg.require(&Var::Y)?;
    let y_pow_inv = y.pow(input.n - 1)?.inverse()?;
    let mut du = Vec::new();
    let mut u = Vec::new();
    for g in input.g {
        let gs = LaurentSeries::substitute_into(g, &[(xi_idx, &x), (yi_idx, &y)], reg)?;
        let d = gs.mul(&y_pow_inv)?.shift(-n - 1).neg();
        let lead = d
            .valuation()
            .ok_or_else(|| Error::internal("holomorphic differential expands to zero"))?;
        let d = d.with_truncation(lead + order);
        let ui = d.integrate()?;
        du.push(d);
        u.push(ui);
    }
    Ok(LocalExpansions { x, y, u, du })
}

/// Leading `(exponent, coefficient)` of a series, if any.
pub fn leading_term(s: &LaurentSeries) -> Option<(i32, Rational)> {
    let v = s.valuation()?;
    let c = s.coeff_ref(v)?;
    c.is_constant().then(|| (v, c.constant_term()))
}
