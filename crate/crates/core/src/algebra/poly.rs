use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use super::monomial::Monomial;
use super::rational::{self, Rational};
use super::registry::{Parity, Registry, Var, VariableRegistry};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept sorted in descending graded-lex order with no zero
/// coefficients, so structural equality is mathematical equality.
#[derive(Clone, Debug)]
pub struct Poly {
    reg: Registry,
    terms: Vec<(Monomial, Rational)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.reg.same_as(&other.reg) && self.terms == other.terms
    }
}

fn collect(reg: &Registry, map: FxHashMap<Monomial, Rational>) -> Poly {
    let mut terms: Vec<(Monomial, Rational)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    Poly {
        reg: reg.clone(),
        terms,
    }
}

impl Poly {
    pub fn zero(reg: &Registry) -> Self {
        Poly {
            reg: reg.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(reg: &Registry, c: Rational) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::one(), c)]
        };
        Poly {
            reg: reg.clone(),
            terms,
        }
    }

    pub fn one(reg: &Registry) -> Self {
        Self::constant(reg, Rational::one())
    }

    pub fn var(reg: &Registry, var: &Var) -> Result<Self> {
        let idx = reg.require(var)?;
        Ok(Self::monomial(reg, Monomial::var(idx, 1), Rational::one()))
    }

    pub fn monomial(reg: &Registry, m: Monomial, c: Rational) -> Self {
        if let Some(max) = m.max_index() {
            assert!(max < reg.len(), "monomial index outside registry");
        }
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Poly {
            reg: reg.clone(),
            terms,
        }
    }

    /// Build from terms in any order; like terms are combined.
    pub fn from_terms(reg: &Registry, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut map: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in terms {
            if let Some(max) = m.max_index() {
                assert!(max < reg.len(), "monomial index outside registry");
            }
            *map.entry(m).or_insert_with(Rational::zero) += c;
        }
        collect(reg, map)
    }

    pub fn registry(&self) -> &Registry {
        &self.reg
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_term(&self) -> Rational {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Rational::zero(),
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|k| self.terms[k].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    fn check_same(&self, other: &Poly) -> Result<()> {
        if self.reg.same_as(&other.reg) {
            Ok(())
        } else {
            Err(Error::usage("polynomials live over different variable registries"))
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly {
            reg: self.reg.clone(),
            terms: out,
        }
    }

    fn mul_unchecked(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.reg);
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            let terms = large
                .terms
                .iter()
                .map(|(n, d)| (n.mul(m), d * c))
                .collect();
            return Poly {
                reg: self.reg.clone(),
                terms,
            };
        }
        let mut map: FxHashMap<Monomial, Rational> =
            FxHashMap::with_capacity_and_hasher(small.len() * large.len(), Default::default());
        for (m1, c1) in &small.terms {
            for (m2, c2) in &large.terms {
                let prod = c1 * c2;
                match map.entry(m1.mul(m2)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += prod,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        collect(&self.reg, map)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.reg);
        }
        Poly {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    /// Multiply by a single monomial.
    pub fn shift(&self, m: &Monomial) -> Poly {
        Poly {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(&self.reg);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    /// Re-express over a registry containing every variable of this one.
    pub fn with_registry(&self, reg: &Registry) -> Result<Poly> {
        if self.reg.same_as(reg) {
            return Ok(Poly {
                reg: reg.clone(),
                terms: self.terms.clone(),
            });
        }
        let used = self.support();
        let mut map = vec![usize::MAX; self.reg.len()];
        for i in used {
            map[i] = reg.require(self.reg.var(i))?;
        }
        Ok(Poly::from_terms(
            reg,
            self.terms.iter().map(|(m, c)| (m.remap(&map), c.clone())),
        ))
    }

    /// Bring two polynomials onto their common registry.
    pub fn align(a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let reg = VariableRegistry::union(&a.reg, &b.reg)?;
        Ok((a.with_registry(&reg)?, b.with_registry(&reg)?))
    }

    pub fn differentiate(&self, var: &Var) -> Result<Poly> {
        let idx = self.reg.require(var)?;
        Ok(self.differentiate_idx(idx))
    }

    pub fn differentiate_idx(&self, idx: usize) -> Poly {
        Poly::from_terms(
            &self.reg,
            self.terms.iter().filter_map(|(m, c)| {
                let (e, rest) = m.split_off(idx);
                if e == 0 {
                    None
                } else {
                    Some((rest.mul(&Monomial::var(idx, e - 1)), c * Rational::from_integer(e.into())))
                }
            }),
        )
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(idx)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Coefficients `c_k` with `self = Σ c_k · var^k`; `c_k` is free of `var`.
    pub fn coefficients_in(&self, idx: usize) -> Vec<Poly> {
        let deg = self.degree_in(idx) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(idx);
            buckets[e as usize].push((rest, c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                Poly {
                    reg: self.reg.clone(),
                    terms: t,
                }
            })
            .collect()
    }

    /// Inverse of [`Poly::coefficients_in`].
    pub fn from_coefficients_in(reg: &Registry, idx: usize, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let xk = Monomial::var(idx, k as u32);
            terms.extend(c.terms.iter().map(|(m, d)| (m.mul(&xk), d.clone())));
        }
        Poly::from_terms(reg, terms)
    }

    /// Replace each listed variable by a polynomial over the same registry.
    pub fn substitute(&self, subs: &[(usize, Poly)]) -> Poly {
        let mut cache: FxHashMap<(usize, u32), Poly> = FxHashMap::default();
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut factor = Poly::constant(&self.reg, c.clone());
            for (i, e) in m.factors() {
                match subs.iter().find(|(j, _)| *j == i) {
                    Some((_, p)) => {
                        let pw = cache.entry((i, e)).or_insert_with(|| p.pow(e)).clone();
                        factor = factor.mul_unchecked(&pw);
                    }
                    None => kept.push((i, e)),
                }
            }
            let km = Monomial::from_pairs(kept);
            for (fm, fc) in factor.terms {
                *acc.entry(fm.mul(&km)).or_insert_with(Rational::zero) += fc;
            }
        }
        collect(&self.reg, acc)
    }

    /// Substitute rational values for some variables; others stay symbolic.
    pub fn evaluate_partial(&self, value: impl Fn(usize) -> Option<Rational>) -> Poly {
        let mut cache: FxHashMap<(usize, u32), Rational> = FxHashMap::default();
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut kept = Vec::new();
            for (i, e) in m.factors() {
                if let Some(v) = cache.get(&(i, e)) {
                    coeff *= v;
                    continue;
                }
                match value(i) {
                    Some(v) => {
                        let pv = rational::pow(&v, e);
                        coeff *= &pv;
                        cache.insert((i, e), pv);
                    }
                    None => kept.push((i, e)),
                }
            }
            if !coeff.is_zero() {
                *acc.entry(Monomial::from_pairs(kept)).or_insert_with(Rational::zero) += coeff;
            }
        }
        collect(&self.reg, acc)
    }

    /// Full evaluation; every variable must receive a value.
    pub fn evaluate(&self, value: impl Fn(usize) -> Option<Rational>) -> Result<Rational> {
        let p = self.evaluate_partial(value);
        if p.is_constant() {
            Ok(p.constant_term())
        } else {
            Err(Error::usage("evaluation left free variables"))
        }
    }

    /// Keep only terms satisfying the predicate.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Poly {
        Poly {
            reg: self.reg.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).cloned().collect(),
        }
    }

    /// Variables (indices) that actually occur.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.reg.len()];
        for (m, _) in &self.terms {
            for (i, _) in m.factors() {
                seen[i] = true;
            }
        }
        seen.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
    }

    /// Same polynomial over the registry of the variables it actually uses.
    pub fn compact(&self) -> Poly {
        let used: Vec<Var> = self.support().into_iter().map(|i| self.reg.var(i).clone()).collect();
        let reg = VariableRegistry::new(used, self.reg.scheme());
        self.with_registry(&reg).expect("compact registry contains support")
    }

    pub fn weight_of(&self, m: &Monomial) -> Result<i64> {
        m.weight(&self.reg)
    }

    /// Common Sato weight of all terms, `None` if the terms disagree.
    /// The zero polynomial is homogeneous of every weight and reports `Some(0)`.
    pub fn is_homogeneous(&self) -> Result<Option<i64>> {
        let mut w = None;
        for (m, _) in &self.terms {
            let mw = m.weight(&self.reg)?;
            match w {
                None => w = Some(mw),
                Some(x) if x != mw => return Ok(None),
                _ => {}
            }
        }
        Ok(Some(w.unwrap_or(0)))
    }

    /// First term whose weight differs from the leading term's weight.
    pub fn inhomogeneous_witness(&self) -> Result<Option<(Monomial, i64, i64)>> {
        let Some((lead, _)) = self.terms.first() else {
            return Ok(None);
        };
        let lw = lead.weight(&self.reg)?;
        for (m, _) in &self.terms {
            let mw = m.weight(&self.reg)?;
            if mw != lw {
                return Ok(Some((m.clone(), mw, lw)));
            }
        }
        Ok(None)
    }

    pub fn monomial_parity(&self, m: &Monomial) -> Parity {
        m.factors()
            .fold(Parity::Even, |acc, (i, e)| acc.combine(self.reg.parity(i).pow(e)))
    }

    /// Divide by the rational making the coefficients coprime integers, keeping the sign.
    pub fn primitive(&self) -> Poly {
        let mult = rational::primitive_multiplier(self.terms.iter().map(|(_, c)| c));
        self.scale(&mult)
    }

    pub fn map_coefficients(&self, f: impl Fn(&Rational) -> Rational) -> Poly {
        Poly::from_terms(
            &self.reg,
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))),
        )
    }

    /// Render a monomial with the registry names, `1` for the empty monomial.
    pub fn format_monomial(&self, m: &Monomial) -> String {
        format_monomial(&self.reg, m)
    }
}

pub fn format_monomial(reg: &VariableRegistry, m: &Monomial) -> String {
    if m.is_one() {
        return "1".to_string();
    }
    let parts: Vec<String> = m
        .factors()
        .map(|(i, e)| {
            if e == 1 {
                reg.var(i).to_string()
            } else {
                format!("{}^{}", reg.var(i), e)
            }
        })
        .collect();
    parts.join("*")
}

/// Canonical serialization: terms in descending graded-lex order,
/// e.g. `-(4/63)*p[6,6]{v}*lam6 + 2*z^3 - u1`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let coeff = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("({}/{})", a.numer(), a.denom())
            };
            if m.is_one() {
                f.write_str(&coeff)?;
            } else if a.is_one() {
                f.write_str(&self.format_monomial(m))?;
            } else {
                write!(f, "{}*{}", coeff, self.format_monomial(m))?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("registry mismatch in add")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("registry mismatch in sub")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("registry mismatch in mul")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn reg() -> Registry {
        VariableRegistry::new((1..=6).map(Var::U), None)
    }

    fn u(reg: &Registry, i: u8) -> Poly {
        Poly::var(reg, &Var::U(i)).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let r = reg();
        let u6 = u(&r, 6);
        assert_eq!((&u6 * &u6).to_string(), "u6^2");
        let u2sq = u(&r, 2).pow(2);
        let big = u6.pow(16).scale(&rat(1, 22528000));
        let sum = &u2sq + &big;
        assert_eq!((&sum - &u2sq), big);
        let p = u(&r, 1).scale(&rat(3, 4));
        assert_eq!(p.scale(&rat(2, 1)).terms()[0].1, rat(3, 2));
    }

    #[test]
    fn derivative_examples() {
        let r = reg();
        let p = u(&r, 6).pow(16).scale(&rat(1, 22528000));
        let d = p.differentiate(&Var::U(6)).unwrap();
        assert_eq!(d, u(&r, 6).pow(15).scale(&rat(1, 1408000)));
        assert!(u(&r, 2).pow(2).differentiate(&Var::U(1)).unwrap().is_zero());
        assert!(p.differentiate(&Var::Z).is_err());
    }

    #[test]
    fn registry_mismatch_is_usage_error() {
        let a = reg();
        let b = VariableRegistry::new([Var::Z], None);
        let e = Poly::one(&a).try_add(&Poly::one(&b));
        assert!(matches!(e, Err(Error::Usage(_))));
    }

    #[test]
    fn coefficients_roundtrip() {
        let r = reg();
        let p = &(&u(&r, 1).pow(3) * &u(&r, 2)) + &u(&r, 2).pow(2);
        let c = p.coefficients_in(1);
        assert_eq!(c.len(), 3);
        assert_eq!(Poly::from_coefficients_in(&r, 1, &c), p);
    }

    #[test]
    fn display_format() {
        let r = reg();
        let p = &u(&r, 1).scale(&rat(-4, 63)) + &Poly::constant(&r, rat(2, 1));
        assert_eq!(p.to_string(), "-(4/63)*u1 + 2");
        assert_eq!(Poly::zero(&r).to_string(), "0");
    }
}
