use std::cmp::Ordering;

use smallvec::SmallVec;

use super::registry::VariableRegistry;
use crate::error::{Error, Result};

/// Sparse exponent vector: `(variable index, exponent)` pairs sorted by index,
/// exponents nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: SmallVec<[(u16, u16); 4]>,
}

fn checked_exp(e: u32) -> u16 {
    u16::try_from(e).unwrap_or_else(|_| panic!("exponent {e} exceeds the 16-bit exponent limit"))
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(idx: usize, exp: u32) -> Self {
        let mut m = Monomial::one();
        if exp > 0 {
            m.factors.push((idx as u16, checked_exp(exp)));
        }
        m
    }

    /// Build from arbitrary `(index, exponent)` pairs; repeated indices are merged.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut v: Vec<(usize, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable_by_key(|&(i, _)| i);
        let mut factors: SmallVec<[(u16, u16); 4]> = SmallVec::new();
        for (i, e) in v {
            match factors.last_mut() {
                Some((j, f)) if *j as usize == i => *f = checked_exp(*f as u32 + e),
                _ => factors.push((i as u16, checked_exp(e))),
            }
        }
        Monomial { factors }
    }

    /// Dense exponent vector constructor.
    pub fn from_dense(exps: &[u32]) -> Self {
        Self::from_pairs(exps.iter().enumerate().map(|(i, &e)| (i, e)))
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.factors.iter().map(|&(i, e)| (i as usize, e as u32))
    }

    pub fn exponent(&self, idx: usize) -> u32 {
        self.factors
            .binary_search_by_key(&(idx as u16), |&(i, _)| i)
            .map(|k| self.factors[k].1 as u32)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.factors.last().map(|&(i, _)| i as usize)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out: SmallVec<[(u16, u16); 4]> = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, checked_exp(a[i].1 as u32 + b[j].1 as u32)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { factors: out }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: self
                .factors
                .iter()
                .map(|&(i, f)| (i, checked_exp(f as u32 * e)))
                .collect(),
        }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = self.clone();
        for (i, e) in other.factors() {
            let k = out
                .factors
                .binary_search_by_key(&(i as u16), |&(j, _)| j)
                .ok()?;
            let have = out.factors[k].1 as u32;
            if have < e {
                return None;
            }
            if have == e {
                out.factors.remove(k);
            } else {
                out.factors[k].1 = (have - e) as u16;
            }
        }
        Some(out)
    }

    /// Remove variable `idx`, returning its exponent and the remaining monomial.
    pub fn split_off(&self, idx: usize) -> (u32, Monomial) {
        let mut out = self.clone();
        match out.factors.binary_search_by_key(&(idx as u16), |&(j, _)| j) {
            Ok(k) => {
                let e = out.factors.remove(k).1 as u32;
                (e, out)
            }
            Err(_) => (0, out),
        }
    }

    /// Re-index variables through `map` (old index to new index).
    pub fn remap(&self, map: &[usize]) -> Monomial {
        Monomial::from_pairs(self.factors().map(|(i, e)| (map[i], e)))
    }

    /// Sato weight `Σ e·weight(var)`.
    pub fn weight(&self, reg: &VariableRegistry) -> Result<i64> {
        let mut w = 0i64;
        for (i, e) in self.factors() {
            let vw = reg.weight(i).ok_or_else(|| {
                Error::usage(format!("variable {} carries no weight", reg.var(i)))
            })?;
            w += vw as i64 * e as i64;
        }
        Ok(w)
    }

    /// Graded lexicographic comparison in registry order.
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }

    /// Lexicographic comparison: the monomial with the larger exponent at the
    /// first differing variable (earliest in registry order) is larger.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        for (a, b) in self.factors.iter().zip(other.factors.iter()) {
            if a.0 != b.0 {
                return b.0.cmp(&a.0);
            }
            if a.1 != b.1 {
                return a.1.cmp(&b.1);
            }
        }
        self.factors.len().cmp(&other.factors.len())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grlex_cmp(other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_merges_factors() {
        let a = Monomial::from_pairs([(0, 2), (3, 1)]);
        let b = Monomial::from_pairs([(1, 1), (3, 4)]);
        assert_eq!(a.mul(&b), Monomial::from_pairs([(0, 2), (1, 1), (3, 5)]));
        assert_eq!(a.mul(&b).div(&b), Some(a.clone()));
        assert_eq!(b.div(&a), None);
    }

    #[test]
    fn grlex_order() {
        let x = Monomial::var(0, 1);
        let y = Monomial::var(1, 1);
        assert!(x > y);
        assert!(y.pow(2) > x);
        assert!(x.mul(&y) < x.pow(2));
        assert!(x.mul(&y) > y.pow(2));
        assert!(Monomial::one() < y);
    }

    #[test]
    #[should_panic(expected = "16-bit")]
    fn exponent_overflow_panics() {
        let _ = Monomial::var(0, 40_000).mul(&Monomial::var(0, 40_000));
    }
}
