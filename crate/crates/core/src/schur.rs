//! Schur–Weierstrass polynomials: gap sequence → Weierstrass partition →
//! elementary symmetric functions in Newton power sums → Schur determinant →
//! the change of variables `p_{w_i} = w_i u_{g+1-i}`.

use num_traits::Zero;

use crate::algebra::linalg::poly_det;
use crate::algebra::rational::{self, Rational};
use crate::algebra::{Monomial, Parity, Poly, Registry, Var, VariableRegistry, WeightScheme};
use crate::curve::{gap_sequence, sato_weights, SatoWeights};
use crate::error::{Error, Result};

/// A non-increasing list of positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Partition> {
        if parts.is_empty() || parts.iter().any(|&p| p == 0) {
            return Err(Error::usage("partition parts must be positive and nonempty"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::usage("partition parts must be non-increasing"));
        }
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0[0];
        Partition(
            (1..=first)
                .map(|k| self.0.iter().filter(|&&p| p >= k).count() as u32)
                .collect(),
        )
    }
}

/// `π_k = w_{g-k+1} + k - g` for ascending gaps `w_1 < … < w_g`.
pub fn weierstrass_partition(gaps: &[u32]) -> Result<Partition> {
    let g = gaps.len() as i64;
    if g == 0 {
        return Err(Error::internal("empty gap sequence"));
    }
    let mut parts = Vec::with_capacity(gaps.len());
    for k in 1..=g {
        let v = gaps[(g - k) as usize] as i64 + k - g;
        if v <= 0 {
            return Err(Error::internal(format!(
                "Weierstrass partition entry {k} is {v}; the gap sequence is not valid"
            )));
        }
        parts.push(v as u32);
    }
    Partition::new(parts).map_err(|e| Error::internal(e.to_string()))
}

/// Registry over the power sums `np1..np{max}` (weight of `np_k` is `k`).
pub fn newton_registry(max: u16) -> Registry {
    VariableRegistry::new((1..=max).map(Var::Newton), None)
}

fn newton(reg: &Registry, k: usize) -> Poly {
    Poly::var(reg, &Var::Newton(k as u16)).expect("power sum in registry")
}

/// `e_0 … e_k` in power sums.
///
/// `k! e_k` is the determinant of the lower Hessenberg matrix with `p_{i-j+1}`
/// on and below the diagonal and `1, 2, …, k-1` on the superdiagonal;
/// expanding along the last row gives
/// `D_k = Σ_j (-1)^{k-j} p_{k-j+1} ((k-1)!/(j-1)!) D_{j-1}`.
pub fn elementary_in_newton(k: usize, reg: &Registry) -> Vec<Poly> {
    let mut d: Vec<Poly> = vec![Poly::one(reg)];
    for m in 1..=k {
        let mut acc = Poly::zero(reg);
        let mut falling = Rational::from_integer(1.into());
        // j runs downwards so the falling factorial (m-1)!/(j-1)! builds up.
        for j in (1..=m).rev() {
            if j < m {
                falling *= rational::int(j as i64);
            }
            let term = (&newton(reg, m - j + 1) * &d[j - 1]).scale(&falling);
            acc = if (m - j) % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        d.push(acc);
    }
    d.iter()
        .enumerate()
        .map(|(m, p)| p.scale(&Rational::new(1.into(), rational::factorial(m as u32))))
        .collect()
}

/// `h_0 … h_k` in power sums, from `k h_k = Σ_i p_i h_{k-i}`.
pub fn complete_in_newton(k: usize, reg: &Registry) -> Vec<Poly> {
    let mut h: Vec<Poly> = vec![Poly::one(reg)];
    for m in 1..=k {
        let mut acc = Poly::zero(reg);
        for i in 1..=m {
            acc = &acc + &(&newton(reg, i) * &h[m - i]);
        }
        h.push(acc.scale(&rational::rat(1, m as i64)));
    }
    h
}

/// Which Jacobi–Trudi determinant builds the Schur function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchurRoute {
    /// `det(e_{π'_i - i + j})` over the conjugate partition.
    Elementary,
    /// `det(h_{π_i - i + j})`.
    Complete,
}

/// Jacobi–Trudi matrix for `route`, with entries taken from `seq` (index < 0 is zero).
fn jacobi_trudi(pi: &Partition, route: SchurRoute, seq: &[Poly]) -> Vec<Vec<Option<Poly>>> {
    let rows = match route {
        SchurRoute::Elementary => pi.conjugate(),
        SchurRoute::Complete => pi.clone(),
    };
    let m = rows.0.len();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let idx = rows.0[i] as i64 - i as i64 + j as i64;
                    (idx >= 0).then(|| seq[idx as usize].clone())
                })
                .collect()
        })
        .collect()
}

/// Largest sequence index the Jacobi–Trudi matrix of `route` needs.
fn max_index(pi: &Partition, route: SchurRoute) -> usize {
    let rows = match route {
        SchurRoute::Elementary => pi.conjugate(),
        SchurRoute::Complete => pi.clone(),
    };
    (rows.0[0] as usize) + rows.0.len() - 1
}

/// Schur function of `π` as a polynomial in the power sums `np_k`.
pub fn schur_from_partition(pi: &Partition, route: SchurRoute) -> Result<Poly> {
    let top = max_index(pi, route);
    let reg = newton_registry(top as u16);
    let seq = match route {
        SchurRoute::Elementary => elementary_in_newton(top, &reg),
        SchurRoute::Complete => complete_in_newton(top, &reg),
    };
    poly_det(&jacobi_trudi(pi, route, &seq), &Poly::one(&reg))
}

/// Registry over `u_1..u_g` carrying the curve's weights.
pub fn u_registry(scheme: &WeightScheme) -> Registry {
    VariableRegistry::new((1..=scheme.u_weights.len() as u8).map(Var::U), Some(scheme))
}

/// The ring map `p_{w_i} -> w_i u_{g+1-i}`, `p_k -> 0` for non-gaps `k`.
///
/// With `strict`, a surviving non-gap power sum is an error instead of being
/// sent to zero.
pub fn newton_to_u(p: &Poly, gaps: &[u32], ureg: &Registry, strict: bool) -> Result<Poly> {
    let g = gaps.len();
    let src = p.registry();
    let mut image: Vec<Option<(usize, Rational)>> = Vec::with_capacity(src.len());
    for v in src.vars() {
        let Var::Newton(k) = v else {
            return Err(Error::usage(format!("{v} is not a power sum")));
        };
        image.push(gaps.iter().position(|&w| w == *k as u32).map(|i| {
            let u = ureg.require(&Var::U((g - i) as u8)).expect("u variable");
            (u, rational::int(gaps[i] as i64))
        }));
    }
    let mut terms = Vec::with_capacity(p.len());
    'term: for (m, c) in p.terms() {
        let mut coeff = c.clone();
        let mut pairs = Vec::new();
        for (i, e) in m.factors() {
            match &image[i] {
                Some((u, w)) => {
                    coeff *= rational::pow(w, e);
                    pairs.push((*u, e));
                }
                None if strict => {
                    return Err(Error::internal(format!(
                        "power sum {} with non-gap index survives in the Schur polynomial",
                        src.var(i)
                    )))
                }
                None => continue 'term,
            }
        }
        terms.push((Monomial::from_pairs(pairs), coeff));
    }
    Ok(Poly::from_terms(ureg, terms))
}

fn scheme_for(n: u32, s: u32) -> Result<(Vec<u32>, SatoWeights, WeightScheme)> {
    let gaps = gap_sequence(n, s)?;
    let weights = sato_weights(n, s, None)?;
    let scheme = WeightScheme {
        n,
        s,
        u_weights: weights.u_weights.clone(),
        lam_weights: weights.lam_weights.clone(),
    };
    Ok((gaps, weights, scheme))
}

/// Schur–Weierstrass polynomial of the `(n,s)` curve over `u_1..u_g`.
///
/// The change of variables is a ring homomorphism, so it is applied to the
/// matrix entries before the determinant; only gap-indexed power sums can
/// survive in the expanded Schur function, so nothing is lost by sending the
/// others to zero early. [`schur_weierstrass_expanded`] takes the long road.
pub fn schur_weierstrass(n: u32, s: u32) -> Result<Poly> {
    schur_weierstrass_with(n, s, SchurRoute::Elementary)
}

pub fn schur_weierstrass_with(n: u32, s: u32, route: SchurRoute) -> Result<Poly> {
    let (gaps, weights, scheme) = scheme_for(n, s)?;
    let pi = weierstrass_partition(&gaps)?;
    let top = max_index(&pi, route);
    let nreg = newton_registry(top as u16);
    let ureg = u_registry(&scheme);
    let seq = match route {
        SchurRoute::Elementary => elementary_in_newton(top, &nreg),
        SchurRoute::Complete => complete_in_newton(top, &nreg),
    };
    let useq = seq
        .iter()
        .map(|e| newton_to_u(e, &gaps, &ureg, false))
        .collect::<Result<Vec<_>>>()?;
    let sw = poly_det(&jacobi_trudi(&pi, route, &useq), &Poly::one(&ureg))?;
    check_sw(&sw, &weights)?;
    Ok(sw)
}

/// Same polynomial, expanding the Schur function fully in power sums first and
/// failing if a non-gap power sum survives.
pub fn schur_weierstrass_expanded(n: u32, s: u32, route: SchurRoute) -> Result<Poly> {
    let (gaps, weights, scheme) = scheme_for(n, s)?;
    let pi = weierstrass_partition(&gaps)?;
    let full = schur_from_partition(&pi, route)?;
    let sw = newton_to_u(&full, &gaps, &u_registry(&scheme), true)?;
    check_sw(&sw, &weights)?;
    Ok(sw)
}

fn check_sw(sw: &Poly, weights: &SatoWeights) -> Result<()> {
    match sw.is_homogeneous()? {
        Some(w) if w == weights.sigma_weight => {}
        other => {
            return Err(Error::internal(format!(
                "Schur–Weierstrass polynomial has weight {other:?}, expected {}",
                weights.sigma_weight
            )))
        }
    }
    for (m, _) in sw.terms() {
        if sw.monomial_parity(m) != weights.sigma_parity {
            return Err(Error::internal(format!(
                "term {} breaks the σ parity",
                sw.format_monomial(m)
            )));
        }
    }
    Ok(())
}

/// Summary of a generated Schur–Weierstrass polynomial.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SwSummary {
    pub genus: usize,
    pub weight: i64,
    pub monomials: usize,
}

pub fn summarize(sw: &Poly) -> Result<SwSummary> {
    Ok(SwSummary {
        genus: sw.registry().len(),
        weight: sw.is_homogeneous()?.unwrap_or(0),
        monomials: sw.len(),
    })
}

/// All `u`-monomials of weight `k` with the parity of σ: the possible terms of
/// the σ-expansion coefficient at weight `k`.
pub fn candidate_monomials(weights: &SatoWeights, n: u32, k: i64) -> Result<Vec<Monomial>> {
    if (k - weights.sigma_weight).rem_euclid(n as i64) != 0 {
        return Err(Error::usage(format!(
            "weight {k} is not congruent to the σ weight {} modulo {n}",
            weights.sigma_weight
        )));
    }
    if k < 0 {
        return Ok(Vec::new());
    }
    let want_odd = weights.sigma_parity == Parity::Odd;
    // Registry index i holds u_{i+1}.
    let w: Vec<i64> = weights.u_weights.iter().map(|&x| x as i64).collect();
    let mut out = Vec::new();
    let mut exps = vec![0u32; w.len()];
    fn rec(i: usize, left: i64, w: &[i64], exps: &mut Vec<u32>, want_odd: bool, out: &mut Vec<Monomial>) {
        if i == w.len() {
            let deg: u32 = exps.iter().sum();
            if left == 0 && (deg % 2 == 1) == want_odd {
                out.push(Monomial::from_dense(exps));
            }
            return;
        }
        let mut e = 0;
        while e as i64 * w[i] <= left {
            exps[i] = e;
            rec(i + 1, left - e as i64 * w[i], w, exps, want_odd, out);
            e += 1;
        }
        exps[i] = 0;
    }
    rec(0, k, &w, &mut exps, want_odd, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    Ok(out)
}

/// Coefficient of `mono` in `p`, looked up by variable names so registries may differ.
pub fn coefficient_by_vars(p: &Poly, mono: &[(Var, u32)]) -> Rational {
    let reg = p.registry();
    let mut pairs = Vec::new();
    for (v, e) in mono {
        match reg.index_of(v) {
            Some(i) => pairs.push((i, *e)),
            None if *e == 0 => {}
            None => return Rational::zero(),
        }
    }
    p.coefficient(&Monomial::from_pairs(pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn partitions() {
        let p = weierstrass_partition(&[1, 2, 4, 5, 8, 11]).unwrap();
        assert_eq!(p.parts(), &[6, 4, 2, 2, 1, 1]);
        assert_eq!(p.conjugate().parts(), &[6, 4, 2, 2, 1, 1]);
        assert_eq!(weierstrass_partition(&[1]).unwrap().parts(), &[1]);
        assert_eq!(weierstrass_partition(&[1, 2, 5]).unwrap().parts(), &[3, 1, 1]);
        assert!(weierstrass_partition(&[0]).is_err());
        assert_eq!(Partition::new(vec![3, 1, 1]).unwrap().conjugate().parts(), &[3, 1, 1]);
        assert_eq!(Partition::new(vec![4, 2]).unwrap().conjugate().parts(), &[2, 2, 1, 1]);
    }

    #[test]
    fn small_elementary() {
        let reg = newton_registry(3);
        let e = elementary_in_newton(3, &reg);
        let p = |k| newton(&reg, k);
        assert_eq!(e[0], Poly::one(&reg));
        assert_eq!(e[1], p(1));
        assert_eq!(e[2], (&p(1).pow(2) - &p(2)).scale(&rat(1, 2)));
        let e3 = &(&p(1).pow(3) - &(&p(1) * &p(2)).scale(&rat(3, 1))) + &p(3).scale(&rat(2, 1));
        assert_eq!(e[3], e3.scale(&rat(1, 6)));
    }

    #[test]
    fn small_schur() {
        let one = Partition::new(vec![1]).unwrap();
        let reg = newton_registry(1);
        assert_eq!(schur_from_partition(&one, SchurRoute::Elementary).unwrap().to_string(), "np1");
        let two = Partition::new(vec![2]).unwrap();
        let s = schur_from_partition(&two, SchurRoute::Elementary).unwrap();
        assert_eq!(s.to_string(), "(1/2)*np1^2 + (1/2)*np2");
        assert_eq!(reg.len(), 1);
        assert_eq!(schur_weierstrass(2, 3).unwrap().to_string(), "u1");
    }

    #[test]
    fn candidates_37() {
        let w = sato_weights(3, 7, None).unwrap();
        assert!(candidate_monomials(&w, 3, 17).is_err());
        let c16 = candidate_monomials(&w, 3, 16).unwrap();
        assert!(!c16.is_empty());
        assert!(candidate_monomials(&w, 3, 19).unwrap().len() > c16.len());
    }
}
