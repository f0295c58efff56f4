use std::path::PathBuf;

use num_traits::Zero;
use trigonal_core::algebra::rational::{rat, Rational};
use trigonal_core::algebra::{Monomial, Poly, Var};
use trigonal_core::curve::{gap_sequence, sato_weights, CurveModel};
use trigonal_core::schur::{
    candidate_monomials, coefficient_by_vars, schur_weierstrass, schur_weierstrass_expanded,
    schur_weierstrass_with, u_registry, SchurRoute,
};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn printed(n: u32, s: u32, name: &str) -> Poly {
    let curve = CurveModel::load(&data_dir(), n, s).unwrap();
    let p = curve.pack.formula("sw", name).unwrap();
    p.with_registry(&u_registry(&curve.scheme)).unwrap()
}

#[test]
fn sw37_matches_print() {
    let sw = schur_weierstrass(3, 7).unwrap();
    let print = printed(3, 7, "SW");
    // The print has 32 terms.
    assert_eq!(print.len(), 32);
    assert_eq!(sw.len(), print.len());
    assert_eq!(sw, print, "difference: {}", &sw - &print);
    assert_eq!(coefficient_by_vars(&sw, &[(Var::U(6), 16)]), rat(1, 22528000));
    assert_eq!(coefficient_by_vars(&sw, &[(Var::U(2), 2)]), rat(1, 1));
}

#[test]
fn sw37_routes_agree() {
    let e = schur_weierstrass_with(3, 7, SchurRoute::Elementary).unwrap();
    let h = schur_weierstrass_with(3, 7, SchurRoute::Complete).unwrap();
    assert_eq!(e, h);
    // Expanding fully in power sums first must leave only gap-indexed sums.
    assert_eq!(schur_weierstrass_expanded(3, 7, SchurRoute::Elementary).unwrap(), e);
    assert_eq!(schur_weierstrass_expanded(3, 7, SchurRoute::Complete).unwrap(), e);
}

#[test]
fn sw38_matches_print_up_to_the_garbled_term() {
    let sw = schur_weierstrass(3, 8).unwrap();
    let print = printed(3, 8, "SW");
    let garbled = printed(3, 8, "SW_garbled_monomial");
    assert_eq!(garbled.len(), 1);
    let mono: &Monomial = &garbled.terms()[0].0;
    let diff = &sw - &print;
    // Everything but the one garbled monomial matches the print.
    assert_eq!(diff.len(), 1, "difference: {diff}");
    assert_eq!(&diff.terms()[0].0, mono);
    let c = diff.terms()[0].1.clone();
    eprintln!("generated coefficient of u5*u3*u2: {c}");
    assert!(!c.is_zero());
    assert_eq!(coefficient_by_vars(&sw, &[(Var::U(7), 21)]), rat(1, 45660160000));
    assert_eq!(coefficient_by_vars(&sw, &[(Var::U(3), 3)]), rat(1, 1));
    assert_eq!(schur_weierstrass_with(3, 8, SchurRoute::Complete).unwrap(), sw);
}

#[test]
fn sweep_up_to_genus_ten() {
    let curves = [
        (2, 3),
        (2, 5),
        (2, 7),
        (2, 9),
        (2, 11),
        (3, 4),
        (3, 5),
        (3, 7),
        (3, 8),
        (3, 10),
        (3, 11),
        (4, 5),
        (4, 7),
        (5, 6),
    ];
    for (n, s) in curves {
        let gaps = gap_sequence(n, s).unwrap();
        let w = sato_weights(n, s, None).unwrap();
        let sw = schur_weierstrass(n, s).unwrap();
        assert_eq!(sw.is_homogeneous().unwrap(), Some(w.sigma_weight), "({n},{s})");
        assert!(sw.terms().iter().all(|(m, _)| sw.monomial_parity(m) == w.sigma_parity));
        assert!(sw.constant_term().is_zero());
        // Every monomial is a σ-expansion candidate at the σ weight.
        let cands = candidate_monomials(&w, n, w.sigma_weight).unwrap();
        assert!(sw.terms().iter().all(|(m, _)| cands.contains(m)), "({n},{s})");
        if gaps.len() <= 7 {
            assert_eq!(
                schur_weierstrass_with(n, s, SchurRoute::Complete).unwrap(),
                sw,
                "({n},{s})"
            );
        }
    }
}

#[test]
fn non_gap_power_sums_do_not_matter() {
    // Evaluate the full power-sum Schur polynomial with random values at the
    // non-gap sums; its value must not move.
    use rand::{Rng, SeedableRng};
    use trigonal_core::schur::{schur_from_partition, weierstrass_partition};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for (n, s) in [(3, 7), (3, 8), (4, 5)] {
        let gaps = gap_sequence(n, s).unwrap();
        let pi = weierstrass_partition(&gaps).unwrap();
        let full = schur_from_partition(&pi, SchurRoute::Complete).unwrap();
        let reg = full.registry().clone();
        let gap_vals: Vec<Rational> = (0..reg.len()).map(|_| rat(rng.gen_range(-9..10), 1)).collect();
        let value = |noise: &[Rational]| {
            full.evaluate(|i| {
                let Var::Newton(k) = reg.var(i) else { unreachable!() };
                Some(if gaps.contains(&(*k as u32)) { gap_vals[i].clone() } else { noise[i].clone() })
            })
            .unwrap()
        };
        let base = value(&vec![Rational::zero(); reg.len()]);
        for _ in 0..3 {
            let noise: Vec<Rational> = (0..reg.len()).map(|_| rat(rng.gen_range(-50..50), rng.gen_range(1..7))).collect();
            assert_eq!(value(&noise), base, "({n},{s})");
        }
    }
}
