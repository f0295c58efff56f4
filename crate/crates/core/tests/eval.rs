use std::path::PathBuf;

use num_traits::{One, Zero};
use proptest::prelude::*;
use trigonal_core::algebra::rational::{int, rat, Rational};
use trigonal_core::algebra::roots::{bits_for_digits, float_pow10_neg};
use trigonal_core::algebra::{Monomial, Poly, Var, VariableRegistry};
use trigonal_core::curve::format::parse_formula;
use trigonal_core::curve::{sato_weights, CurveModel};
use trigonal_core::eval::{sorted_multisets, AbelianValues, SigmaJet, SigmaModel};
use trigonal_core::kleinian::jacobi_invert_symbolic;
use trigonal_core::schur::{candidate_monomials, schur_weierstrass};
use trigonal_core::verify::*;
use trigonal_core::Error;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn load(n: u32, s: u32) -> CurveModel {
    CurveModel::load(&data_dir(), n, s).unwrap()
}

fn parse(c: &CurveModel, text: &str) -> Poly {
    parse_formula(text, Some(&c.scheme)).unwrap()
}

fn points(m: &SigmaModel, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    sample_points(m, count, seed).unwrap().0
}

#[test]
fn jet_basics() {
    let m = SigmaModel::new(2, 3).unwrap();
    let jet = SigmaJet::new(&m, &[int(5)], 2).unwrap();
    let c = jet.coefficients();
    assert_eq!(c[&vec![0]], int(5));
    assert_eq!(c[&vec![1]], int(1));
    assert!(c[&vec![2]].is_zero());

    let m = SigmaModel::new(3, 7).unwrap();
    let pt = points(&m, 1, 8).remove(0);
    let mut jet = SigmaJet::new(&m, &pt, 1).unwrap();
    assert_eq!(jet.value(), m.value_at(&pt));
    // Mixed partials in either order.
    let d56 = m.polynomial().differentiate(&Var::U(5)).unwrap().differentiate(&Var::U(6)).unwrap();
    let d65 = m.polynomial().differentiate(&Var::U(6)).unwrap().differentiate(&Var::U(5)).unwrap();
    assert_eq!(d56, d65);
    let direct = SigmaModel::from_poly(d56, 6).unwrap().value_at(&pt);
    assert_eq!(jet.derivative(&[0, 0, 0, 0, 1, 1]), direct);
}

#[test]
fn p11_of_u1() {
    let m = SigmaModel::new(2, 3).unwrap();
    for x in [rat(1, 3), rat(-7, 2), int(4)] {
        let mut v = AbelianValues::new(&m, &[x.clone()]).unwrap();
        assert_eq!(v.p(&[1, 1]).unwrap(), Rational::one() / (&x * &x));
    }
    assert!(matches!(AbelianValues::new(&m, &[Rational::zero()]), Err(Error::Divisor(_))));
}

#[test]
fn printed_identities_37() {
    let c = load(3, 7);
    let m = SigmaModel::new(3, 7).unwrap();
    let checks = [
        "p[6,6,6,6] - 6*p[6,6]^2 + 3*p[5,5]",
        "p[5,6,6,6] - 6*p[5,6]*p[6,6] - 3*p[4,6]",
        "Q[6,6,6,6] + 3*p[5,5]",
        "p[6,6,6]^2 - 4*p[6,6]^3 - p[5,6]^2 + 4*p[5,5]*p[6,6] - 4*p[3,6] + 4*p[4,5]",
        "-(1/2)*p[4,6,6] - (1/2)*p[5,5,5] - p[5,6]*p[6,6,6] + p[6,6]*p[5,6,6]",
    ];
    for pt in points(&m, 5, 21) {
        let mut v = AbelianValues::new(&m, &pt).unwrap();
        for text in checks {
            assert!(v.evaluate(&parse(&c, text)).unwrap().is_zero(), "{text}");
        }
    }
}

#[test]
fn printed_identities_38() {
    let c = load(3, 8);
    let m = SigmaModel::new(3, 8).unwrap();
    for pt in points(&m, 5, 22) {
        let mut v = AbelianValues::new(&m, &pt).unwrap();
        assert!(v.evaluate(&parse(&c, "Q[7,7,7,7] + 3*p[6,6]")).unwrap().is_zero());
    }
}

/// `℘_ijkl - 2(℘_ij ℘_kl + ℘_ik ℘_jl + ℘_il ℘_jk)`.
fn q4_by_hand(v: &mut AbelianValues, s: [u8; 4]) -> Rational {
    let [i, j, k, l] = s;
    let mut p = |a: &[u8]| v.p(a).unwrap();
    p(&[i, j, k, l]) - int(2) * (p(&[i, j]) * p(&[k, l]) + p(&[i, k]) * p(&[j, l]) + p(&[i, l]) * p(&[j, k]))
}

/// `℘_S - 2 Σ_{pairs} ℘_pair ℘_rest + 4 Σ_{matchings} ℘℘℘` for six indices.
fn q6_by_hand(v: &mut AbelianValues, s: [u8; 6]) -> Rational {
    let mut total = v.p(&s).unwrap();
    for a in 0..6 {
        for b in (a + 1)..6 {
            let rest: Vec<u8> = (0..6).filter(|&t| t != a && t != b).map(|t| s[t]).collect();
            total -= int(2) * v.p(&[s[a], s[b]]).unwrap() * v.p(&rest).unwrap();
        }
    }
    // The 15 perfect matchings: pair position 0 with b, then split the remaining four.
    for b in 1..6 {
        let r: Vec<usize> = (1..6).filter(|&t| t != b).collect();
        for (x, y) in [((r[0], r[1]), (r[2], r[3])), ((r[0], r[2]), (r[1], r[3])), ((r[0], r[3]), (r[1], r[2]))] {
            total += int(4)
                * v.p(&[s[0], s[b]]).unwrap()
                * v.p(&[s[x.0], s[x.1]]).unwrap()
                * v.p(&[s[y.0], s[y.1]]).unwrap();
        }
    }
    total
}

#[test]
fn hirota_values_match_expansions() {
    let m = SigmaModel::new(3, 7).unwrap();
    let q4_sets = [[6, 6, 6, 6], [5, 5, 6, 6], [1, 3, 4, 6], [2, 2, 5, 6], [1, 1, 5, 5]];
    let q6_sets = [
        [6, 6, 6, 6, 6, 6],
        [5, 6, 6, 6, 6, 6],
        [4, 4, 5, 5, 6, 6],
        [1, 2, 3, 4, 5, 6],
        [3, 3, 3, 4, 6, 6],
        [1, 1, 3, 6, 6, 6],
        [2, 2, 3, 4, 6, 6],
        [5, 5, 5, 5, 5, 6],
        [1, 5, 5, 5, 6, 6],
        [2, 4, 4, 4, 4, 6],
    ];
    for pt in points(&m, 20, 31) {
        let mut v = AbelianValues::new(&m, &pt).unwrap();
        for s in q4_sets {
            assert_eq!(v.q(&s).unwrap(), q4_by_hand(&mut v, s), "Q{s:?}");
        }
        for s in q6_sets {
            assert_eq!(v.q(&s).unwrap(), q6_by_hand(&mut v, s), "Q{s:?}");
        }
        for pair in sorted_multisets(6, 2) {
            assert_eq!(v.q(&pair).unwrap(), v.p(&pair).unwrap());
        }
        assert!(v.q(&[6, 6, 6]).unwrap().is_zero());
        assert!(v.q(&[1, 2, 3, 4, 5]).unwrap().is_zero());
    }
}

#[test]
fn library_expansion_agrees_with_operator() {
    let c = load(3, 7);
    let m = SigmaModel::new(3, 7).unwrap();
    let sets: Vec<Vec<u8>> = vec![vec![6, 6, 6, 6], vec![3, 4, 5, 6], vec![5, 5, 5, 6, 6, 6], vec![1, 2, 3, 4, 5, 6]];
    let r = hirota_consistency(&c, &m, &sets, 5, 2).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn suites_37() {
    let c = load(3, 7);
    let m = SigmaModel::new(3, 7).unwrap();
    for suite in ["q-relations", "bous", "quadratic", "bilinear", "q4", "q6", "all"] {
        let r = verify_relation_suite(&c, &m, suite, 5, 1).unwrap();
        let failed: Vec<&str> = r.relations.iter().filter(|x| x.status == Status::Fail).map(|x| x.id.as_str()).collect();
        assert!(failed.is_empty(), "{suite}: {failed:?}");
        assert!(r.relations.iter().all(|x| x.weight.is_some()));
        assert_eq!(r.points.len(), 5);
    }
    let all = verify_relation_suite(&c, &m, "all", 5, 1).unwrap();
    assert_eq!(all.relations.len(), 8 + 5 + 3 + 7 + 8);
    // The printed reduced relations are kept as a diagnostic and do not hold.
    assert!(!verify_relation_suite(&c, &m, "reduced", 2, 1).unwrap().passed());
    assert!(matches!(verify_relation_suite(&c, &m, "nonsense", 1, 1), Err(Error::Usage(_))));
}

#[test]
fn suites_38() {
    let c = load(3, 8);
    let m = SigmaModel::new(3, 8).unwrap();
    for suite in ["q-relations", "bous", "all"] {
        let r = verify_relation_suite(&c, &m, suite, 5, 1).unwrap();
        assert!(r.passed(), "{suite}");
    }
}

#[test]
fn reports_are_deterministic() {
    let c = load(3, 7);
    let m = SigmaModel::new(3, 7).unwrap();
    let a = serde_json::to_string(&verify_relation_suite(&c, &m, "bous", 3, 5).unwrap()).unwrap();
    let b = serde_json::to_string(&verify_relation_suite(&c, &m, "bous", 3, 5).unwrap()).unwrap();
    assert_eq!(a, b);
    let d = serde_json::to_string(&verify_relation_suite(&c, &m, "bous", 3, 6).unwrap()).unwrap();
    assert_ne!(a, d);
}

#[test]
fn boussinesq_constant() {
    for (n, s) in [(3, 7), (3, 8)] {
        let c = load(n, s);
        let m = SigmaModel::new(n, s).unwrap();
        let r = boussinesq_check(&c, &m, 5, 3).unwrap();
        assert_eq!(r.constant.as_deref(), Some("-3"), "({n},{s})");
        assert_eq!(r.residual, "0");
        assert!(r.passed());
    }
}

#[test]
fn addition_formula() {
    let c = load(3, 7);
    let m = SigmaModel::new(3, 7).unwrap();
    let pairs = addition_pairs(&m, 3, 11).unwrap();
    let r = verify_addition(&c, &m, &pairs, 11).unwrap();
    assert!(r.passed(), "{r:?}");

    let swapped: Vec<_> = pairs.iter().map(|(u, v)| (v.clone(), u.clone())).collect();
    let rs = verify_addition(&c, &m, &swapped, 11).unwrap();
    for (a, b) in r.cases.iter().zip(&rs.cases) {
        assert_eq!((&a.lhs, &a.rhs), (&b.lhs, &b.rhs));
    }

    let u = pairs[0].0.clone();
    let diag = verify_addition(&c, &m, &[(u.clone(), u)], 0).unwrap();
    assert_eq!(diag.cases[0].lhs, "0");
    assert!(diag.passed());
}

#[test]
fn addition_failure_is_localized() {
    let mut c = load(3, 7);
    let group = c.pack.groups.iter_mut().find(|g| g.name == "addition").unwrap();
    let p32 = group.formulas.iter_mut().find(|f| f.name == "P32").unwrap();
    let (m0, c0) = p32.poly.terms()[0].clone();
    p32.poly = &p32.poly + &Poly::monomial(p32.poly.registry(), m0, c0);
    let m = SigmaModel::new(3, 7).unwrap();
    let pairs = addition_pairs(&m, 1, 11).unwrap();
    let r = verify_addition(&c, &m, &pairs, 11).unwrap();
    assert!(!r.passed());
    assert!(!r.cases[0].contributions.is_empty());
}

#[test]
fn inversion_37() {
    let c = load(3, 7);
    let m = SigmaModel::new(3, 7).unwrap();
    let pair = jacobi_invert_symbolic(&c).unwrap();
    let r = inversion_report(&c, &pair, &m, 5, 7, 50).unwrap();
    assert!(r.passed, "{r:?}");
    assert_eq!(r.samples.len(), 5);
    assert!(r.samples.iter().all(|s| s.points.len() == 6));
}

#[test]
fn inversion_residual_scales_with_precision() {
    let c = load(3, 7);
    let m = SigmaModel::new(3, 7).unwrap();
    let pair = jacobi_invert_symbolic(&c).unwrap();
    let u0 = points(&m, 1, 12).remove(0);
    let lo = jacobi_invert_numeric(&c, &pair, &m, &u0, 30).unwrap().max_residual();
    let hi = jacobi_invert_numeric(&c, &pair, &m, &u0, 60).unwrap().max_residual();
    let bits = bits_for_digits(60);
    assert!(hi < lo.clone() * float_pow10_neg(10, bits), "{lo} vs {hi}");
}

#[test]
fn inversion_vieta() {
    let c = load(3, 8);
    let m = SigmaModel::new(3, 8).unwrap();
    let pair = jacobi_invert_symbolic(&c).unwrap();
    let u0 = points(&m, 1, 13).remove(0);
    let res = jacobi_invert_numeric(&c, &pair, &m, &u0, 50).unwrap();
    assert_eq!(res.z.len(), 7);
    assert!(res.vieta_error < float_pow10_neg(30, bits_for_digits(50)));
}

#[test]
fn candidate_weights_37() {
    let w = sato_weights(3, 7, None).unwrap();
    for k in [16, 19, 22, 25] {
        assert!(!candidate_monomials(&w, 3, k).unwrap().is_empty(), "{k}");
    }
    for k in [17, 18, 20] {
        assert!(matches!(candidate_monomials(&w, 3, k), Err(Error::Usage(_))));
    }
    let sw = schur_weierstrass(3, 7).unwrap();
    let cands = candidate_monomials(&w, 3, 16).unwrap();
    assert!(sw.terms().iter().all(|(m, _)| cands.contains(m)));
}

#[test]
fn basis_rank_37() {
    let c = load(3, 7);
    let m = SigmaModel::new(3, 7).unwrap();
    let r = basis_rank_report(&c, &m, 80, 1).unwrap();
    assert_eq!(r.functions, 64);
    assert_eq!(r.points, 80);
    assert!(r.rank <= 64);
    eprintln!("(3,7) basis rank at λ = 0: {}", r.rank);
}

fn shift_oracle(p: &Poly, point: &[Rational], alpha: &[u32]) -> Rational {
    // Coefficient of t^α in p(u0 + t), with λ's standing in for the t's.
    let g = point.len();
    let vars: Vec<Var> = (1..=g as u8).map(Var::U).chain((0..g as u8).map(Var::Lam)).collect();
    let reg = VariableRegistry::new(vars, None);
    let p = p.with_registry(&reg).unwrap();
    let subs: Vec<(usize, Poly)> = (0..g)
        .map(|k| {
            let u = reg.index_of(&Var::U(k as u8 + 1)).unwrap();
            let t = Poly::var(&reg, &Var::Lam(k as u8)).unwrap();
            (u, &t + &Poly::constant(&reg, point[k].clone()))
        })
        .collect();
    let shifted = p.substitute(&subs);
    let mono = Monomial::from_pairs(
        (0..g).filter(|&k| alpha[k] > 0).map(|k| (reg.index_of(&Var::Lam(k as u8)).unwrap(), alpha[k])),
    );
    shifted.coefficient(&mono)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn jets_match_polynomial_shift(
        terms in prop::collection::vec((0u32..4, 0u32..4, 0u32..3, -9i64..10), 1..6),
        point in prop::collection::vec((-9i64..10, 1i64..6), 3),
        alpha in prop::collection::vec(0u32..3, 3),
    ) {
        let reg = VariableRegistry::new([Var::U(1), Var::U(2), Var::U(3)], None);
        let p = Poly::from_terms(
            &reg,
            terms.iter().map(|&(a, b, c, k)| (Monomial::from_dense(&[a, b, c]), int(k))),
        );
        let p = p.compact();
        prop_assume!(!p.is_zero() && p.registry().len() == 3);
        let pt: Vec<Rational> = point.iter().map(|&(n, d)| rat(n, d)).collect();
        let m = SigmaModel::from_poly(p.clone(), 3).unwrap();
        let mut jet = SigmaJet::new(&m, &pt, 2).unwrap();
        prop_assert_eq!(jet.coefficient(&alpha), shift_oracle(&p, &pt, &alpha));
    }

    #[test]
    fn q_and_p_agree_on_pairs(seed in 0u64..500) {
        let m = SigmaModel::new(3, 7).unwrap();
        let pt = points(&m, 1, seed).remove(0);
        let mut v = AbelianValues::new(&m, &pt).unwrap();
        for pair in sorted_multisets(6, 2) {
            prop_assert_eq!(v.q(&pair).unwrap(), v.p(&pair).unwrap());
        }
    }
}
