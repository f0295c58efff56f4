use std::path::PathBuf;

use proptest::prelude::*;

use trigonal_core::algebra::rational::{int, rat, Rational};
use trigonal_core::algebra::{Poly, Registry, Var, VariableRegistry};
use trigonal_core::curve::format::parse_formula;
use trigonal_core::curve::CurveModel;
use trigonal_core::series::{leading_term, local_expansions, ExpansionInput, LaurentSeries, LocalExpansions, EXACT};
use trigonal_core::Error;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn plain() -> Registry {
    VariableRegistry::new([Var::Lam(0)], None)
}

fn series(reg: &Registry, terms: &[(i32, Rational)], trunc: i32) -> LaurentSeries {
    LaurentSeries::from_terms(reg, terms.iter().map(|(k, c)| (*k, Poly::constant(reg, c.clone()))), trunc)
}

fn same(a: &LaurentSeries, b: &LaurentSeries) -> bool {
    a.truncation() == b.truncation() && a.sub(b).unwrap().is_zero()
}

#[test]
fn cube_root_example() {
    let reg = plain();
    let a = series(&reg, &[(0, int(1)), (3, int(3))], 10);
    let r = a.nth_root(3).unwrap();
    let expected = series(&reg, &[(0, int(1)), (3, int(1)), (6, int(-1)), (9, rat(5, 3))], 10);
    assert!(same(&r, &expected), "{r}");

    let b = series(&reg, &[(-6, int(8)), (-3, int(8))], 4);
    let r = b.nth_root(3).unwrap();
    assert_eq!(leading_term(&r), Some((-2, int(2))));
    assert!(same(&r.pow(3).unwrap(), &b.with_truncation(r.pow(3).unwrap().truncation())));

    let odd = series(&reg, &[(1, int(1))], 5);
    assert!(matches!(odd.nth_root(3), Err(Error::Usage(_))));
    let irrational = series(&reg, &[(0, int(2))], 5);
    assert!(matches!(irrational.nth_root(3), Err(Error::Usage(_))));
}

#[test]
fn inverse_and_shift_examples() {
    let reg = plain();
    let a = series(&reg, &[(0, int(1)), (1, int(-1))], 8);
    let inv = a.inverse().unwrap();
    let geometric = series(&reg, &(0..8).map(|k| (k, int(1))).collect::<Vec<_>>(), 8);
    assert!(same(&inv, &geometric), "{inv}");

    let x3 = series(&reg, &[(3, int(1))], EXACT);
    let xm3 = series(&reg, &[(-3, int(1))], EXACT);
    let one = x3.mul(&xm3).unwrap();
    assert_eq!(leading_term(&one), Some((0, int(1))));
    assert_eq!(one.terms().count(), 1);
    assert!(same(&x3.shift(-3), &series(&reg, &[(0, int(1))], EXACT)));
}

#[test]
fn integration_examples() {
    let reg = plain();
    let i = series(&reg, &[(10, int(-1))], EXACT).integrate().unwrap();
    assert!(same(&i, &series(&reg, &[(11, rat(-1, 11))], EXACT)));
    let i = series(&reg, &[(0, int(-1))], EXACT).integrate().unwrap();
    assert!(same(&i, &series(&reg, &[(1, int(-1))], EXACT)));
    assert!(LaurentSeries::zero(&reg, EXACT).integrate().unwrap().is_zero());
    assert!(matches!(
        series(&reg, &[(-1, int(1))], EXACT).integrate(),
        Err(Error::Usage(_))
    ));
}

fn expansions(c: &CurveModel, order: i32) -> LocalExpansions {
    let reg = c.coordinate_registry();
    let g: Vec<Poly> = c.g.iter().map(|p| p.with_registry(&reg).unwrap()).collect();
    local_expansions(&ExpansionInput { n: c.n, s: c.s, reg: &reg, g: &g }, order).unwrap()
}

#[test]
fn y_coefficients_37() {
    let c = CurveModel::load(&data_dir(), 3, 7).unwrap();
    let e = expansions(&c, 12);
    let parse = |t: &str| parse_formula(t, Some(&c.scheme)).unwrap();
    let check = |k: i32, text: &str| {
        let (got, want) = Poly::align(&e.y.coeff(k).unwrap(), &parse(text)).unwrap();
        assert_eq!(got, want, "ξ^{k}");
    };
    check(-7, "1");
    check(-6, "0");
    check(-4, "lam6/3");
    check(-1, "lam5/3 - lam6^2/9");
    check(2, "lam4/3 - 2*lam6*lam5/9 + 5*lam6^3/81");
    assert_eq!(leading_term(&e.x), Some((-3, int(1))));
}

#[test]
fn abelian_coordinates_start_with_their_weight() {
    for (n, s) in [(3, 7), (3, 8), (3, 10), (3, 11)] {
        let c = CurveModel::load(&data_dir(), n, s).unwrap();
        let e = expansions(&c, 8);
        for (i, u) in e.u.iter().enumerate() {
            let w = c.weights.u_weights[i];
            assert_eq!(leading_term(u), Some((w, rat(-1, w as i64))), "({n},{s}) u{}", i + 1);
        }
    }
    let c = CurveModel::load(&data_dir(), 3, 7).unwrap();
    let e = expansions(&c, 8);
    assert_eq!(leading_term(&e.u[4]), Some((2, rat(-1, 2))));
    assert_eq!(leading_term(&e.u[0]), Some((11, rat(-1, 11))));
}

#[test]
fn expansions_satisfy_the_curve() {
    for (n, s) in [(3, 7), (3, 8), (3, 10), (3, 11)] {
        let c = CurveModel::load(&data_dir(), n, s).unwrap();
        let e = expansions(&c, 10);
        let reg = c.coordinate_registry();
        let (xi, yi) = (reg.require(&Var::X).unwrap(), reg.require(&Var::Y).unwrap());
        let eq = c.curve_equation();
        let v = LaurentSeries::substitute_into(&eq, &[(xi, &e.x), (yi, &e.y)], &reg).unwrap();
        assert!(v.is_zero(), "({n},{s}): {v}");
        assert!(v.truncation() > -(n as i32 * s as i32) + 5);
    }
}

#[test]
fn expansion_coefficients_are_homogeneous() {
    for (n, s) in [(3, 7), (3, 8)] {
        let c = CurveModel::load(&data_dir(), n, s).unwrap();
        let e = expansions(&c, 12);
        let mut all = vec![(-(n as i64), &e.x), (-(s as i64), &e.y)];
        for (i, u) in e.u.iter().enumerate() {
            all.push((c.weights.u_weights[i] as i64, u));
        }
        for (weight, ser) in all {
            for (k, coeff) in ser.terms() {
                assert_eq!(coeff.is_homogeneous().unwrap(), Some(weight - k as i64), "({n},{s}) ξ^{k}");
            }
        }
    }
}

#[test]
fn bad_expansion_requests() {
    let c = CurveModel::bare(3, 7).unwrap();
    let reg = c.coordinate_registry();
    let input = ExpansionInput { n: 3, s: 7, reg: &reg, g: &c.g };
    assert!(matches!(local_expansions(&input, 0), Err(Error::Usage(_))));
}

fn unit_strategy() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-9i64..=9, 1i64..=5), 1..6)
}

fn unit_series(reg: &Registry, coeffs: &[(i64, i64)], lead: Rational, trunc: i32) -> LaurentSeries {
    let mut terms = vec![(0, lead)];
    terms.extend(coeffs.iter().enumerate().map(|(k, &(a, b))| (k as i32 + 1, rat(a, b))));
    series(reg, &terms, trunc)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn roots_power_back(c in unit_strategy(), n in 2u32..=4, shift in -3i32..=3) {
        let reg = plain();
        let lead = Rational::from_integer((1i64 << n).into());
        let a = unit_series(&reg, &c, lead, 8).shift(shift * n as i32);
        let r = a.nth_root(n).unwrap();
        let back = r.pow(n).unwrap();
        prop_assert!(same(&back, &a.with_truncation(back.truncation())));
        prop_assert!(back.truncation() >= a.truncation() - 1);
    }

    #[test]
    fn inverse_is_two_sided(c in unit_strategy(), lead in prop::sample::select(vec![-3i64, -1, 1, 2, 5]), shift in -4i32..=4) {
        let reg = plain();
        let a = unit_series(&reg, &c, int(lead), 9).shift(shift);
        let one = a.mul(&a.inverse().unwrap()).unwrap();
        prop_assert_eq!(leading_term(&one), Some((0, int(1))));
        prop_assert_eq!(one.terms().count(), 1);
    }

    #[test]
    fn product_is_associative(a in unit_strategy(), b in unit_strategy(), c in unit_strategy()) {
        let reg = plain();
        let (a, b, c) = (
            unit_series(&reg, &a, int(1), 7),
            unit_series(&reg, &b, int(2), 6).shift(-1),
            unit_series(&reg, &c, int(-1), 8).shift(2),
        );
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(same(&left, &right));
    }

    #[test]
    fn integrate_inverts_termwise_derivative(c in unit_strategy()) {
        let reg = plain();
        let a = unit_series(&reg, &c, int(3), 6).shift(1);
        let i = a.integrate().unwrap();
        for (k, coeff) in i.terms() {
            let orig = a.coeff(k - 1).unwrap();
            prop_assert_eq!(coeff.scale(&int(k as i64)), orig);
        }
    }
}
