//! Simultaneous root finding for univariate rational polynomials in
//! arbitrary-precision complex arithmetic (Aberth–Ehrlich iteration).

use std::fmt;

use dashu_float::FBig;
use dashu_int::IBig;
use num_complex::Complex;
use num_traits::{Signed, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

pub type Float = FBig;
pub type CFloat = Complex<FBig>;

/// Fixed starting-angle offset (radians); `√2 − 1` keeps the initial circle off the axes.
const START_ANGLE: f64 = std::f64::consts::SQRT_2 - 1.0;
const MAX_ITERATIONS: usize = 2000;

pub fn bits_for_digits(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 16
}

pub fn float_from_rational(r: &Rational, bits: usize) -> Float {
    let n = IBig::from_str_radix(&r.numer().to_str_radix(16), 16).expect("hex integer");
    let d = IBig::from_str_radix(&r.denom().to_str_radix(16), 16).expect("hex integer");
    let n = FBig::from_parts(n, 0).with_precision(bits).value();
    let d = FBig::from_parts(d, 0).with_precision(bits).value();
    n / d
}

pub fn float_from_f64(x: f64, bits: usize) -> Float {
    FBig::try_from(x).expect("finite f64").with_precision(bits).value()
}

pub fn float_zero(bits: usize) -> Float {
    FBig::from_parts(IBig::from(0), 0).with_precision(bits).value()
}

pub fn float_one(bits: usize) -> Float {
    FBig::from_parts(IBig::from(1), 0).with_precision(bits).value()
}

/// `10^-k` at the given precision.
pub fn float_pow10_neg(k: u32, bits: usize) -> Float {
    let ten = FBig::from_parts(IBig::from(10), 0).with_precision(bits).value();
    float_one(bits) / ten.powi(IBig::from(k))
}

pub fn norm_sqr(z: &CFloat) -> Float {
    &z.re * &z.re + &z.im * &z.im
}

pub fn abs(z: &CFloat) -> Float {
    norm_sqr(z).sqrt()
}

/// A complex number with its working precision in decimal digits.
#[derive(Clone, Debug)]
pub struct ComplexValue {
    pub value: CFloat,
    pub digits: u32,
}

impl ComplexValue {
    pub fn re_f64(&self) -> f64 {
        self.value.re.to_f64().value()
    }

    pub fn im_f64(&self) -> f64 {
        self.value.im.to_f64().value()
    }

    pub fn abs(&self) -> Float {
        abs(&self.value)
    }
}

/// Decimal rendering with `digits` significant digits.
pub fn format_float(x: &Float, digits: u32) -> String {
    let d = x.to_decimal().value();
    let d = d.with_precision(digits as usize).value();
    d.to_string()
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.digits.min(30);
        let im = &self.value.im;
        let sign = if im.is_negative() { "-" } else { "+" };
        write!(
            f,
            "{} {} {}i",
            format_float(&self.value.re, digits),
            sign,
            format_float(&im.abs(), digits)
        )
    }
}

/// Horner evaluation of `Σ c_k z^k` (coefficients lowest degree first) and its derivative.
pub fn eval_with_derivative(coeffs: &[CFloat], z: &CFloat) -> (CFloat, CFloat) {
    let mut p = coeffs.last().expect("nonempty").clone();
    let mut dp = CFloat::new(p.re.clone() * 0u8, p.re.clone() * 0u8);
    for c in coeffs.iter().rev().skip(1) {
        dp = &dp * z + &p;
        p = &p * z + c;
    }
    (p, dp)
}

pub fn eval(coeffs: &[CFloat], z: &CFloat) -> CFloat {
    let mut p = coeffs.last().expect("nonempty").clone();
    for c in coeffs.iter().rev().skip(1) {
        p = &p * z + c;
    }
    p
}

/// All complex roots of `Σ coeffs[k] z^k` at `digits` decimal digits.
///
/// Postcondition: every returned root satisfies
/// `|p(z)| ≤ 10^(-digits/2) · max|coeff| · max(1,|z|)^deg`.
pub fn find_roots(coeffs: &[Rational], digits: u32) -> Result<Vec<ComplexValue>> {
    if digits < 16 {
        return Err(Error::usage("root finding needs at least 16 digits of precision"));
    }
    let deg = coeffs
        .iter()
        .rposition(|c| !c.is_zero())
        .ok_or_else(|| Error::usage("cannot find roots of the zero polynomial"))?;
    if deg == 0 {
        return Err(Error::usage("root finding needs degree at least 1"));
    }
    let coeffs = &coeffs[..=deg];
    let bits = bits_for_digits(digits) + 64;
    let zero = float_zero(bits);
    let cs: Vec<CFloat> = coeffs
        .iter()
        .map(|c| CFloat::new(float_from_rational(c, bits), zero.clone()))
        .collect();

    let lead = coeffs[deg].abs();
    let ratio = coeffs[..deg]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    let radius = 1.0 + num_traits::ToPrimitive::to_f64(&ratio).unwrap_or(f64::MAX);
    let mut zs: Vec<CFloat> = (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + START_ANGLE;
            CFloat::new(
                float_from_f64(radius * theta.cos(), bits),
                float_from_f64(radius * theta.sin(), bits),
            )
        })
        .collect();

    let step_tol = float_pow10_neg(digits + 4, bits);
    let one = float_one(bits);
    let mut converged = vec![false; deg];
    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for k in 0..deg {
            if converged[k] {
                continue;
            }
            let (p, dp) = eval_with_derivative(&cs, &zs[k]);
            if p.re.is_zero() && p.im.is_zero() {
                converged[k] = true;
                continue;
            }
            let newton = &p / &dp;
            let mut repulsion = CFloat::new(zero.clone(), zero.clone());
            for (j, zj) in zs.iter().enumerate() {
                if j != k {
                    repulsion = repulsion + CFloat::new(one.clone(), zero.clone()) / (&zs[k] - zj);
                }
            }
            let denom = CFloat::new(one.clone(), zero.clone()) - &newton * &repulsion;
            let step = &newton / &denom;
            let scale = norm_sqr(&zs[k]).max(one.clone());
            zs[k] = &zs[k] - &step;
            if norm_sqr(&step) <= &step_tol * &step_tol * scale {
                converged[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }

    // Backward-error certification.
    let coeff_scale = coeffs
        .iter()
        .map(|c| c.abs())
        .max()
        .expect("nonempty");
    let coeff_scale = float_from_rational(&coeff_scale, bits);
    let tol = float_pow10_neg(digits / 2, bits);
    let mut residuals = Vec::new();
    let mut ok = true;
    for z in &zs {
        let pz = abs(&eval(&cs, z));
        let zabs = abs(z).max(one.clone());
        let bound = &tol * &coeff_scale * zabs.powi(IBig::from(deg));
        if pz > bound {
            ok = false;
        }
        residuals.push(format_float(&pz, 6));
    }
    if !ok {
        return Err(Error::Numeric {
            message: format!("Aberth iteration did not reach backward error 1e-{}", digits / 2),
            residuals,
        });
    }
    Ok(zs
        .into_iter()
        .map(|value| ComplexValue { value, digits })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn dist(a: &ComplexValue, b: &ComplexValue) -> f64 {
        abs(&(&a.value - &b.value)).to_f64().value()
    }

    #[test]
    fn square_roots_of_one() {
        let roots = find_roots(&[int(-1), int(0), int(1)], 30).unwrap();
        let mut re: Vec<f64> = roots.iter().map(|r| r.re_f64()).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] + 1.0).abs() < 1e-25 && (re[1] - 1.0).abs() < 1e-25);
    }

    #[test]
    fn cube_roots_equilateral() {
        let roots = find_roots(&[int(-1), int(0), int(0), int(1)], 30).unwrap();
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert!((dist(&roots[i], &roots[j]) - 3f64.sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn known_factorization_at_50_digits() {
        // (z-1)(z-2)(z-3) = z^3 - 6z^2 + 11z - 6
        let roots = find_roots(&[int(-6), int(11), int(-6), int(1)], 50).unwrap();
        let bits = bits_for_digits(50);
        for target in [1i64, 2, 3] {
            let t = CFloat::new(float_from_rational(&int(target), bits), float_zero(bits));
            let best = roots
                .iter()
                .map(|r| abs(&(&r.value - &t)))
                .min()
                .unwrap();
            assert!(best < float_pow10_neg(25, bits));
        }
    }

    #[test]
    fn rejects_constant() {
        assert!(find_roots(&[int(3)], 30).is_err());
        assert!(find_roots(&[int(1), int(1)], 8).is_err());
    }
}
