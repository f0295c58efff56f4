//! Small helpers around `BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn pow(r: &Rational, e: u32) -> Rational {
    num_traits::pow(r.clone(), e as usize)
}

/// Canonical text: `n` for integers, `n/d` otherwise.
pub fn format(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `n` or `n/d` (optional leading sign).
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Integer `c > 0` such that `c·xs` are coprime integers; the rational returned
/// is that multiplier. Returns 1 for an all-zero input.
pub fn primitive_multiplier<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for x in xs {
        num_gcd = num_gcd.gcd(x.numer());
        den_lcm = den_lcm.lcm(x.denom());
    }
    if num_gcd.is_zero() {
        return Rational::one();
    }
    BigRational::new(den_lcm, num_gcd.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces() {
        assert_eq!(int(2) * rat(3, 4), rat(3, 2));
        assert_eq!(format(&rat(-6, 4)), "-3/2");
        assert_eq!(parse("-16/22528000"), Some(rat(-1, 1408000)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(binomial(7, 3), BigInt::from(35));
        assert_eq!(factorial(5), BigInt::from(120));
    }

    #[test]
    fn primitive() {
        let xs = [rat(3, 4), rat(-9, 2)];
        assert_eq!(primitive_multiplier(xs.iter()), rat(4, 3));
    }
}
