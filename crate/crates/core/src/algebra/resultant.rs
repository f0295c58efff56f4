use num_traits::{Signed, Zero};
use rustc_hash::FxHashMap;

use super::linalg::minor;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Sylvester resultant of `p` and `q` with respect to variable `idx`.
///
/// The Sylvester determinant is expanded by minors along columns with the
/// row subsets memoized, so no division occurs and coefficients stay exact.
/// Convention: `res(w - a, w - b) = a - b`.
pub fn resultant(p: &Poly, q: &Poly, idx: usize) -> Result<Poly> {
    if !p.registry().same_as(q.registry()) {
        return Err(Error::usage("resultant operands live over different registries"));
    }
    let m = p.degree_in(idx) as usize;
    let n = q.degree_in(idx) as usize;
    if m == 0 || n == 0 {
        return Err(Error::usage(format!(
            "resultant needs positive degree in {} for both operands",
            p.registry().var(idx)
        )));
    }
    let pc = p.coefficients_in(idx);
    let qc = q.coefficients_in(idx);
    let size = m + n;
    // Row r of the Sylvester matrix: entry at column c, or None for zero.
    let entry = |r: usize, c: usize| -> Option<&Poly> {
        let (coeffs, deg, shift) = if r < n { (&pc, m, r) } else { (&qc, n, r - n) };
        let k = c.checked_sub(shift)?;
        if k > deg {
            return None;
        }
        let e = &coeffs[deg - k];
        if e.is_zero() {
            None
        } else {
            Some(e)
        }
    };
    if size > 63 {
        return Err(Error::usage("Sylvester matrix too large"));
    }
    let zero = Poly::zero(p.registry());
    let one = Poly::one(p.registry());
    let mut memo: FxHashMap<u64, Poly> = FxHashMap::default();
    Ok(minor(size, 0, (1u64 << size) - 1, &entry, &mut memo, &zero, &one))
}

/// Make a resultant canonical: coprime integer coefficients and a fixed sign.
///
/// The sign of the leading term follows `reference` when that polynomial has a
/// term on the same monomial, and is positive otherwise.
pub fn normalize(p: &Poly, reference: Option<&Poly>) -> Poly {
    let prim = p.primitive();
    let Some((lead, c)) = prim.leading().cloned() else {
        return prim;
    };
    let want_negative = reference
        .map(|r| r.coefficient(&lead))
        .filter(|rc| !rc.is_zero())
        .map(|rc| rc.is_negative())
        .unwrap_or(false);
    if c.is_negative() != want_negative {
        -&prim
    } else {
        prim
    }
}
