use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Rank over the rationals.
///
/// The rank modulo a large prime is a lower bound for the rational rank, so a
/// full rank modulo the prime is returned directly; anything else falls back
/// to exact elimination.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let ncols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let full = rows.len().min(ncols);
    if rank_mod_p(rows, ncols) == Some(full) {
        return full;
    }
    rank_exact(rows)
}

const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    acc
}

fn reduce(r: &Rational) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let modp = |x: &BigInt| -> u64 {
        let m = ((x % &p) + &p) % &p;
        m.to_u64().expect("residue fits")
    };
    let d = modp(r.denom());
    if d == 0 {
        return None;
    }
    Some(mul_mod(modp(r.numer()), pow_mod(d, PRIME - 2)))
}

/// Rank of the matrix reduced modulo `2^61 - 1`; `None` if a denominator vanishes there.
pub fn rank_mod_p(rows: &[Vec<Rational>], ncols: usize) -> Option<usize> {
    let mut m: Vec<Vec<u64>> = Vec::with_capacity(rows.len());
    for r in rows {
        let mut row = r.iter().map(reduce).collect::<Option<Vec<u64>>>()?;
        row.resize(ncols, 0);
        m.push(row);
    }
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = pow_mod(m[rank][col], PRIME - 2);
        let prow: Vec<u64> = m[rank].iter().map(|&x| mul_mod(x, inv)).collect();
        for r in (rank + 1)..m.len() {
            let f = m[r][col];
            if f == 0 {
                continue;
            }
            for c in col..ncols {
                m[r][c] = (m[r][c] + PRIME - mul_mod(f, prow[c])) % PRIME;
            }
        }
        m[rank] = prow;
        rank += 1;
    }
    Some(rank)
}

/// Rank over the rationals by exact Gaussian elimination.
pub fn rank_exact(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.iter().map(|r| r.len()).max().unwrap_or(0);
    for r in m.iter_mut() {
        r.resize(ncols, Rational::zero());
    }
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = Rational::from_integer(1.into()) / &m[rank][col];
        let prow: Vec<Rational> = m[rank].iter().map(|x| x * &inv).collect();
        for r in (rank + 1)..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..ncols {
                let delta = &f * &prow[c];
                m[r][c] -= delta;
            }
        }
        m[rank] = prow;
        rank += 1;
    }
    rank
}

/// Determinant of a square polynomial matrix.
///
/// Laplace expansion along columns with the row subsets memoized, so no
/// division occurs and coefficients stay exact. `None` entries are zero.
pub fn poly_det(entries: &[Vec<Option<Poly>>], one: &Poly) -> Result<Poly> {
    let size = entries.len();
    if entries.iter().any(|r| r.len() != size) {
        return Err(Error::usage("determinant needs a square matrix"));
    }
    if size > 63 {
        return Err(Error::usage("determinant size above 63 is not supported"));
    }
    if size == 0 {
        return Ok(one.clone());
    }
    let entry = |r: usize, c: usize| entries[r][c].as_ref().filter(|p| !p.is_zero());
    let zero = Poly::zero(one.registry());
    let mut memo: FxHashMap<u64, Poly> = FxHashMap::default();
    Ok(minor(size, 0, (1u64 << size) - 1, &entry, &mut memo, &zero, one))
}

/// Determinant of the submatrix on columns `col..size` and the rows in `rows`.
pub(crate) fn minor<'a>(
    size: usize,
    col: usize,
    rows: u64,
    entry: &dyn Fn(usize, usize) -> Option<&'a Poly>,
    memo: &mut FxHashMap<u64, Poly>,
    zero: &Poly,
    one: &Poly,
) -> Poly {
    if col == size {
        return one.clone();
    }
    if let Some(v) = memo.get(&rows) {
        return v.clone();
    }
    let mut acc = zero.clone();
    let mut sign_pos = true;
    for r in 0..size {
        if rows & (1 << r) == 0 {
            continue;
        }
        if let Some(e) = entry(r, col) {
            let sub = minor(size, col + 1, rows & !(1 << r), entry, memo, zero, one);
            if !sub.is_zero() {
                let term = e * &sub;
                acc = if sign_pos { &acc + &term } else { &acc - &term };
            }
        }
        sign_pos = !sign_pos;
    }
    memo.insert(rows, acc.clone());
    acc
}
