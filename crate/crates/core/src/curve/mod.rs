//! Curve models `y^n = x^s + Σ λ_j x^j`, their gap sequences and weights, and
//! the formula data shipped for each curve.

pub mod format;
pub mod pack;

use std::path::{Path, PathBuf};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::{Parity, Poly, Registry, Var, VariableRegistry, WeightScheme};
use crate::error::{Error, Result};

pub use format::{parse_file, parse_formula, serialize, serialize_file, NamedFormula};
pub use pack::{validate_pack, CheckFailure, FormulaGroup, FormulaPack, PackReport};

/// Naturals not of the form `a n + b s` with `a, b ≥ 0`, ascending.
pub fn gap_sequence(n: u32, s: u32) -> Result<Vec<u32>> {
    if n < 2 || s <= n {
        return Err(Error::usage(format!("need s > n >= 2, got ({n},{s})")));
    }
    if n.gcd(&s) != 1 {
        return Err(Error::usage(format!("n = {n} and s = {s} are not coprime")));
    }
    // Every integer at or above (n-1)(s-1) is representable.
    let bound = (n - 1) * (s - 1);
    let mut representable = vec![false; bound as usize];
    for a in 0..=bound / n {
        let mut v = a * n;
        while v < bound {
            representable[v as usize] = true;
            v += s;
        }
    }
    Ok((1..bound).filter(|&k| !representable[k as usize]).collect())
}

/// Weights of the curve variables and of σ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SatoWeights {
    /// `u_weights[i-1]` is the weight of `u_i`.
    pub u_weights: Vec<i32>,
    /// `lam_weights[j]` is the weight of `λ_j`.
    pub lam_weights: Vec<i32>,
    pub sigma_weight: i64,
    pub sigma_parity: Parity,
}

/// Default λ-weight rule `wt(λ_j) = -n (s - j)`; curve data may override it.
pub fn default_lambda_weights(n: u32, s: u32) -> Vec<i32> {
    (0..s).map(|j| -((n * (s - j)) as i32)).collect()
}

/// Weights for the `(n,s)` curve. `lam_weights` falls back to the default rule.
pub fn sato_weights(n: u32, s: u32, lam_weights: Option<Vec<i32>>) -> Result<SatoWeights> {
    let gaps = gap_sequence(n, s)?;
    let g = gaps.len() as i64;
    let u_weights: Vec<i32> = gaps.iter().rev().map(|&w| w as i32).collect();
    // |π| for the Weierstrass partition π_k = w_{g-k+1} + k - g.
    let sigma_weight = gaps.iter().map(|&w| w as i64).sum::<i64>() - g * (g - 1) / 2;
    let closed_form = ((n * n - 1) as i64 * (s * s - 1) as i64) / 24;
    if sigma_weight != closed_form {
        return Err(Error::internal(format!(
            "σ weight {sigma_weight} disagrees with (n²-1)(s²-1)/24 = {closed_form}"
        )));
    }
    let sigma_parity = if sigma_weight % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    };
    let lam_weights = lam_weights.unwrap_or_else(|| default_lambda_weights(n, s));
    if lam_weights.len() != s as usize {
        return Err(Error::usage(format!(
            "expected {s} λ weights, got {}",
            lam_weights.len()
        )));
    }
    Ok(SatoWeights {
        u_weights,
        lam_weights,
        sigma_weight,
        sigma_parity,
    })
}

#[derive(Debug, Deserialize)]
struct CurveFile {
    n: u32,
    s: u32,
    /// Weights of λ_0, λ_1, … in that order.
    lambda_weights: Vec<i32>,
}

/// Curve data: structure constants plus the differential and F polynomials when shipped.
#[derive(Clone, Debug)]
pub struct CurveModel {
    pub n: u32,
    pub s: u32,
    pub genus: usize,
    pub gaps: Vec<u32>,
    pub weights: SatoWeights,
    pub scheme: WeightScheme,
    /// `g[i-1]` is the numerator of `du_i`, over `x, y, λ`.
    pub g: Vec<Poly>,
    pub h: Option<Vec<Poly>>,
    /// Numerator of the fundamental bidifferential, over `x, y, z, w, λ`.
    pub f: Option<Poly>,
    pub pack: FormulaPack,
}

impl CurveModel {
    /// Model with no formula data; `g_i` are the monomials `x^a y^b` in order of
    /// increasing pole order at infinity.
    pub fn bare(n: u32, s: u32) -> Result<CurveModel> {
        let weights = sato_weights(n, s, None)?;
        Self::assemble(n, s, weights, FormulaPack::empty(format!("{n}_{s}")))
    }

    /// Model with the formula pack from `data_dir/<n>_<s>/`.
    pub fn load(data_dir: &Path, n: u32, s: u32) -> Result<CurveModel> {
        let dir = curve_dir(data_dir, n, s);
        let toml_path = dir.join("curve.toml");
        let text = std::fs::read_to_string(&toml_path).map_err(|source| Error::Io {
            path: toml_path.display().to_string(),
            source,
        })?;
        let file: CurveFile = toml::from_str(&text)
            .map_err(|e| Error::usage(format!("{}: {e}", toml_path.display())))?;
        if (file.n, file.s) != (n, s) {
            return Err(Error::usage(format!(
                "{} describes ({},{}) not ({n},{s})",
                toml_path.display(),
                file.n,
                file.s
            )));
        }
        let weights = sato_weights(n, s, Some(file.lambda_weights))?;
        let scheme = scheme_from(n, s, &weights);
        let pack = FormulaPack::load(&dir, format!("{n}_{s}"), &scheme)?;
        Self::assemble(n, s, weights, pack)
    }

    fn assemble(n: u32, s: u32, weights: SatoWeights, pack: FormulaPack) -> Result<CurveModel> {
        let gaps = gap_sequence(n, s)?;
        let genus = gaps.len();
        let scheme = scheme_from(n, s, &weights);
        let reg = coordinate_registry(&scheme, s, false);
        let mut g = Vec::with_capacity(genus);
        let mut h = Vec::new();
        let mut f = None;
        if let Some(group) = pack.group("differentials") {
            for i in 1..=genus {
                let p = group.require(&format!("g{i}"))?;
                g.push(p.with_registry(&reg).map_err(|_| {
                    Error::usage(format!("g{i} uses variables outside x, y, λ"))
                })?);
                if let Some(hp) = group.get(&format!("h{i}")) {
                    h.push(hp.with_registry(&reg).map_err(|_| {
                        Error::usage(format!("h{i} uses variables outside x, y, λ"))
                    })?);
                }
            }
            if let Some(fp) = group.get("F") {
                let freg = coordinate_registry(&scheme, s, true);
                f = Some(fp.with_registry(&freg).map_err(|_| {
                    Error::usage("F uses variables outside x, y, z, w, λ")
                })?);
            }
        } else {
            g = monomial_differentials(n, s, &reg)?;
        }
        let h = (h.len() == genus).then_some(h);
        Ok(CurveModel {
            n,
            s,
            genus,
            gaps,
            weights,
            scheme,
            g,
            h,
            f,
            pack,
        })
    }

    pub fn id(&self) -> String {
        format!("{},{}", self.n, self.s)
    }

    /// Registry over `λ_0..λ_{s-1}, x, y`.
    pub fn coordinate_registry(&self) -> Registry {
        coordinate_registry(&self.scheme, self.s, false)
    }

    /// Registry over `λ_0..λ_{s-1}, x, y, z, w`.
    pub fn pair_registry(&self) -> Registry {
        coordinate_registry(&self.scheme, self.s, true)
    }

    /// `y^n - x^s - Σ λ_j x^j` over the coordinate registry.
    pub fn curve_equation(&self) -> Poly {
        let reg = self.coordinate_registry();
        let x = Poly::var(&reg, &Var::X).expect("x");
        let y = Poly::var(&reg, &Var::Y).expect("y");
        let mut p = &y.pow(self.n) - &x.pow(self.s);
        for j in 0..self.s {
            let lam = Poly::var(&reg, &Var::Lam(j as u8)).expect("λ");
            p = &p - &(&lam * &x.pow(j));
        }
        p
    }

    pub fn require_f(&self) -> Result<&Poly> {
        self.f.as_ref().ok_or_else(|| {
            Error::usage(format!(
                "curve ({}) has no fundamental polynomial F in its data",
                self.id()
            ))
        })
    }
}

fn scheme_from(n: u32, s: u32, w: &SatoWeights) -> WeightScheme {
    WeightScheme {
        n,
        s,
        u_weights: w.u_weights.clone(),
        lam_weights: w.lam_weights.clone(),
    }
}

fn coordinate_registry(scheme: &WeightScheme, s: u32, pair: bool) -> Registry {
    let mut vars: Vec<Var> = (0..s).map(|j| Var::Lam(j as u8)).collect();
    vars.extend([Var::X, Var::Y]);
    if pair {
        vars.extend([Var::Z, Var::W]);
    }
    VariableRegistry::new(vars, Some(scheme))
}

/// The `g` monomials `x^a y^b` (`b < n`) of smallest pole order `a n + b s`.
fn monomial_differentials(n: u32, s: u32, reg: &Registry) -> Result<Vec<Poly>> {
    let genus = ((n - 1) * (s - 1) / 2) as usize;
    let mut mons: Vec<(u32, u32, u32)> = Vec::new();
    for b in 0..n {
        for a in 0..s {
            mons.push((a * n + b * s, a, b));
        }
    }
    mons.sort();
    let x = Poly::var(reg, &Var::X)?;
    let y = Poly::var(reg, &Var::Y)?;
    Ok(mons
        .into_iter()
        .take(genus)
        .map(|(_, a, b)| &x.pow(a) * &y.pow(b))
        .collect())
}

pub fn curve_dir(data_dir: &Path, n: u32, s: u32) -> PathBuf {
    data_dir.join(format!("{n}_{s}"))
}

/// Parse a curve identifier such as `3,7`.
pub fn parse_curve_id(text: &str) -> Result<(u32, u32)> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| Error::usage(format!("curve id '{text}' should look like 3,7")))?;
    let n = a
        .trim()
        .parse()
        .map_err(|_| Error::usage(format!("bad n in curve id '{text}'")))?;
    let s = b
        .trim()
        .parse()
        .map_err(|_| Error::usage(format!("bad s in curve id '{text}'")))?;
    Ok((n, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trigonal_gaps() {
        assert_eq!(gap_sequence(3, 7).unwrap(), vec![1, 2, 4, 5, 8, 11]);
        assert_eq!(gap_sequence(3, 8).unwrap(), vec![1, 2, 4, 5, 7, 10, 13]);
        assert_eq!(gap_sequence(2, 3).unwrap(), vec![1]);
        assert!(gap_sequence(3, 9).is_err());
    }

    #[test]
    fn weights_37() {
        let w = sato_weights(3, 7, None).unwrap();
        assert_eq!(w.u_weights, vec![11, 8, 5, 4, 2, 1]);
        assert_eq!(w.lam_weights, vec![-21, -18, -15, -12, -9, -6, -3]);
        assert_eq!(w.sigma_weight, 16);
        assert_eq!(w.sigma_parity, Parity::Even);
        let w8 = sato_weights(3, 8, None).unwrap();
        assert_eq!((w8.sigma_weight, w8.sigma_parity), (21, Parity::Odd));
    }

    #[test]
    fn bare_differentials_37() {
        let c = CurveModel::bare(3, 7).unwrap();
        let txt: Vec<String> = c.g.iter().map(|p| p.to_string()).collect();
        assert_eq!(txt, ["1", "x", "x^2", "y", "x^3", "x*y"]);
    }
}
