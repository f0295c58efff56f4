//! Formula files shipped per curve and their consistency checks.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::format::{parse_file, parse_formula, serialize, NamedFormula};
use super::CurveModel;
use crate::algebra::{Parity, Poly, Var, WeightScheme};
use crate::error::{Error, Result};

/// One data file: a named group of formulas.
#[derive(Clone, Debug)]
pub struct FormulaGroup {
    pub name: String,
    pub path: PathBuf,
    pub sha256: String,
    pub formulas: Vec<NamedFormula>,
}

impl FormulaGroup {
    pub fn get(&self, name: &str) -> Option<&Poly> {
        self.formulas.iter().find(|f| f.name == name).map(|f| &f.poly)
    }

    /// Formulas in file order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Poly)> {
        self.formulas.iter().map(|f| (f.name.as_str(), &f.poly))
    }

    pub fn require(&self, name: &str) -> Result<&Poly> {
        self.get(name).ok_or_else(|| {
            Error::usage(format!("formula '{name}' missing from {}", self.path.display()))
        })
    }
}

/// All formula groups for one curve.
#[derive(Clone, Debug, Default)]
pub struct FormulaPack {
    pub curve_id: String,
    pub groups: Vec<FormulaGroup>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl FormulaPack {
    pub fn empty(curve_id: String) -> Self {
        FormulaPack {
            curve_id,
            groups: Vec::new(),
        }
    }

    /// Load every `*.frm` file in `dir`, checking it against `dir/CHECKSUMS` when present.
    pub fn load(dir: &Path, curve_id: String, scheme: &WeightScheme) -> Result<Self> {
        let io = |path: &Path, source| Error::Io {
            path: path.display().to_string(),
            source,
        };
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| io(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "frm"))
            .collect();
        paths.sort();
        let sums = read_checksums(dir)?;
        let mut groups = Vec::new();
        for path in paths {
            let bytes = std::fs::read(&path).map_err(|e| io(&path, e))?;
            let sha = sha256_hex(&bytes);
            let file_name = path.file_name().unwrap().to_string_lossy().to_string();
            if let Some(expected) = sums.iter().find(|(f, _)| *f == file_name).map(|(_, s)| s) {
                if *expected != sha {
                    return Err(Error::usage(format!(
                        "checksum mismatch for {}: expected {expected}, found {sha}",
                        path.display()
                    )));
                }
            }
            let text = String::from_utf8(bytes)
                .map_err(|_| Error::usage(format!("{} is not UTF-8", path.display())))?;
            let formulas = parse_file(&text, Some(scheme)).map_err(|e| match e {
                Error::Parse {
                    line,
                    column,
                    message,
                } => Error::usage(format!("{}:{line}:{column}: {message}", path.display())),
                other => other,
            })?;
            let name = path.file_stem().unwrap().to_string_lossy().to_string();
            groups.push(FormulaGroup {
                name,
                path,
                sha256: sha,
                formulas,
            });
        }
        Ok(FormulaPack { curve_id, groups })
    }

    pub fn group(&self, name: &str) -> Option<&FormulaGroup> {
        self.groups.iter().find(|g| g.name == name)
    }

    pub fn require_group(&self, name: &str) -> Result<&FormulaGroup> {
        self.group(name).ok_or_else(|| {
            Error::usage(format!(
                "curve {} has no formula group '{name}'",
                self.curve_id
            ))
        })
    }

    /// Look up `group/name`.
    pub fn formula(&self, group: &str, name: &str) -> Result<&Poly> {
        self.require_group(group)?.require(name)
    }
}

/// `(file name, sha256)` pairs from a `CHECKSUMS` file (`<hex>  <file>` per line).
pub fn read_checksums(dir: &Path) -> Result<Vec<(String, String)>> {
    let path = dir.join("CHECKSUMS");
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = std::fs::read_to_string(&path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some(hex), Some(file), None) => out.push((file.to_string(), hex.to_string())),
            _ => {
                return Err(Error::usage(format!(
                    "{}:{}: expected '<sha256>  <file>'",
                    path.display(),
                    k + 1
                )))
            }
        }
    }
    Ok(out)
}

/// Text of a `CHECKSUMS` file covering every `*.frm` file in `dir`.
pub fn compute_checksums(dir: &Path) -> Result<String> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|source| Error::Io {
            path: dir.display().to_string(),
            source,
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "frm"))
        .collect();
    paths.sort();
    let mut out = String::new();
    for p in paths {
        let bytes = std::fs::read(&p).map_err(|source| Error::Io {
            path: p.display().to_string(),
            source,
        })?;
        out.push_str(&format!(
            "{}  {}\n",
            sha256_hex(&bytes),
            p.file_name().unwrap().to_string_lossy()
        ));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckFailure {
    pub group: String,
    pub formula: String,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PackReport {
    pub curve: String,
    pub formulas: usize,
    pub checks_run: usize,
    pub failures: Vec<CheckFailure>,
}

impl PackReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Groups whose formulas mix odd and even terms; each term must still have a
/// definite parity so the formula can be split.
pub const MIXED_PARITY_GROUPS: [&str; 2] = ["rho", "reduced"];

/// Parity of every term of `p`, if all are defined and agree.
pub fn uniform_parity(p: &Poly) -> std::result::Result<Option<Parity>, String> {
    let mut seen: Option<Parity> = None;
    for (m, _) in p.terms() {
        let par = p.monomial_parity(m);
        if par == Parity::None {
            return Ok(None);
        }
        match seen {
            None => seen = Some(par),
            Some(s) if s != par => {
                return Err(format!(
                    "term {} is {:?} but earlier terms are {:?}",
                    p.format_monomial(m),
                    par,
                    s
                ))
            }
            _ => {}
        }
    }
    Ok(seen)
}

/// `F((x,y),(z,w)) - F((z,w),(x,y))`.
pub fn swap_defect(f: &Poly) -> Result<Poly> {
    let reg = f.registry();
    let idx = |v: Var| reg.require(&v);
    let (x, y, z, w) = (idx(Var::X)?, idx(Var::Y)?, idx(Var::Z)?, idx(Var::W)?);
    let m = |i: usize| Poly::var(reg, reg.var(i)).expect("registry var");
    let swapped = f.substitute(&[(x, m(z)), (y, m(w)), (z, m(x)), (w, m(y))]);
    Ok(f - &swapped)
}

/// Round trip, index range, homogeneity and parity for every formula, plus the
/// swap symmetry of F.
pub fn validate_pack(curve: &CurveModel, pack: &FormulaPack) -> PackReport {
    let mut failures = Vec::new();
    let mut checks = 0usize;
    let mut count = 0usize;
    let g = curve.genus as u8;
    for group in &pack.groups {
        for f in &group.formulas {
            count += 1;
            let mut fail = |check: &str, detail: String| {
                failures.push(CheckFailure {
                    group: group.name.clone(),
                    formula: f.name.clone(),
                    check: check.to_string(),
                    detail,
                })
            };
            checks += 1;
            let text = serialize(&f.poly);
            match parse_formula(&text, Some(&curve.scheme)) {
                Ok(back) if back == f.poly && serialize(&back) == text => {}
                Ok(_) => fail("round-trip", "re-parsed value differs".into()),
                Err(e) => fail("round-trip", e.to_string()),
            }

            checks += 1;
            let reg = f.poly.registry();
            let bad_index = reg.vars().iter().find(|v| match v {
                Var::U(i) => *i == 0 || *i > g,
                Var::Lam(j) => *j as u32 >= curve.s,
                Var::Sym(s) => s.indices.iter().any(|&i| i == 0 || i > g),
                _ => false,
            });
            if let Some(v) = bad_index {
                fail("index-range", format!("{v} is out of range for genus {g}"));
                continue;
            }

            checks += 1;
            match f.poly.inhomogeneous_witness() {
                Ok(None) => {}
                Ok(Some((m, mw, lw))) => fail(
                    "homogeneity",
                    format!(
                        "term {} has weight {mw}, leading term has weight {lw}",
                        f.poly.format_monomial(&m)
                    ),
                ),
                Err(e) => fail("homogeneity", e.to_string()),
            }

            checks += 1;
            if MIXED_PARITY_GROUPS.contains(&group.name.as_str()) {
                if let Some((m, _)) = f
                    .poly
                    .terms()
                    .iter()
                    .find(|(m, _)| f.poly.monomial_parity(m) == Parity::None)
                {
                    fail(
                        "parity",
                        format!("term {} has no definite parity", f.poly.format_monomial(m)),
                    );
                }
            } else if let Err(d) = uniform_parity(&f.poly) {
                fail("parity", d);
            }
        }
    }
    if let Some(f) = &curve.f {
        checks += 1;
        match swap_defect(f) {
            Ok(d) if d.is_zero() => {}
            Ok(d) => failures.push(CheckFailure {
                group: "differentials".into(),
                formula: "F".into(),
                check: "swap-symmetry".into(),
                detail: format!(
                    "F - F(swap) has {} terms, first {}",
                    d.len(),
                    d.terms()
                        .first()
                        .map(|(m, _)| d.format_monomial(m))
                        .unwrap_or_default()
                ),
            }),
            Err(e) => failures.push(CheckFailure {
                group: "differentials".into(),
                formula: "F".into(),
                check: "swap-symmetry".into(),
                detail: e.to_string(),
            }),
        }
    }
    PackReport {
        curve: pack.curve_id.clone(),
        formulas: count,
        checks_run: checks,
        failures,
    }
}
