use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

/// Evaluation point tag carried by symbols in two-point formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Base,
    U,
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    P,
    Q,
}

/// A formal Abelian function symbol: `p[i,j,...]` (Kleinian ℘) or `Q[i,j,...]`.
///
/// Indices are kept sorted ascending, so `p[6,5]` and `p[5,6]` are the same symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianSymbol {
    pub kind: SymbolKind,
    pub indices: Vec<u8>,
    pub point: Point,
}

impl AbelianSymbol {
    pub fn new(kind: SymbolKind, mut indices: Vec<u8>, point: Point) -> Result<Self> {
        indices.sort_unstable();
        if indices.iter().any(|&i| i == 0) {
            return Err(Error::usage("symbol indices start at 1"));
        }
        match kind {
            SymbolKind::P if indices.len() < 2 => {
                return Err(Error::usage("a p-symbol needs at least two indices"))
            }
            SymbolKind::Q if indices.len() < 2 || indices.len() % 2 == 1 => {
                return Err(Error::usage("a Q-symbol needs an even number (>= 2) of indices"))
            }
            _ => {}
        }
        Ok(AbelianSymbol {
            kind,
            indices,
            point,
        })
    }

    pub fn p(indices: &[u8]) -> Self {
        Self::new(SymbolKind::P, indices.to_vec(), Point::Base).expect("valid p-symbol")
    }

    pub fn q(indices: &[u8]) -> Self {
        Self::new(SymbolKind::Q, indices.to_vec(), Point::Base).expect("valid Q-symbol")
    }

    pub fn at(mut self, point: Point) -> Self {
        self.point = point;
        self
    }

    /// ℘_S is odd under u -> -u when |S| is odd; every Q is even.
    pub fn parity(&self) -> Parity {
        match self.kind {
            SymbolKind::Q => Parity::Even,
            SymbolKind::P if self.indices.len() % 2 == 0 => Parity::Even,
            SymbolKind::P => Parity::Odd,
        }
    }

    /// The symbol obtained by one more derivative in `u_k` (only defined for ℘).
    pub fn derivative(&self, k: u8) -> Option<AbelianSymbol> {
        if self.kind != SymbolKind::P {
            return None;
        }
        let mut indices = self.indices.clone();
        indices.push(k);
        indices.sort_unstable();
        Some(AbelianSymbol {
            kind: SymbolKind::P,
            indices,
            point: self.point,
        })
    }
}

impl Ord for AbelianSymbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind
            .cmp(&other.kind)
            .then(self.indices.len().cmp(&other.indices.len()))
            .then(self.point.cmp(&other.point))
            .then_with(|| other.indices.cmp(&self.indices))
    }
}

impl PartialOrd for AbelianSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AbelianSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = match self.kind {
            SymbolKind::P => "p",
            SymbolKind::Q => "Q",
        };
        write!(f, "{head}[")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("]")?;
        match self.point {
            Point::Base => Ok(()),
            Point::U => f.write_str("{u}"),
            Point::V => f.write_str("{v}"),
        }
    }
}

/// A polynomial variable.
///
/// The derived order of the variants is the canonical registry order:
/// curve point coordinates first, then Abelian symbols, curve constants
/// (highest index first), Abelian coordinates, and Newton power sums.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Z,
    W,
    X,
    Y,
    Xi,
    Sym(AbelianSymbol),
    Lam(u8),
    U(u8),
    Newton(u16),
}

impl Var {
    fn rank(&self) -> u8 {
        match self {
            Var::Z => 0,
            Var::W => 1,
            Var::X => 2,
            Var::Y => 3,
            Var::Xi => 4,
            Var::Sym(_) => 5,
            Var::Lam(_) => 6,
            Var::U(_) => 7,
            Var::Newton(_) => 8,
        }
    }

    pub fn as_symbol(&self) -> Option<&AbelianSymbol> {
        match self {
            Var::Sym(s) => Some(s),
            _ => None,
        }
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank()).then_with(|| match (self, other) {
            (Var::Sym(a), Var::Sym(b)) => a.cmp(b),
            (Var::Lam(a), Var::Lam(b)) => b.cmp(a),
            (Var::U(a), Var::U(b)) => a.cmp(b),
            (Var::Newton(a), Var::Newton(b)) => a.cmp(b),
            _ => Ordering::Equal,
        })
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z => f.write_str("z"),
            Var::W => f.write_str("w"),
            Var::X => f.write_str("x"),
            Var::Y => f.write_str("y"),
            Var::Xi => f.write_str("xi"),
            Var::Sym(s) => write!(f, "{s}"),
            Var::Lam(j) => write!(f, "lam{j}"),
            Var::U(i) => write!(f, "u{i}"),
            Var::Newton(k) => write!(f, "np{k}"),
        }
    }
}

/// Behaviour of a variable under u -> -u.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl Parity {
    pub fn combine(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::None, _) | (_, Parity::None) => Parity::None,
            (a, b) if a == b => Parity::Even,
            _ => Parity::Odd,
        }
    }

    pub fn pow(self, e: u32) -> Parity {
        match self {
            Parity::Odd if e % 2 == 0 => Parity::Even,
            p => {
                if e == 0 {
                    Parity::Even
                } else {
                    p
                }
            }
        }
    }
}

/// Sato weights of the curve-dependent variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightScheme {
    pub n: u32,
    pub s: u32,
    /// Weight of `u_i` at position `i - 1`.
    pub u_weights: Vec<i32>,
    /// Weight of `lam_j` at position `j`.
    pub lam_weights: Vec<i32>,
}

impl WeightScheme {
    pub fn weight(&self, var: &Var) -> Option<i32> {
        match var {
            Var::Z | Var::X => Some(-(self.n as i32)),
            Var::W | Var::Y => Some(-(self.s as i32)),
            Var::Xi => Some(1),
            Var::Newton(k) => Some(*k as i32),
            Var::U(i) => self.u_weights.get((*i as usize).checked_sub(1)?).copied(),
            Var::Lam(j) => self.lam_weights.get(*j as usize).copied(),
            Var::Sym(s) => {
                let mut total = 0;
                for &i in &s.indices {
                    total -= self.u_weights.get((i as usize).checked_sub(1)?)?;
                }
                Some(total)
            }
        }
    }
}

fn default_weight(var: &Var) -> Option<i32> {
    match var {
        Var::Xi => Some(1),
        Var::Newton(k) => Some(*k as i32),
        _ => None,
    }
}

fn default_parity(var: &Var) -> Parity {
    match var {
        Var::U(_) => Parity::Odd,
        Var::Lam(_) | Var::Z | Var::W => Parity::Even,
        Var::Sym(s) => s.parity(),
        Var::X | Var::Y | Var::Xi | Var::Newton(_) => Parity::None,
    }
}

/// Ordered set of variables with per-variable weight and parity.
///
/// Variables are always stored in canonical [`Var`] order, so two registries
/// over the same variable set are identical and monomial order is independent
/// of how the registry was assembled.
#[derive(Debug)]
pub struct VariableRegistry {
    vars: Vec<Var>,
    weights: Vec<Option<i32>>,
    parities: Vec<Parity>,
    index: FxHashMap<Var, usize>,
    scheme: Option<WeightScheme>,
}

pub type Registry = Arc<VariableRegistry>;

impl VariableRegistry {
    pub fn new(vars: impl IntoIterator<Item = Var>, scheme: Option<&WeightScheme>) -> Registry {
        let mut vars: Vec<Var> = vars.into_iter().collect();
        vars.sort();
        vars.dedup();
        let weights = vars
            .iter()
            .map(|v| match scheme {
                Some(s) => s.weight(v),
                None => default_weight(v),
            })
            .collect();
        let parities = vars.iter().map(default_parity).collect();
        let index = vars.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        Arc::new(VariableRegistry {
            vars,
            weights,
            parities,
            index,
            scheme: scheme.cloned(),
        })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn var(&self, idx: usize) -> &Var {
        &self.vars[idx]
    }

    pub fn index_of(&self, var: &Var) -> Option<usize> {
        self.index.get(var).copied()
    }

    pub fn require(&self, var: &Var) -> Result<usize> {
        self.index_of(var)
            .ok_or_else(|| Error::usage(format!("variable {var} is not in the registry")))
    }

    pub fn weight(&self, idx: usize) -> Option<i32> {
        self.weights[idx]
    }

    pub fn parity(&self, idx: usize) -> Parity {
        self.parities[idx]
    }

    pub fn scheme(&self) -> Option<&WeightScheme> {
        self.scheme.as_ref()
    }

    pub fn same_as(&self, other: &VariableRegistry) -> bool {
        std::ptr::eq(self, other) || (self.vars == other.vars && self.weights == other.weights)
    }

    /// Registry over the union of both variable sets.
    pub fn union(a: &Registry, b: &Registry) -> Result<Registry> {
        if a.same_as(b) {
            return Ok(a.clone());
        }
        let scheme = match (&a.scheme, &b.scheme) {
            (Some(x), Some(y)) if x != y => {
                return Err(Error::usage("cannot merge registries with different weight schemes"))
            }
            (Some(x), _) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        };
        if b.vars.iter().all(|v| a.index.contains_key(v)) && a.scheme == scheme {
            return Ok(a.clone());
        }
        Ok(VariableRegistry::new(
            a.vars.iter().chain(b.vars.iter()).cloned(),
            scheme.as_ref(),
        ))
    }

    /// Registry extended by extra variables.
    pub fn extended(reg: &Registry, extra: impl IntoIterator<Item = Var>) -> Registry {
        let extra: Vec<Var> = extra
            .into_iter()
            .filter(|v| !reg.index.contains_key(v))
            .collect();
        if extra.is_empty() {
            return reg.clone();
        }
        VariableRegistry::new(reg.vars.iter().cloned().chain(extra), reg.scheme.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_sorts_canonically() {
        let reg = VariableRegistry::new(
            [Var::U(2), Var::Lam(3), Var::Lam(6), Var::Z, Var::Sym(AbelianSymbol::p(&[6, 6]))],
            None,
        );
        let names: Vec<String> = reg.vars().iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["z", "p[6,6]", "lam6", "lam3", "u2"]);
    }

    #[test]
    fn symbol_indices_sorted() {
        let s = AbelianSymbol::new(SymbolKind::P, vec![6, 5, 6], Point::V).unwrap();
        assert_eq!(s.to_string(), "p[5,6,6]{v}");
        assert_eq!(s.parity(), Parity::Odd);
        assert!(AbelianSymbol::new(SymbolKind::Q, vec![1, 2, 3], Point::Base).is_err());
        assert!(AbelianSymbol::new(SymbolKind::P, vec![1], Point::Base).is_err());
    }

    #[test]
    fn weights_from_scheme() {
        let scheme = WeightScheme {
            n: 3,
            s: 7,
            u_weights: vec![11, 8, 5, 4, 2, 1],
            lam_weights: vec![-21, -18, -15, -12, -9, -6, -3],
        };
        let reg = VariableRegistry::new(
            [Var::U(2), Var::Lam(0), Var::Sym(AbelianSymbol::p(&[5, 6]))],
            Some(&scheme),
        );
        assert_eq!(reg.weight(reg.index_of(&Var::U(2)).unwrap()), Some(8));
        assert_eq!(reg.weight(reg.index_of(&Var::Lam(0)).unwrap()), Some(-21));
        let p56 = Var::Sym(AbelianSymbol::p(&[5, 6]));
        assert_eq!(reg.weight(reg.index_of(&p56).unwrap()), Some(-3));
    }
}
