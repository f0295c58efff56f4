//! Exact arithmetic: rationals, variable registries, sparse polynomials,
//! resultants, exact linear algebra and high-precision root finding.

pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod rational;
pub mod registry;
pub mod resultant;
pub mod roots;

pub use monomial::Monomial;
pub use poly::Poly;
pub use rational::Rational;
pub use registry::{AbelianSymbol, Parity, Point, Registry, SymbolKind, Var, VariableRegistry, WeightScheme};
