//! Exact computer algebra for Abelian functions on cyclic trigonal curves
//! `y^3 = x^s + λ_{s-1} x^{s-1} + … + λ_0`.

pub mod algebra;
pub mod curve;
pub mod error;
pub mod eval;
pub mod kleinian;
pub mod schur;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
