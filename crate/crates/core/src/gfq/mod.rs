//! Exact arithmetic: prime and extension finite fields, the rationals, and
//! dense linear algebra over either.

mod eigen;
mod field;
mod fq;
pub mod int;
mod matrix;
pub mod poly;
mod rational;
mod subspace;

pub use eigen::{charpoly_and_eigenspaces, EigenFactor, Eigenspace, Embedding};
pub use field::Field;
pub use fq::{FiniteField, Gf};
pub use matrix::{Matrix, Rref};
pub use rational::{reduce_mod_p, Rationals};
pub use subspace::Subspace;

use crate::error::Result;

/// The deterministic field F_{p^d}.
pub fn build_field(p: u64, d: u32) -> Result<FiniteField> {
    FiniteField::new(p, d)
}
