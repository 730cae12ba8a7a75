//! Exact mod-p modular symbols and the group-cohomological weight-raising
//! mechanism from weight 2 to weight p+1.
//!
//! The crate is `no_std` (with `alloc`). Modules, bottom-up:
//!
//! - [`gfq`]: finite fields F_{p^d}, exact rationals, dense linear algebra.
//! - [`cong`]: P^1(Z/N), cosets of Gamma_H(N), SL_2(Z) lifts, cusps.
//! - [`coef`]: coefficient modules (trivial, Symm^k, F_q[P^1(F_q)], twisted tensors).
//! - [`msym`]: Manin-symbol spaces, Hecke/diamond/star operators, degeneracy maps,
//!   the Shapiro isomorphism and p-new subspaces.
//! - [`eig`]: eigensystems, occurrence checks and the verification drivers.
//! - [`rep`]: SL_2(F_q) class tables, Brauer signatures, MeatAxe.
//! - [`classical`]: Bernoulli numbers, Eisenstein series, Theta, Delta.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classical;
pub mod coef;
pub mod cong;
pub mod eig;
mod error;
pub mod gfq;
pub mod msym;
pub mod rep;

pub use error::{Error, Result};
