//! Isospectral generalizations of the Morse and Pöschl-Teller potentials.
//!
//! The crate builds the shifted base potentials, their supersymmetric
//! partners and the one-parameter (Γ) isospectral deformations obtained
//! from the general Riccati solution. It solves the resulting 1-D
//! Schrödinger eigenproblems by finite differences and checks the
//! Hankel-transform correspondence between the two families.
//!
//! Everything here is `no_std` with `alloc`; file formats and the command
//! line live in the `morsept` crate.
//!
//! Module map:
//!
//! - [`numerics`]: Bessel functions, incomplete gamma, quadrature and the
//!   symmetric tridiagonal eigensolver.
//! - [`potentials`]: parameter records, base/partner/generalized potentials.
//! - [`coordinates`]: the changes of variable linking ρ, r, θ, t and Φ.
//! - [`eigensolver`]: grids, discretization and bound-state extraction.
//! - [`transforms`]: angular reduction and the Fourier-Bessel machinery.
//! - [`analysis`]: spectral comparisons and the energy-shift relation.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

extern crate alloc;

pub mod analysis;
pub mod coordinates;
pub mod eigensolver;
mod error;
pub(crate) mod math;
pub mod numerics;
pub mod potentials;
pub mod transforms;

pub use error::{Error, Result};
