//! Special functions and low-level numerical kernels.
//!
//! Everything in this module is a pure function of its arguments.

mod bessel;
mod gamma;
mod oscillatory;
mod quadrature;
mod tridiag;

pub use bessel::{bessel_j, bessel_j_derivative, bessel_j_signed, bessel_j_zero};
pub use gamma::{gamma, lower_incomplete_gamma, regularized_lower_gamma};
pub use oscillatory::integrate_oscillatory_bessel;
pub use quadrature::{gauss_kronrod_15, integrate_adaptive, QuadratureResult};
pub use tridiag::{sturm_count, tridiag_eigen, EigenPair, TridiagonalMatrix};
