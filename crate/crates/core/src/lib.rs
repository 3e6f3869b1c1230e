//! Rank-r bordered GUE matrices: sampling, exact eigenvalue densities, the
//! finite-N correlation kernel of the rank-one bordering, and soft-edge limits.
//!
//! Gaussian convention throughout: `N[m, s]` has mean `m` and standard
//! deviation `s`. The GUE has weight `exp(-Tr X²)`, so its diagonal is
//! `N[0, 1/√2]` and off-diagonal real and imaginary parts are `N[0, 1/2]`.
//! A border with `σ = 1`, `μ = 0` therefore reproduces a larger GUE matrix.

pub mod acceptance;
pub mod coefficients;
pub mod edge;
pub mod ensemble;
pub mod error;
pub mod experiments;
pub mod kernel;
pub mod linalg;
pub mod quad;
pub mod scaled;
pub mod specfun;
pub mod stats;

pub use error::{Error, Result};
pub use linalg::{HermitianMatrix, Spectrum};
