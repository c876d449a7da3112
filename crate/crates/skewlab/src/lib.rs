//! Numerical laboratory for skew-information quantities of finite-dimensional
//! quantum states.
//!
//! The crate computes the Wigner–Yanase, Wigner–Yanase–Dyson and generalized
//! two-parameter skew informations I, J and U = √(IJ), each through a
//! trace-formula path and an independent spectral-sum path, and verifies the
//! uncertainty relations among them by randomized trials:
//!
//! - [`matrix`]: dense complex matrices, commutators, traces of products.
//! - [`eigen`]: Hermitian eigendecomposition (cyclic Jacobi) and fractional
//!   matrix powers.
//! - [`states`]: validated density matrices and observables, centering,
//!   variance/covariance, seeded Hilbert–Schmidt and GUE samplers.
//! - [`skew`]: the I/J/U quantity family and per-input reports.
//! - [`checks`]: verdict-producing checkers for each inequality and scalar
//!   identity, including the known-false naive relation.
//! - [`trials`]: deterministic trial runner, counterexample hunter and
//!   (α, β) parameter sweep.
//! - [`io`]: the JSON/CSV wire formats shared with the CLI.

#![forbid(unsafe_code)]

pub mod checks;
pub mod eigen;
pub mod error;
pub mod io;
pub mod matrix;
pub mod skew;
pub mod states;
pub mod trials;

pub use error::{Error, Result};
