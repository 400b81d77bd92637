//! Numerical toolkit for orthogonal polynomials on the unit circle and the
//! five-diagonal unitary (CMV) operators they generate.
//!
//! The crate covers both the classical objects, where the transmission
//! coefficients `rho_n` are positive, and their rotated counterparts, where
//! `rho_n = |rho_n| zeta_n` carries an arbitrary phase `zeta_n`.
//!
//! * [`coefficients`]: coefficient/phase schedules, measures, moments and
//!   coefficient extraction.
//! * [`opuc`]: polynomial sequences of the first and second kind, reverse
//!   maps, Christoffel–Darboux kernels and a Gram–Schmidt oracle.
//! * [`cmv`]: Theta-blocks, factorised and extended operators, conjugators,
//!   splits and walk evolution.
//! * [`gz`]: transfer matrices of the coupled eigenvalue problem, boundary
//!   seeds, neighbour tables and the equivalence check.
//! * [`weyl`]: Carathéodory functions, second-kind integrals and the
//!   square-summability classifier.
//! * [`io`]: JSON file formats and command-line value parsers.

pub mod cmv;
pub mod coefficients;
mod error;
pub mod gz;
pub mod io;
pub mod opuc;
pub mod weyl;

pub use error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Tolerance for exact algebraic identities.
pub const TOL_ALGEBRAIC: f64 = 1e-13;
/// Tolerance for identities that go through quadrature.
pub const TOL_QUADRATURE: f64 = 1e-10;
/// Tolerance for comparisons against independent oracles.
pub const TOL_ORACLE: f64 = 1e-9;
