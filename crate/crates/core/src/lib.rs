//! Verification and estimation toolkit for one-dimensional discrete Hardy
//! and Rellich inequalities.
//!
//! - [`combinatorics`]: exact constants and binomial identities.
//! - [`trigpoly`]: exact algebra of trigonometric polynomials on the
//!   half-integer frequency lattice and the sine-weighted integral bounds.
//! - [`lattice`]: finitely supported sequences, difference operators,
//!   quadratic forms and exact Fourier bridges.
//! - [`inequalities`]: margins of every inequality on admissible sequences,
//!   seeded random suites and the sharpness family.
//! - [`spectral`]: truncated generalized eigenproblems and their minimal
//!   eigenvalues by inertia bisection.

pub mod combinatorics;
pub mod error;
pub mod inequalities;
pub mod lattice;
pub mod rational;
pub mod spectral;
pub mod trigpoly;

pub use error::{Error, Result};
