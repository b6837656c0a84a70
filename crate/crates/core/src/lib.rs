//! Exact symbolic calculus on Courant algebroids over polynomial charts.
//!
//! All values are tensors with multivariate-polynomial coefficients over the
//! Gaussian rationals, so every identity the library checks is decided
//! exactly: a tensor vanishes iff all of its components are the zero
//! polynomial. The crate covers the standard (optionally twisted) Courant
//! algebroid `TM (+) T*M` over a single chart and constant-structure
//! algebroids over a point, endomorphism calculus with Nijenhuis
//! concomitants, hypercomplex triples and the hypercomplex connection,
//! eigenbundle (Lie algebroid) calculus, and holomorphic symplectic
//! structures.

pub mod chartcalc;
pub mod connection;
pub mod courant;
pub mod eigencalc;
pub mod endo;
pub mod fixtures;
pub mod holosym;
pub mod matrix;
pub mod report;
pub mod scalars;
