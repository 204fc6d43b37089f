//! Exact and numerical computation for the arithmetic side of O'Nan moonshine:
//! eta quotients and principal moduli as truncated q-series, binary quadratic
//! forms and traces of singular moduli, the McKay-Thompson series of class 3A,
//! and elliptic-curve data for the twists of the conductor-15 curve.

pub mod arith;
pub mod elliptic;
pub mod error;
pub mod lfunc;
pub mod modfun;
pub mod onan;
pub mod qseries;
pub mod quadforms;
pub mod scalar;
pub mod singmod;

pub use error::{Error, Result};

use num_rational::BigRational;

/// Exact q-series with arbitrary-precision rational coefficients.
pub type QSeries = qseries::FracSeries<BigRational>;

/// q-series with machine-integer coefficients (fast path for eta products).
pub type IntSeries = qseries::FracSeries<i64>;

/// Double-double scalar used for CM-value evaluation.
pub type DD = twofloat::TwoFloat;
