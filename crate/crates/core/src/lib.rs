//! Core library for `frobclt`: local splitting-type measures for S3/S4/S5
//! number-field families, symmetric-group character machinery, cubic field
//! enumeration by discriminant, Frobenius splitting scans, and the
//! central-limit / equidistribution statistics built on top of them.
//!
//! Everything that can be exact is exact: character values and class sizes
//! are integers, local densities are rationals, and floating point only
//! appears in empirical statistics, quadrature, and asymptotic constants.

pub mod clt;
pub mod cubic;
pub mod densities;
pub mod error;
pub mod fieldstore;
pub mod frobenius;
pub mod hecke;
pub mod partition;
pub mod polyfp;
pub mod primes;
pub mod rng;
pub mod satotate;
pub mod special;
pub mod splitting;
pub mod symchar;

pub use error::{Error, Result};
