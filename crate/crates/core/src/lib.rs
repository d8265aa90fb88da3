//! Exact arithmetic for the universal enveloping algebra of aff(1), the
//! representation space Ω with its shift-constrained topology, locally
//! polynomial sections of the noncommutative function sheaves over Ω,
//! triangular matrix algebras over domain tuples, and numeric growth
//! estimates.

pub mod domains;
pub mod error;
pub mod growth;
pub mod json;
pub mod matrep;
pub mod sheaf;
pub mod uea;

pub use error::{Error, Result};
