//! Finite-dimensional representations `σ_{r,q}`, the matrix functions
//! `π̃_q`, triangular matrix algebras over domain tuples, and solvability
//! checks.

mod element;
mod exact;
mod lie;
mod numeric;

pub use element::{
    corner_recover, pi_tilde, sigma_exact, sigma_rep, tri_mul, Generator, TriMatrixElement,
};
pub use exact::UpperTriangular;
pub use lie::{
    derived_series, derived_series_numeric, diagonal_basis, full_basis, rationalize, strict_basis,
    strict_nilpotency_check, DerivedSeries,
};
pub use numeric::NumericTriMatrix;
