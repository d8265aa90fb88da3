//! Exact scalars, polynomials and the universal enveloping algebra U(aff₁)
//! in PBW normal form `Σ_q f_q(e₁) e₂^q`.

pub mod oracle;
mod pbw;
mod poly;
mod scalar;

pub use oracle::mul_by_rewriting;
pub use pbw::{AnyPbw, PbwElement};
pub use poly::Polynomial;
pub use scalar::{
    int, parse_rational, rat, rational_to_f64, rational_to_string, Field, GaussianRational,
    Rational, Scalar,
};

pub type RealPoly = Polynomial<Rational>;
pub type ComplexPoly = Polynomial<GaussianRational>;
