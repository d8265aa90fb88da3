use thiserror::Error;

use crate::uea::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },

    #[error("invalid open set: V_{next} is not contained in V_{level} ∩ (V_{level} + 1)", next = .level + 1)]
    InvalidOmega { level: usize },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("not a subset at level {level}")]
    NotSubset { level: usize },

    #[error(
        "incompatible sections: members {first} and {second} disagree at level {level}, component {component}"
    )]
    Incompatible {
        first: usize,
        second: usize,
        level: usize,
        component: usize,
    },

    #[error("point outside the domain of level {level}")]
    OutOfDomain { level: usize },

    #[error("value out of range: {0}")]
    Range(String),

    #[error("degree error: {0}")]
    Degree(String),

    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("domain mismatch at entry ({i},{j})")]
    DomainMismatch { i: usize, j: usize },

    #[error("tuple condition fails: W_{i}{k} ⊄ W_{i}{j} ∩ W_{j}{k}")]
    TupleCondition { i: usize, j: usize, k: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("compact set is empty")]
    EmptyCompact,

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("malformed document: {0}")]
    Format(String),
}

impl Error {
    /// Whether the error comes from reading a document rather than from the
    /// mathematics.
    pub fn is_format(&self) -> bool {
        matches!(self, Error::Format(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
