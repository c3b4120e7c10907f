use thiserror::Error;

use crate::model::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("solution rejected by certifier `{certifier}`: {detail}")]
    Certification { certifier: String, detail: String },

    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("enumeration overflow: reached {reached} solutions, budget is {budget}")]
    EnumerationOverflow { reached: u64, budget: u64 },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no improving step: {0}")]
    NoStep(String),

    #[error("partition not in R_v: neighbor weight on the far side {far} is not below the near side {near}")]
    NotImproving { far: Box<Rational>, near: Box<Rational> },

    #[error("input contract violated: {0}")]
    InputContract(String),

    #[error("rank error: basis vectors are linearly dependent (vector {0})")]
    Rank(usize),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
