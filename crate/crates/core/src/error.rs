use thiserror::Error;

use crate::exact::Ring;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: Ring, right: Ring },

    #[error("element is not invertible in {ring}: {what}")]
    NotInvertible { ring: Ring, what: String },

    #[error("operation needs a field, got {0}")]
    NotAField(Ring),

    #[error("zero series")]
    ZeroSeries,

    #[error("insufficient series order: need {needed}, have {available}")]
    InsufficientOrder { needed: usize, available: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown sequence `{0}`")]
    UnknownSequence(String),

    #[error("inconsistent constant term: {0}")]
    InconsistentConstantTerm(String),

    #[error("coefficient {index} is not in {ring}")]
    NotInRing { index: usize, ring: Ring },

    #[error("polynomial division is not exact")]
    NonExactDivision,

    #[error("Hankel determinant H_{0} vanishes")]
    HankelVanishes(usize),

    #[error("declared coefficient bound violated at index {index}")]
    BoundViolated { index: usize },

    #[error("no certifiable partial quotients: {0}")]
    NothingCertified(String),

    #[error("evaluation point is degenerate: {0}")]
    DegenerateEvaluation(String),

    #[error("insufficient evaluation precision: {0}")]
    InsufficientPrecision(String),
}
