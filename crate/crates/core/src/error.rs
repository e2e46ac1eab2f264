use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("dimension {0} exceeds the supported maximum of 16")]
    DimensionTooLarge(usize),

    #[error("cone not strictly convex")]
    NotStrictlyConvex,

    #[error("invalid net configuration: {0}")]
    InvalidConfig(String),

    #[error("requires Mordell–Weil rank 7 (rank = 7 − d for d reducible quadrics); configuration has rank {0}")]
    RequiresRank7(usize),

    #[error("unknown class name `{name}`{}", suggestion.as_ref().map(|s| format!(" (did you mean `{s}`?)")).unwrap_or_default())]
    UnknownName {
        name: String,
        suggestion: Option<String>,
    },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("cannot mix divisor and curve symbols in `{0}`")]
    MixedSpaces(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("not in relative movable cone")]
    NotRelativelyMovable,

    #[error("not movable: class pairs negatively with the K-negative curve l{0}")]
    NegativeOnExceptionalLine(usize),

    #[error("inconsistent chamber: {0}")]
    InconsistentChamber(String),

    #[error("termination budget exhausted after {0} flops")]
    BudgetExhausted(usize),

    #[error("transport inconsistency: {0}")]
    TransportInconsistency(String),
}
