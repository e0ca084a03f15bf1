use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("no group inverse: Drazin index is {index}")]
    NoGroupInverse { index: usize },

    #[error("side conditions violated: {0}")]
    ConditionsViolated(String),

    #[error("1 - p*alpha*(1 + bd) is singular")]
    InternalInvertibilityFailure,

    #[error("identity falsified: {0}")]
    Falsified(String),

    #[error("generation exhausted for family {family} after {attempts} attempts")]
    GenerationExhausted { family: String, attempts: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
