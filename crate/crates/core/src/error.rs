use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid denominator: angle denominator must be at least 1")]
    InvalidDenominator,

    #[error("angle out of range: {numerator}/{denominator} exceeds half a turn")]
    AngleOutOfRange { numerator: u64, denominator: u64 },

    #[error("index {index} out of range for a word of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("family {0} needs a beta parameter")]
    MissingBeta(String),

    #[error("map has no unique fixed point (|a| = {0} is not below 1)")]
    NoUniqueFixedPoint(f64),

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("no representation of {value} found with at most {max_len} digits")]
    NotFound { value: String, max_len: usize },

    #[error("degenerate viewport: {0}")]
    DegenerateViewport(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
