use thiserror::Error;

/// Errors raised by the numerical library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WmlError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("size limit exceeded: {entries} matrix entries requested, limit is {limit}")]
    Size { entries: u128, limit: usize },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("invalid Lindblad specification: {0}")]
    Spec(String),
    #[error("numerical integrity violated: {0}")]
    NumericalIntegrity(String),
    #[error("series step too large: {0}")]
    StepSize(String),
    #[error("unsupported mode: {0}")]
    Mode(String),
}

pub type Result<T, E = WmlError> = std::result::Result<T, E>;
