use thiserror::Error;
use wml_core::WmlError;

pub type Result<T> = std::result::Result<T, BenchError>;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] WmlError),
    #[error("lemma suite failed: {0}")]
    LemmaFailure(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl BenchError {
    /// 0 success, 2 config error, 3 numerical-integrity error, 4 lemma-suite failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(WmlError::NumericalIntegrity(_) | WmlError::StepSize(_)) => 3,
            Self::Core(_) | Self::Config(_) => 2,
            Self::LemmaFailure(_) => 4,
            Self::Io(_) | Self::Csv(_) | Self::Json(_) => 1,
        }
    }
}
