use thiserror::Error;

#[derive(Debug, Error)]
pub enum CubeError {
    #[error("arity {0} out of range (1..={1})")]
    Arity(usize, usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("pinned constants were computed on corpus {pinned}, not {actual}")]
    PinMismatch { pinned: String, actual: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CubeError>;
