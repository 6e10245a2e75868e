use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not orthogonal (defect {0:.3e})")]
    NotOrthogonal(f64),
    #[error("form is not Einstein: {0}")]
    NotEinstein(String),
    #[error("form is not harmonic (defect {0:.3e})")]
    NotHarmonic(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("size limit exceeded: {0}")]
    TooLarge(String),
    #[error("classification failed: {0}")]
    Classification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
