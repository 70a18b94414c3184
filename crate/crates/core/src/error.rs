use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("descriptor mismatch: {left} vs {right}")]
    DescriptorMismatch { left: String, right: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("relation violated: residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    RelationViolation { residual: f64, tol: f64 },

    #[error("kernel recognition failed: {0}")]
    KernelRecognition(String),

    #[error("open case: {0}")]
    OpenCase(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
