use thiserror::Error;

/// Errors raised by the exact arithmetic layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("resource guard exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
