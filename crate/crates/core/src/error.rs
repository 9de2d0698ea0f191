use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("truncation policies differ: {0:?} vs {1:?}")]
    PolicyMismatch(crate::ncpoly::Truncation, crate::ncpoly::Truncation),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("mass schedule domain violation: {0}")]
    MassDomain(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serde(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
