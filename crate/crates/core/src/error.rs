use thiserror::Error;

/// Errors shared by all modules of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownWeight(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("argument outside domain: {0}")]
    OutOfDomain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("indeterminate difference: both integrals are infinite")]
    Indeterminate,

    #[error("no bracket: the Muckenhoupt constant is infinite")]
    NoBracket,

    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
