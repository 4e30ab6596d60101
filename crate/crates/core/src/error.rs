use thiserror::Error;

/// Syntax error in a textual exponent-set or family description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> Self {
        Self {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{value} is out of range: must lie in [{min}, {max}]")]
    OutOfRange { value: u64, min: u64, max: u64 },

    #[error("sieve limit {requested} exceeds the configured cap {cap}")]
    SieveCap { requested: u64, cap: u64 },

    #[error("{0} is not squarefree")]
    NotSquarefree(u64),

    #[error("exponent set {0} does not contain 1; its density is given by the zero branch")]
    MissingOne(String),

    #[error("exponent set {0} contains 1; use a product route instead of the zero branch")]
    ContainsOne(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("reciprocal tail bound for powerful numbers failed validation: {0}")]
    TailValidation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_range(value: u64, min: u64, max: u64) -> Result<()> {
    if value < min || value > max {
        Err(Error::OutOfRange { value, min, max })
    } else {
        Ok(())
    }
}
