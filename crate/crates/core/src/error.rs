use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("set size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("element {element} outside the ambient range [{lo}, {hi}]")]
    OutOfAmbient { element: u32, lo: u32, hi: u32 },

    #[error("duplicate set {0}")]
    DuplicateSet(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("{what} exceeds the desk-scale cap ({value} > {limit})")]
    CapExceeded {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
