use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("channel vector has zero norm")]
    ZeroChannel,

    #[error("non-finite entry in vector")]
    NonFinite,

    #[error("{what} out of domain: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("duplicate user index {0} in feedback reports")]
    DuplicateUser(usize),

    #[error("codeword index {index} outside codebook of size {size}")]
    BadCodeword { index: usize, size: usize },

    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("unknown preset `{name}` (available: {available})")]
    UnknownPreset { name: String, available: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
