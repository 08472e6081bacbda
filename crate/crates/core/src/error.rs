use thiserror::Error;

/// Errors raised by the geometry kernel, the verifiers and the search harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the cap of {cap}; pass force to override")]
    DimensionCap { dim: usize, cap: usize },

    #[error("body is not anti-blocking")]
    NotAntiBlocking,

    #[error("origin is not an interior point of the symmetrized body")]
    OriginNotInterior,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("interpolation system is singular")]
    SingularSystem,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
