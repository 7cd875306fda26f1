use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("Fock truncation too small: tail mass {tail:.3e} above threshold, need dimension >= {required_dim}")]
    Truncation { tail: f64, required_dim: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("mean phase undefined: |Psi_1| is zero")]
    UndefinedPhase,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("kernel cache error: {0}")]
    Cache(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}

pub(crate) fn numerical(msg: impl Into<String>) -> Error {
    Error::Numerical(msg.into())
}
