use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("focal outside sample range")]
    FocalOutsideRange,

    #[error("envelope too small: requested k = {requested}, envelope holds {available} curves")]
    EnvelopeTooSmall { requested: usize, available: usize },

    #[error("degenerate library: sample hull has zero width on the forecast segment")]
    DegenerateLibrary,

    #[error("MAPE undefined: truth is zero at forecast index {index}")]
    MapeUndefined { index: usize },

    #[error("gaussian process sampling failed: {0}")]
    Sampling(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
