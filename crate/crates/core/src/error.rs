//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid model/experiment parameters supplied by the caller.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// An operation was called outside its contract (e.g. a bandwidth
    /// allocation that does not sum to the system bandwidth).
    #[error("contract violation: {0}")]
    Contract(String),
    /// A gradient step produced non-finite parameters or loss.
    #[error("training diverged: {0}")]
    TrainingDiverged(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
