use thiserror::Error;

/// Failure modes shared by every module of the crate.
///
/// Numerical outcomes that are legitimate answers (an unobservable
/// truncation, an empty frequency band, an unreachable resolvent level)
/// are *not* errors; they are reported through status enums on the
/// respective result types.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("shape mismatch: expected length {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("point {point:?} lies outside the model domain")]
    Range { point: Vec<f64> },

    #[error("empty set: {0}")]
    EmptySet(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn empty(msg: impl Into<String>) -> Self {
        Error::EmptySet(msg.into())
    }
}
