use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("duplicate record id `{0}`")]
    DuplicateId(String),

    #[error("class `{class}` has {count} record(s); {required} required")]
    InsufficientClass {
        class: &'static str,
        count: usize,
        required: usize,
    },

    #[error("annotation rounds cover different videos (only in first: {only_first:?}; only in second: {only_second:?})")]
    KeySetMismatch {
        only_first: Vec<String>,
        only_second: Vec<String>,
    },

    #[error("invalid pattern `{pattern}`: {message}")]
    Pattern { pattern: String, message: String },

    #[error("title scorer has not been trained")]
    UntrainedScorer,

    #[error("loss is not finite")]
    NonFiniteLoss,

    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub(crate) fn check_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
