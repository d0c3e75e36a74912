//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("feature dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("training data contains a single class")]
    SingleClass,

    #[error("empty input")]
    EmptyInput,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("sample at stream index {index} has no label")]
    UnlabeledSample { index: usize },

    #[error("snapshot holds {got} samples, expected {expected}")]
    SnapshotSize { expected: usize, got: usize },

    #[error("selection requires at least {required} flagged outliers, found {got}")]
    TooFewOutliers { required: usize, got: usize },

    #[error("invalid drift schedule: {0}")]
    InvalidSchedule(String),

    #[error("{path}:{row}: {reason}")]
    Parse {
        path: String,
        row: usize,
        reason: String,
    },

    #[error("missing cell: dataset `{dataset}` has no value for method `{method}`")]
    MissingCell { dataset: String, method: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
