use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("non-numeric value {value:?} at row {row}, column {col}")]
    ParseError { row: usize, col: usize, value: String },

    #[error("label {value:?} at row {row} is not 0 or 1")]
    LabelError { row: usize, value: String },

    #[error("label column {0:?} not found")]
    MissingLabelColumn(String),

    #[error("dataset has no rows")]
    EmptyDataset,

    #[error("malformed dataset: {0}")]
    InvalidDataset(String),

    #[error("test fraction {0} must lie strictly between 0 and 1 and leave both sides non-empty")]
    InvalidFraction(f64),

    #[error("cannot stratify: class {class} has {count} instance(s), need at least 2")]
    StratifyError { class: u8, count: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("InvalidThreshold: {0} is outside [0, 1]")]
    InvalidThreshold(f64),

    #[error("need at least 2 features to vote, got {0}")]
    TooFewFeatures(usize),

    #[error("invalid sweep range: min {min}, max {max}, step {step}")]
    InvalidRange { min: f64, max: f64, step: f64 },

    #[error("InvalidK: k={k} must be between 1 and {n}")]
    InvalidK { k: usize, n: usize },

    #[error("number of bins must be at least 2, got {0}")]
    InvalidBins(usize),

    #[error("training data contains a single class")]
    SingleClass,

    #[error("feature subset is empty")]
    EmptySubset,

    #[error("feature index {index} out of range for {n_cols} columns")]
    FeatureOutOfRange { index: usize, n_cols: usize },

    #[error("feature subset does not match the subset the model was trained on")]
    SubsetMismatch,

    #[error("invalid hyperparameter {name}: {reason}")]
    InvalidHyperparameter { name: String, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad user input (arguments or config values)
    /// rather than by data or the environment.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidFraction(_)
                | Error::InvalidThreshold(_)
                | Error::InvalidRange { .. }
                | Error::InvalidK { .. }
                | Error::InvalidBins(_)
                | Error::InvalidHyperparameter { .. }
                | Error::InvalidConfig(_)
                | Error::MissingLabelColumn(_)
                | Error::EmptySubset
                | Error::FeatureOutOfRange { .. }
        )
    }
}
