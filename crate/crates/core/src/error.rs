use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}: file contains no data rows")]
    EmptyFile(String),

    #[error("row {row}: expected {expected} columns, found {found}")]
    RaggedRow { row: usize, expected: usize, found: usize },

    #[error("row {row}, column {column}: cannot parse {value:?} as a finite number")]
    NonNumeric { row: usize, column: usize, value: String },

    #[error("csv: {0}")]
    Csv(String),

    #[error("wav: {0}")]
    Wav(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("config: {0}")]
    Config(String),

    #[error("model format: {0}")]
    ModelFormat(String),

    #[error("boosting round {round}: {source}")]
    Round {
        round: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("dataset {name}: {source}")]
    Dataset {
        name: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 1 config, 2 data, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Io { .. }
            | Error::EmptyFile(_)
            | Error::RaggedRow { .. }
            | Error::NonNumeric { .. }
            | Error::Csv(_)
            | Error::Wav(_)
            | Error::Dataset { .. } => 2,
            Error::Round { source, .. } => source.exit_code(),
            _ => 3,
        }
    }
}
