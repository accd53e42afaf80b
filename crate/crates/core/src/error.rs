use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("decode error: {0}")]
    Decode(String),
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("empty dataset: {0}")]
    EmptyDataset(PathBuf),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("training error: {0}")]
    Training(String),
    #[error("validation error: {0}")]
    Validation(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
