use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad classification used by the command line to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad configuration, arguments or parameter domains.
    Validation,
    /// Missing, corrupt or inconsistent data.
    Data,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("infeasible sample: {0}")]
    Infeasible(String),

    #[error("missing annotation for sentence {0}")]
    MissingAnnotation(String),

    #[error("annotation mismatch at sentence {id}: {message}")]
    Alignment { id: String, message: String },

    #[error("annotator protocol error (id {id:?}): {message}")]
    Protocol { id: Option<String>, message: String },

    #[error("annotator failed: {0}")]
    Annotator(String),

    #[error("missing store {path}: run `{stage}` first")]
    MissingStore { path: PathBuf, stage: &'static str },

    #[error("{0}")]
    Data(String),

    #[error("configuration: {0}")]
    Config(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidArgument(_) | Error::Config(_) => ErrorKind::Validation,
            _ => ErrorKind::Data,
        }
    }
}
