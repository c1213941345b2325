use std::io;

use nlcov_core::eval::EvalError;
use nlcov_core::{ModelError, OracleError, SentenceError, SystemKind};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{source_name}: {source}")]
    Io {
        source_name: String,
        #[source]
        source: io::Error,
    },
    #[error("{source_name}:{line}: {message}")]
    Malformed {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("{source_name}:{line}: sentence {index}: {error}")]
    InvalidSentence {
        source_name: String,
        index: usize,
        line: usize,
        error: SentenceError,
    },
    #[error("{expected} sentences but {found} parses")]
    Arity { expected: usize, found: usize },
    #[error("sentence {index}: predicted arcs do not form a tree")]
    NotATree { index: usize },
    #[error("sentence {index}: label `{label}` cannot be written")]
    BadLabel { index: usize, label: String },
    #[error("{source_name}:{line}: {message}")]
    ModelFile {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("model was trained for {model}, not {requested}")]
    SystemMismatch {
        model: SystemKind,
        requested: SystemKind,
    },
    #[error("sentence {index}: {error}")]
    Oracle { index: usize, error: OracleError },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn io(source_name: &str, source: io::Error) -> Self {
        Error::Io {
            source_name: source_name.to_owned(),
            source,
        }
    }

    /// 1 for internal errors, 2 for bad usage or bad data.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) => 1,
            Error::Model(e) if !is_data_error(e) => 1,
            _ => 2,
        }
    }
}

fn is_data_error(e: &ModelError) -> bool {
    !matches!(e, ModelError::Feature(_) | ModelError::System(_))
}
