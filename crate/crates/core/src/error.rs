use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A malformed record in an input dataset.
    #[error("{file}: record {record}: {message}")]
    Ingest {
        file: String,
        record: usize,
        message: String,
    },

    /// A structurally invalid dataset (wrong counts, unpaired lines, ...).
    #[error("invalid dataset: {0}")]
    Dataset(String),

    #[error("rulepack line {line}, column {column}: {message}")]
    RuleSyntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("rulepack: {0}")]
    Rulepack(String),

    #[error("training: {0}")]
    Training(String),

    #[error("configuration: {0}")]
    Config(String),

    /// A caller misused an API, e.g. scoring an untagged sentence with a tag model.
    #[error("usage: {0}")]
    Usage(String),

    /// A file did not match the expected interchange schema.
    #[error("schema mismatch in {file}: {message}")]
    Schema { file: String, message: String },

    /// A scorer cannot judge one pair; the pair is left out for that scorer.
    #[error("{scorer}: {reason}")]
    Excluded { scorer: String, reason: String },

    #[error("statistics: {0}")]
    Stats(String),

    #[error("{0}")]
    Empty(&'static str),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn schema(file: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            file: file.into(),
            message: message.into(),
        }
    }
}
