use std::path::PathBuf;

use thiserror::Error;

use crate::audio::AudioError;
use crate::corpus::CorpusError;
use crate::embed::EmbedError;
use crate::metrics::MetricsError;
use crate::service::ServiceError;

/// Top-level error used by the pipeline and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Audio(#[from] AudioError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Service(#[from] ServiceError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("stage `{stage}` failed on {file}: {source}")]
    Stage {
        stage: &'static str,
        file: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True when the failure stems from bad user input rather than a bug or
    /// an environment fault. Drives the CLI exit code (1 vs 2).
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Io { .. } | Error::Input(_) => true,
            Error::Stage { source, .. } => source.is_input_error(),
            Error::Service(ServiceError::Io(_)) => false,
            Error::Corpus(_) | Error::Audio(_) | Error::Embed(_) | Error::Metrics(_) => true,
            Error::Service(_) => true,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
