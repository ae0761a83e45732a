use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("non-finite loss on sample {origin}")]
    NonFiniteLoss { origin: String },

    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("{path}: line {line}: {message}")]
    Csv { path: PathBuf, line: u64, message: String },

    #[error("{path}: file not found")]
    MissingFile { path: PathBuf },

    #[error("unknown phase `{0}`")]
    UnknownPhase(String),

    #[error("curve mismatch: {0}")]
    CurveMismatch(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid { key: key.into(), reason: reason.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::MissingFile { path }
        } else {
            Error::Io { path, source }
        }
    }

    /// Stable snake-case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Shape(_) => "shape",
            Error::NonFinite(_) => "non_finite",
            Error::NonFiniteLoss { .. } => "non_finite_loss",
            Error::Invalid { .. } => "invalid",
            Error::Empty(_) => "empty",
            Error::Csv { .. } => "csv",
            Error::MissingFile { .. } => "missing_file",
            Error::UnknownPhase(_) => "unknown_phase",
            Error::CurveMismatch(_) => "curve_mismatch",
            Error::Io { .. } => "io",
            Error::Json { .. } => "json",
        }
    }

    /// Usage and validation failures exit with 2, everything else with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid { .. }
            | Error::MissingFile { .. }
            | Error::UnknownPhase(_)
            | Error::Json { .. } => 2,
            _ => 1,
        }
    }
}
