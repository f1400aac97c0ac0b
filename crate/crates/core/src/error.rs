use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,

    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },

    #[error("series too short: need at least {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("no attention observation satisfies the {kind} criterion")]
    EmptySelection { kind: &'static str },

    #[error("scale factor {tau} exceeds series length {len}")]
    EmptyOutput { tau: usize, len: usize },

    #[error("only {found} attention observations, fewer than scale factor {tau}")]
    InsufficientAttention { found: usize, tau: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Sample entropy has no value when either match count is zero.
    #[error("sample entropy undefined ({matches_m} m-matches, {matches_m1} (m+1)-matches)")]
    UndefinedEntropy { matches_m: u64, matches_m1: u64 },

    #[error("both samples have zero variance")]
    DegenerateVariance,

    #[error("invalid covariate: {0}")]
    InvalidCovariate(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{0}: no data lines")]
    EmptyFile(PathBuf),

    #[error("manifest: {0}")]
    Manifest(String),

    #[error("schema mismatch in {path}: {message}")]
    Schema { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}
