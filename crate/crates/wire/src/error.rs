use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = WireError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum WireError {
    /// Invalid or unreadable configuration; `path` is the offending key.
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Numerical(#[from] polariton_core::Error),

    #[error("point {point}, realization {realization} (seed {seed}): {source}")]
    Realization {
        point: usize,
        realization: usize,
        seed: u64,
        source: polariton_core::Error,
    },

    #[error("time grids differ: {0}")]
    GridMismatch(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: malformed data: {message}")]
    Format { path: PathBuf, message: String },

    #[error("layout version {found} is not supported (expected {expected})")]
    IncompatibleVersion { found: u32, expected: u32 },

    #[error("checksum mismatch for {file}: manifest {expected}, payload {found}")]
    CorruptPayload {
        file: String,
        expected: String,
        found: String,
    },
}

impl WireError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        WireError::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        WireError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 2 for configuration, 3 for numerics, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            WireError::Config { .. } => 2,
            WireError::Numerical(polariton_core::Error::InvalidParameter { .. }) => 2,
            WireError::Numerical(_) | WireError::Realization { .. } | WireError::GridMismatch(_) => 3,
            WireError::Io { .. }
            | WireError::Format { .. }
            | WireError::IncompatibleVersion { .. }
            | WireError::CorruptPayload { .. } => 4,
        }
    }
}
