use std::path::Path;

use thiserror::Error;

/// Harness failures, grouped by process exit code.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Numerical(#[from] orthogof::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            context: path.display().to_string(),
            source,
        }
    }

    /// 1 usage, 2 numerical failure, 3 IO.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) | HarnessError::Config(_) => 1,
            HarnessError::Numerical(e) if e.is_io() => 3,
            HarnessError::Numerical(_) => 2,
            HarnessError::Io { .. } => 3,
        }
    }
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::Io {
            context: "csv".into(),
            source: e.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
