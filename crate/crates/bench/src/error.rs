use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    /// Bad names, flags or config values.
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Solver(#[from] nsopt::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config: {0}")]
    Config(#[from] toml::de::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl BenchError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    pub fn is_usage(&self) -> bool {
        match self {
            Self::Usage(_) | Self::Config(_) => true,
            Self::Solver(e) => matches!(
                e,
                nsopt::Error::InvalidParameter(_) | nsopt::Error::DimensionMismatch { .. }
            ),
            _ => false,
        }
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
