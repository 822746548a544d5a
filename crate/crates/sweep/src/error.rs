use std::path::PathBuf;

use thiserror::Error;

/// Errors of the sweep engine. Failures of individual grid points are not
/// errors: they are recorded in their row.
#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep specification: {0}")]
    Spec(String),

    #[error(transparent)]
    Core(#[from] harvest_core::Error),

    #[error("cannot parse configuration: {0}")]
    Config(#[from] toml::de::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed results file: {0}")]
    Format(String),

    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

impl SweepError {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            SweepError::Spec(_) => "spec",
            SweepError::Core(_) => "numerics",
            SweepError::Config(_) => "config",
            SweepError::Io { .. } => "io",
            SweepError::Csv(_) | SweepError::Format(_) => "csv",
            SweepError::Pool(_) => "pool",
        }
    }
}
