use std::path::Path;

use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] h2ror::Error),
    #[error("{file}:{line}: {message}")]
    Parse { file: String, line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("report: {0}")]
    Report(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    /// Stable identifier printed on failure.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Parse { .. } => "parse-error",
            CliError::Io { .. } => "io-error",
            CliError::Usage(_) => "usage-error",
            CliError::Config(_) => "config-error",
            CliError::Report(_) => "report-error",
        }
    }

    /// Process exit status.
    pub fn exit_status(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Core(_) => 3,
            CliError::Parse { .. } => 4,
            CliError::Io { .. } | CliError::Report(_) => 5,
        }
    }
}
