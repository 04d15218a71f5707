use std::path::PathBuf;

use serde_json::json;

/// Failure of a run, mapped onto the process exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The configuration or an input file does not validate.
    #[error("{0}")]
    Config(String),

    /// The numerical core rejected the resolved parameters.
    #[error(transparent)]
    Core(#[from] sideinfo_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The run finished but an enforced check failed.
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Config(_) => "config",
            Self::Core(_) => "invalid-parameters",
            Self::Io { .. } => "io",
            Self::Verification(_) => "verification",
        }
    }

    /// 1 for failed checks, 2 for bad input, 3 for IO.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Verification(_) => 1,
            Self::Config(_) | Self::Core(_) => 2,
            Self::Io { .. } => 3,
        }
    }

    /// One-line JSON record written to stderr.
    pub fn report(&self) -> String {
        json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
        .to_string()
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
