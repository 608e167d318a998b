use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Physics(#[from] cavcool::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for anything wrong with the input, 3 when valid input describes a
    /// system outside the model's regime (unstable, unmappable, ...).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Physics(cavcool::Error::InvalidParams(_)) => 2,
            CliError::Physics(_) => 3,
            CliError::Io { .. } => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}
