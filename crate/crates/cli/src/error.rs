use std::path::{Path, PathBuf};

use refuel_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {message}", path.display())]
    ConfigIo { path: PathBuf, message: String },

    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid config: {0}")]
    Validation(String),

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    /// Output was produced, but some requested crossover does not exist.
    #[error("no crossover for {0}")]
    NoCrossover(String),

    #[error("cannot write {}: {message}", path.display())]
    Output { path: PathBuf, message: String },
}

impl CliError {
    pub(crate) fn with_path(self, p: &Path) -> Self {
        match self {
            CliError::Parse {
                line,
                column,
                message,
                ..
            } => CliError::Parse {
                path: p.to_path_buf(),
                line,
                column,
                message,
            },
            other => other,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigIo { .. }
            | CliError::Parse { .. }
            | CliError::Validation(_)
            | CliError::Usage(_) => 2,
            CliError::Core(e) => match e.root() {
                CoreError::PerigeeBelowSurface { .. } => 3,
                CoreError::NoCrossover => 4,
                CoreError::InvalidInput(_) | CoreError::InfeasibleBounds(_) => 2,
                _ => 1,
            },
            CliError::NoCrossover(_) => 4,
            CliError::Output { .. } => 1,
        }
    }
}
