use dvrgeom_core::error::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Input { line: usize, message: String },
    #[error("declared data does not verify: {0}")]
    Mismatch(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for budget, precision and other undecidable outcomes; 3 for bad input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e {
                CoreError::Parse { .. }
                | CoreError::InvalidInput(_)
                | CoreError::ArityMismatch { .. }
                | CoreError::RingMismatch
                | CoreError::NotDvr
                | CoreError::PointNotOnFibre
                | CoreError::NotCompleteIntersection { .. } => 3,
                _ => 2,
            },
            _ => 3,
        }
    }
}

pub fn input(line: usize, message: impl Into<String>) -> CliError {
    CliError::Input { line, message: message.into() }
}
