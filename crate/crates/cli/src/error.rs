use std::io;

use thiserror::Error;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INVALID_INPUT: i32 = 2;
    pub const TOLERANCE: i32 = 3;
    pub const INTEGRATOR: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] dicke_therm::Error),
    #[error("{msg}")]
    Usage { name: &'static str, msg: String },
    #[error("{0}")]
    Tolerance(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn usage(name: &'static str, msg: impl Into<String>) -> Self {
        CliError::Usage { name, msg: msg.into() }
    }

    /// Machine-readable name printed first on stderr.
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.name(),
            CliError::Usage { name, .. } => name,
            CliError::Tolerance(_) => "ToleranceExceeded",
            CliError::Io(_) => "IoError",
            CliError::Csv(_) => "CsvError",
        }
    }

    pub fn exit_code(&self) -> i32 {
        use dicke_therm::Error as E;
        match self {
            CliError::Core(E::StepTooLarge { .. } | E::NonFiniteState { .. }) => exit::INTEGRATOR,
            CliError::Tolerance(_) => exit::TOLERANCE,
            CliError::Io(_) | CliError::Csv(_) => 1,
            _ => exit::INVALID_INPUT,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
