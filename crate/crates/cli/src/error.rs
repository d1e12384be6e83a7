use std::path::Path;

use fairaudit::audit::AuditError;
use fairaudit::pareto::ParetoError;
use fairaudit::{MetricError, ModelError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Incalculable(String),
    #[error("{0}")]
    BadArgs(String),
}

impl CliError {
    pub const VALIDATION: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const INCALCULABLE: u8 = 3;
    pub const BAD_ARGS: u8 = 4;

    pub fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => Self::VALIDATION,
            CliError::Parse(_) => Self::PARSE,
            CliError::Incalculable(_) => Self::INCALCULABLE,
            CliError::BadArgs(_) => Self::BAD_ARGS,
        }
    }

    pub fn model(path: &Path, e: ModelError) -> Self {
        CliError::Parse(format!("{}: {e}", path.display()))
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Parse(format!("{}: {e}", path.display()))
    }
}

impl From<AuditError> for CliError {
    fn from(e: AuditError) -> Self {
        match e {
            AuditError::EmptyDataset => CliError::Validation(e.to_string()),
            AuditError::AllIncalculable(_) | AuditError::Metric(_) => {
                CliError::Incalculable(e.to_string())
            }
            AuditError::InvalidGrid(_) | AuditError::ZeroBins => CliError::BadArgs(e.to_string()),
        }
    }
}

impl From<ParetoError> for CliError {
    fn from(e: ParetoError) -> Self {
        CliError::Incalculable(e.to_string())
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::InvalidAlpha(_) => CliError::BadArgs(format!("--alpha: {e}")),
            _ => CliError::Incalculable(e.to_string()),
        }
    }
}
