use std::path::PathBuf;

use ait_thermo::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Certificate(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Certificate(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPrecision(_)
            | Error::InvalidTemperature(_)
            | Error::ZoneError { .. }
            | Error::EmptyDomain
            | Error::NotPrefixFree(_, _)
            | Error::EmptyProgram
            | Error::InvalidBitString(_)
            | Error::InvalidSpectrum(_)
            | Error::UnknownMachine(_)
            | Error::PredicateFailed(_)
            | Error::NoOutputs(_)
            | Error::NotDecidable(_)
            | Error::TooLarge(_)
            | Error::InvalidArgument(_)
            | Error::SpecParse(_)
            | Error::Checkpoint(_) => CliError::Usage(e.to_string()),
            Error::DivisionByZeroInterval
            | Error::NonPositiveArgument
            | Error::TailUnbounded
            | Error::NoConvergenceCertificate(_)
            | Error::BudgetExhausted { .. }
            | Error::PrecisionCeiling
            | Error::NotFound
            | Error::PrecisionExhausted
            | Error::Undefined => CliError::Certificate(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
