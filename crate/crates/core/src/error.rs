use thiserror::Error;

use crate::rigor::Dyadic;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("interval division with zero in the denominator")]
    DivisionByZeroInterval,
    #[error("logarithm of an interval that is not strictly positive")]
    NonPositiveArgument,
    #[error("precision must be a positive dyadic, got {0}")]
    InvalidPrecision(String),
    #[error("temperature must be a positive rational, got {0}")]
    InvalidTemperature(String),
    #[error("operation requires T in the {expected} zone, got T = {got}")]
    ZoneError { expected: &'static str, got: String },
    #[error("spectrum admits no certified tail majorant")]
    TailUnbounded,
    #[error("no convergence certificate for this spectrum at T = {0}")]
    NoConvergenceCertificate(String),
    #[error("length budget of {budget} exhausted{}", certificate_suffix(.certificate))]
    BudgetExhausted {
        budget: u32,
        /// Upper bound on the full partition function, when the spectrum's
        /// majorant proves convergence.
        certificate: Option<Dyadic>,
    },
    #[error("working precision ceiling reached before the requested width")]
    PrecisionCeiling,
    #[error("machine has an empty domain")]
    EmptyDomain,
    #[error("set is not prefix-free: {0} is a prefix of {1}")]
    NotPrefixFree(String, String),
    #[error("the empty string cannot be a program")]
    EmptyProgram,
    #[error("invalid bit string {0:?}")]
    InvalidBitString(String),
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("unknown machine {0:?}")]
    UnknownMachine(String),
    #[error("hypothesis failed: {0}")]
    PredicateFailed(String),
    #[error("machine {0} has no outputs (spectrum-only presentation)")]
    NoOutputs(String),
    #[error("machine {0} has a recursively enumerable domain; enumerate it first")]
    NotDecidable(String),
    #[error("composite too large to materialize ({0} concatenations)")]
    TooLarge(u128),
    #[error("no program found within the search window")]
    NotFound,
    #[error("bit extraction could not separate the real from a dyadic boundary")]
    PrecisionExhausted,
    #[error("deficiency undefined: profile has a row without an upper bound")]
    Undefined,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("machine spec: {0}")]
    SpecParse(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

fn certificate_suffix(certificate: &Option<Dyadic>) -> String {
    match certificate {
        Some(c) => format!("; convergence certificate Z <= {}", c.to_decimal_up(12)),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
