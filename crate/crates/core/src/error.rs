use thiserror::Error;

/// Errors raised by the library. CLI exit codes are derived from these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("enumeration of {requested} elements exceeds the cap of {cap}")]
    CapExceeded { requested: String, cap: usize },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("not a permutation of {len} positions: {perm:?}")]
    BadPermutation { perm: Vec<usize>, len: usize },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("malformed linear program: {0}")]
    MalformedProgram(String),
    #[error("the assessment incurs sure loss")]
    SureLoss,
    #[error("credal set has no extreme points")]
    EmptySet,
    #[error("invalid mass function: {0}")]
    InvalidMass(String),
    #[error("invalid simplex point: {0}")]
    InvalidSimplexPoint(String),
    #[error("target degree {target} is below the polynomial degree {degree}")]
    DegreeTooLow { degree: u32, target: u32 },
    #[error("no level >= {degree} is available (highest level is {available})")]
    DegreeUnavailable { degree: u32, available: u32 },
    #[error("level {0} is not available")]
    LevelUnavailable(u32),
    #[error("the family is not time consistent between levels {level} and {next}")]
    NotTimeConsistent { level: u32, next: u32 },
    #[error("no exchangeable coherent lower prevision dominates the assessment")]
    NoExchangeableDominator,
    #[error("the base model cannot be extended to an exchangeable model on {0} variables")]
    NotExtendable(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
