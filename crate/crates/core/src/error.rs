use thiserror::Error;

/// Errors raised by evaluators, the harness and configuration checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("PoleError: gamma pole at {0}")]
    Pole(String),
    #[error("DivisionByZero: {0}")]
    DivisionByZero(String),
    #[error("IndeterminateError: {0}")]
    Indeterminate(String),
    #[error("LowerPoleError: denominator parameter {param} vanishes at index {index}")]
    LowerPole { param: String, index: u64 },
    #[error("BudgetExceeded: {needed} terms needed, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("DivergentError: {0}")]
    Divergent(String),
    #[error("NotConvergent: algebraic exponent {exponent} <= 1")]
    NotConvergent { exponent: f64 },
    #[error("AccelerationFailed: error estimate {estimate:e} stagnated above tolerance {tolerance:e}")]
    AccelerationFailed { estimate: f64, tolerance: f64 },
    #[error("NumericalBreakdown: {0}")]
    NumericalBreakdown(String),
    #[error("DomainError: {0}")]
    Domain(String),
    #[error("SamplingExhausted: no admissible parameters for {id} after {attempts} attempts")]
    SamplingExhausted { id: String, attempts: u32 },
    #[error("ConstraintViolated: {id}: {constraint}")]
    ConstraintViolated { id: String, constraint: String },
    #[error("UnknownIdentity: {0}")]
    UnknownIdentity(String),
    #[error("InvalidContext: {0}")]
    InvalidContext(String),
    #[error("ParseError: {0}")]
    Parse(String),
}

impl Error {
    /// Stable name of the error kind, as printed by the CLI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole(_) => "PoleError",
            Error::DivisionByZero(_) => "DivisionByZero",
            Error::Indeterminate(_) => "IndeterminateError",
            Error::LowerPole { .. } => "LowerPoleError",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::Divergent(_) => "DivergentError",
            Error::NotConvergent { .. } => "NotConvergent",
            Error::AccelerationFailed { .. } => "AccelerationFailed",
            Error::NumericalBreakdown(_) => "NumericalBreakdown",
            Error::Domain(_) => "DomainError",
            Error::SamplingExhausted { .. } => "SamplingExhausted",
            Error::ConstraintViolated { .. } => "ConstraintViolated",
            Error::UnknownIdentity(_) => "UnknownIdentity",
            Error::InvalidContext(_) => "InvalidContext",
            Error::Parse(_) => "ParseError",
        }
    }

    /// Configuration errors are caught before any evaluation happens.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::UnknownIdentity(_) | Error::InvalidContext(_) | Error::Parse(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
