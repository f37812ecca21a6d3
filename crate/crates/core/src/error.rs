use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty weight vector")]
    EmptyInput,
    #[error("weights must be positive")]
    ZeroWeight,
    #[error("integer overflow")]
    Overflow,
    #[error("need at least {need} weights, got {got}")]
    ArityTooSmall { need: usize, got: usize },
    #[error("at most {max} weights supported, got {got}")]
    ArityTooLarge { max: usize, got: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} repeated")]
    Duplicate(u64),
    #[error("no tuple found below p1 ceiling {0}")]
    CeilingExceeded(u64),
    #[error("no prime found within {0} terms of the progression")]
    NoSolutionInBudget(u64),
    #[error("box volume {volume} exceeds cap {cap}")]
    BoxTooLarge { volume: u128, cap: u128 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid threshold list: {0}")]
    InvalidThresholds(String),
}

pub type Result<T> = std::result::Result<T, Error>;
