use thiserror::Error;

/// Errors produced by the spreading-measure computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precision escalation exhausted for {quantity}: relative disagreement {disagreement:e} after reaching {bits} bits")]
    PrecisionExhausted {
        quantity: &'static str,
        bits: u32,
        disagreement: f64,
    },

    #[error("eigenvalue solver did not converge ({0})")]
    EigenSolve(String),

    #[error("power integral diverges: {0}")]
    Divergent(String),

    #[error("integration did not reach tolerance: {0}")]
    Integration(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("hypergeometric series does not terminate: {0}")]
    NonTerminating(String),

    #[error("summation budget exceeded: {needed} terms requested, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("power functional W = {value:e} is not positive; the Renyi length is undefined")]
    NonPositiveFunctional { value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
