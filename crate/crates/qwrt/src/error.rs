use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(String, u64),
    #[error("denominator {0} is divisible by {1}")]
    DenominatorDivisible(String, u64),
    #[error("gcd({0}, {1}) != 1")]
    NotCoprime(String, String),
    #[error("exact division failed: {0}")]
    NotDivisible(String),
    #[error("residual eighth-root phase {0} after Gauss-sum substitution")]
    ResidualPhase(i64),
    #[error("series has zero constant term")]
    NotAUnit,
    #[error("requested order {requested} exceeds available order {available}")]
    OrderExceeded { requested: usize, available: usize },
    #[error("pole remaining: valuation {valuation} below {power}")]
    PoleRemaining { valuation: usize, power: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inconsistent expansion: {0}")]
    InconsistentExpansion(String),
    #[error("table complete only to {available}, need {needed}")]
    InsufficientTable { needed: usize, available: usize },
    #[error("color {0} is divisible by {1}")]
    ColorDivisible(i64, u64),
    #[error("not a rational homology sphere: {0}")]
    NotRHS(String),
    #[error("surgery coefficient {0} divisible by {1}")]
    OrderDivisible(String, u64),
    #[error("homology order {0} divisible by {1}")]
    HomologyDivisible(String, u64),
    #[error("fiber data {0} not coprime to {1}")]
    FiberDivisible(String, u64),
    #[error("constant term {0} survived the sign sum")]
    NonvanishingConstant(String),
    #[error("non-integral coefficient: {0}")]
    NonIntegral(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Errors caused by the caller's input, as opposed to violated internal contracts.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::NotDivisible(_)
                | Error::ResidualPhase(_)
                | Error::PoleRemaining { .. }
                | Error::InconsistentExpansion(_)
                | Error::NonvanishingConstant(_)
                | Error::NonIntegral(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
