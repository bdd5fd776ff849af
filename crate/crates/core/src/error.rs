use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MbqcError {
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("{k} is not coprime to {d}")]
    NotCoprime { k: usize, d: usize },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("bases have different sizes ({0} vs {1})")]
    MismatchedCount(usize, usize),

    #[error("basis is not Hilbert-Schmidt orthogonal with equal norms (deviation {0:.3e})")]
    NonOrthogonalBasis(f64),

    #[error("target basis is not in the span of the source basis (deviation {0:.3e})")]
    SpanMismatch(f64),

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NonUnitary(f64),

    #[error("Kraus set is not trace preserving (deviation {0:.3e})")]
    ChannelInvalid(f64),

    #[error("state needs {required} amplitudes, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("virtual gate leaks out of the family representation (deviation {0:.3e})")]
    Leakage(f64),

    #[error("dimension {0} is not prime")]
    NotPrime(usize),

    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("generator not in the family algebra: {0}")]
    UnknownGenerator(String),

    #[error("gcd(x, d) = 1, nothing to factor")]
    NothingToFactor,

    #[error("invalid transition pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("no projection basis for {0}")]
    NoProjectionBasis(String),
}

pub type Result<T> = std::result::Result<T, MbqcError>;
