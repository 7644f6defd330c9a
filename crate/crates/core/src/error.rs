use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic mismatch: {0} vs {1}")]
    CharMismatch(u64, u64),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("coefficient {0} is not defined in characteristic {1}")]
    NotReducible(String, u64),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("empty point set")]
    EmptyInput,

    #[error("polygon is degenerate (dimension {0}); a 2-dimensional polygon is required")]
    Degenerate(u8),

    #[error("half-plane system has empty solution set")]
    EmptyRegion,

    #[error("half-plane system is unbounded")]
    UnboundedRegion,

    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(i64),

    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("units are not allowed here")]
    UnitPolynomial,

    #[error("integers are not pairwise coprime positive: ({0}, {1}, {2})")]
    NotCoprime(u64, u64, u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search budget exhausted: {0}")]
    Budget(String),

    #[error("implication diagram contradiction: {0}")]
    Contradiction(String),

    #[error("unexpected kernel dimension {found} (expected {expected})")]
    KernelDimension { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
