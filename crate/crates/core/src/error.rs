use thiserror::Error;

/// Errors raised by ring arithmetic, parameter construction and the wire codec.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring rank {0} is not a power of two >= 4")]
    InvalidRank(usize),
    #[error("no suitable prime modulus found for n = {0}")]
    NoSuitablePrime(usize),
    #[error("operand dimensions disagree: {0}")]
    DimensionMismatch(String),
    #[error("NTT unavailable: q = {q} is not 1 mod {two_m}")]
    NttUnavailable { q: u32, two_m: usize },
    #[error("element is not invertible")]
    NotInvertible,
    #[error("oracle path limited to n <= {limit}, got {n}")]
    OracleSizeExceeded { n: usize, limit: usize },
    #[error("coefficient {value} out of range [0, {q})")]
    CoefficientOutOfRange { value: u64, q: u32 },
    #[error("integer coefficient magnitude exceeds 2^24")]
    IntegerOverflowRisk,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("lattice basis is singular")]
    SingularBasis,
    #[error("vector is not in the lattice")]
    NotInLattice,
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported format version {0:#04x}")]
    UnsupportedVersion(u8),
    #[error("truncated body: expected {expected} bytes, found {found}")]
    TruncatedBody { expected: usize, found: usize },
    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
