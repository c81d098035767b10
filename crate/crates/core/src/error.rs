use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("mismatched primes: {0} vs {1}")]
    PrimeMismatch(String, String),
    #[error("invalid factor: {0}")]
    InvalidFactor(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("series has no polynomial factor, so no growth exponent with a lower bound exists")]
    FiniteDimensional,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("ellipticity is undefined without a declared cocommutative Hopf structure")]
    NotHopf,
    #[error("inconsistent page data: {0}")]
    InconsistentPage(String),
    #[error("invalid differential on page {page}: {reason}")]
    InvalidDifferential { page: u32, reason: String },
    #[error("element is not effective-central: {0}")]
    NotEffectiveCentral(String),
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
}
