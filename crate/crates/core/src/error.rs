use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The input fails a precondition of the requested construction
    /// (e.g. a triple that does not satisfy the negative Pell identity).
    #[error("not eligible: {0}")]
    NotEligible(String),

    /// The triple's image under the class map is principal, so no order-2
    /// certificate can be issued.
    #[error("certificate refused: {0}")]
    CertificateRefused(String),

    #[error("not found: {0}")]
    NotFound(String),

    /// An identity that must hold by construction did not.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("factorization of {n} timed out after {elapsed_ms} ms")]
    FactorTimeout { n: String, elapsed_ms: u128 },

    #[error("{0} is outside the range where primality is certified")]
    OutOfRange(String),

    #[error("candidate s={s}: {source}")]
    Candidate { s: u64, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::ContractViolation(msg.into())
    }
}
