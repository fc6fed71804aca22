use thiserror::Error;

/// Errors raised by the arithmetic and verification layers.
///
/// Precondition failures are reported as errors. Failures of a congruence
/// that is a theorem (dual-route disagreements, a Glaisher sum that is not
/// divisible by `p`) are reported as [`Error::CongruenceFailure`] so callers
/// can tell an arithmetic bug from bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid prime window [{min_p}, {max_p}]: need 2 <= min_p <= max_p")]
    InvalidWindow { min_p: u64, max_p: u64 },

    #[error("cannot factorize 0")]
    FactorizeZero,

    #[error("{a} is not invertible modulo {p}")]
    NotCoprime { a: i64, p: u64 },

    #[error("perfect-power decomposition needs q > 1, got {0}")]
    NotAbovePowerBase(i128),

    #[error("Kronecker symbol needs an odd positive modulus, got {0}")]
    EvenModulus(u64),

    #[error("modulus {p}^{e} is not supported (need prime p, 1 <= e <= 3 and p^e < 2^63)")]
    UnsupportedModulus { p: u64, e: u32 },

    #[error("{0}")]
    Precondition(String),

    #[error("congruence failure: {0}")]
    CongruenceFailure(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True when the error signals a failed congruence rather than bad input.
    pub fn is_congruence_failure(&self) -> bool {
        matches!(self, Error::CongruenceFailure(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
