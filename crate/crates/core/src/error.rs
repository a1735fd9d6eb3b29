use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {modulus:#x} is reducible over GF(2)")]
    ReducibleModulus { modulus: u128 },

    #[error("modulus {modulus:#x} does not have degree {expected}")]
    DegreeMismatch { modulus: u128, expected: u32 },

    #[error("field degree {0} is not supported (need 2 <= n <= 64)")]
    UnsupportedDegree(u32),

    #[error("invalid modulus string {0:?}")]
    InvalidModulus(String),

    #[error("element {x:#x} is not in the subfield GF(2^{m})")]
    NotInSubfield { x: u64, m: u32 },

    #[error("subfield degree {m} does not divide {n}")]
    NotASubfield { m: u32, n: u32 },

    #[error("t = {t} is out of range for n = {n} (need 2 <= t <= n-1)")]
    TOutOfRange { n: u32, t: u32 },

    #[error("input element must be nonzero")]
    ZeroInput,

    #[error("constant term of the cubic must be nonzero")]
    ZeroConstant,

    #[error("n = {n} exceeds the exhaustive cap of {cap}")]
    FieldTooLarge { n: u32, cap: u32 },

    #[error("inexact division in {context}")]
    NonIntegerResult { context: &'static str },

    #[error("unsupported parameters: {0}")]
    UnsupportedParams(String),

    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),

    #[error("closed form disagrees with enumeration: {0}")]
    OracleMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
