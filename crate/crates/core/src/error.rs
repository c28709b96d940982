use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} outside supported range 1..=32")]
    UnsupportedDegree(u32),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("modulus {modulus:#x} is reducible over F2")]
    ReducibleModulus { modulus: u64 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("GF(2^{sub}) is not a subfield of GF(2^{target})")]
    NotASubfield { sub: u32, target: u32 },

    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,

    #[error("inexact division, remainder {remainder}")]
    InexactDivision { remainder: String },

    #[error("degree {degree} exceeds the limit {limit}")]
    DegreeTooLarge { degree: usize, limit: usize },

    #[error("polynomial is not irreducible over its base field")]
    NotIrreducibleOverBase,

    #[error("differential a must be nonzero")]
    ZeroDifference,

    #[error("field of size 2^{bits} exceeds the limit 2^{limit}")]
    FieldTooLarge { bits: u32, limit: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
