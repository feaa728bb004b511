use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("modulus must be monic of degree {expected} (got {got} coefficients)")]
    BadModulus { expected: u32, got: usize },

    #[error("modulus {0:?} is reducible over F_p")]
    Reducible(Vec<u32>),

    #[error("{what}: {requested} exceeds the configured budget of {cap}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("{l} does not divide {n}")]
    NotDivisor { l: u64, n: u64 },

    #[error("operation undefined at zero")]
    ZeroElement,

    #[error("element belongs to a different field context")]
    ContextMismatch,

    #[error("element is not in the subfield F_(p^{0})")]
    NotInSubfield(u32),

    #[error("subfield index {index} out of range (subfield has {size} nonzero elements)")]
    IndexOutOfRange { index: u64, size: u64 },

    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("parameters (p, m, k) = ({p}, {m}, {k}) violate gcd(m, k) = gcd(m - k, 2k) = d odd")]
    NonStrict { p: u32, m: u32, k: u32 },

    #[error("label (0, 0) has no rank/discriminant in this context")]
    ZeroLabel,

    #[error("g_(delta,gamma) requires gamma * delta != 0")]
    DegenerateRootLabel,

    #[error("shift {tau} out of range 0..{period}")]
    ShiftOutOfRange { tau: u64, period: u64 },

    #[error("inexact division in {0}")]
    InexactDivision(String),

    #[error("cache file: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
