use thiserror::Error;

use crate::valgroup::GValue;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("division by zero")]
    ZeroDivisor,

    #[error("infinity cannot be divided")]
    DivisionOfInfinity,

    /// A series was zero up to its precision, so no leading term could be
    /// certified. `precision` is the exponent bound that was reached.
    #[error("insufficient precision: {what} is zero up to O(t^{precision})")]
    InsufficientPrecision { what: String, precision: String },

    #[error("characteristic mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("{0} is not a prime")]
    InvalidPrime(u32),

    #[error("exponent {0} does not have a power of p as denominator")]
    InvalidExponent(String),

    #[error("the zero polynomial has no finite value here")]
    ZeroPolynomial,

    #[error("polynomial division by zero")]
    DivisionByZeroPoly,

    #[error("expansion base must be monic of positive degree")]
    NonMonicBase,

    #[error("limit did not stabilize within {} steps; last values {}", .values.len(), fmt_tail(.values))]
    UnstableLimit { values: Vec<GValue> },

    #[error("invalid augmentation: {0}")]
    InvalidAugmentation(String),

    #[error("set is not complete: no key polynomial fixes {witness}")]
    NotComplete { witness: String },

    #[error("not a pseudo-convergent sequence: indices {0}, {1}, {2} violate the difference condition")]
    NotPcs(usize, usize, usize),

    #[error("a pseudo-convergent sequence check needs at least 3 terms, got {0}")]
    PrefixTooShort(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn fmt_tail(values: &[GValue]) -> String {
    let start = values.len().saturating_sub(2);
    values[start..]
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
