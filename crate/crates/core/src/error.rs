use thiserror::Error;

/// Errors raised by construction, enumeration and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("field size {p}^{m} is outside the supported range (1 <= m, p^m <= 2^20)")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("leading coefficient a2 must be nonzero")]
    ZeroLeadingCoefficient,
    #[error("exponent d must be >= 1, got {0}")]
    InvalidExponent(u64),
    #[error("lambda = {lambda} is not an element of F_{p}")]
    InvalidLambda { lambda: u32, p: u32 },
    #[error("(p-1) does not divide d for scalar puncture (p = {p}, d = {d})")]
    ScalarPunctureExponent { p: u32, d: u64 },
    #[error("sign puncture requires even d, got {0}")]
    SignPunctureExponent(u64),
    #[error("cannot puncture a set of kind {0}")]
    PunctureKind(String),
    #[error("orbit of ({x}, {y}) is not contained in the set or has the wrong size")]
    BrokenOrbit { x: u32, y: u32 },
    #[error("the closed forms require m >= 2, got m = {0}")]
    DegreeTooSmall(u32),
    #[error("no closed form is available for {0}")]
    NoClosedForm(String),
    #[error("work estimate {required} exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("generator matrix has a zero column at index {0}")]
    ZeroColumn(usize),
    #[error("undefined case: {0}")]
    UndefinedCase(String),
}

pub type Result<T> = std::result::Result<T, Error>;
