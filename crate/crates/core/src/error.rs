use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero has no prime factorization")]
    ZeroInput,

    #[error("{0} exceeds the trial-division bound {1}")]
    TooLarge(i64, i64),

    #[error("invalid discriminant {0}: {1}")]
    InvalidDiscriminant(i64, &'static str),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("{0} is not a prime discriminant")]
    NotPrimeDiscriminant(i64),

    #[error("{delta} is not a fundamental divisor of {disc}")]
    NotFundamentalDivisor { delta: i64, disc: i64 },

    #[error("{0} is not prime")]
    NotPrime(i64),

    #[error("the prime {q} divides the conductor {f}")]
    PrimeDividesConductor { q: i64, f: i64 },

    #[error("form ({0}, {1}, {2}) is not primitive")]
    Imprimitive(i64, i64, i64),

    #[error("form ({a}, {b}, {c}) has discriminant {found}, expected {expected}")]
    DiscriminantMismatch {
        a: i64,
        b: i64,
        c: i64,
        found: i64,
        expected: i64,
    },

    #[error("b^2 - 4ac = {0} is a perfect square or zero")]
    SquareDiscriminant(i64),

    #[error("negative definite form ({0}, {1}, {2})")]
    NegativeDefinite(i64, i64, i64),

    #[error("lattice is not a proper ideal of the order of discriminant {0}")]
    NotProper(i64),

    #[error("no represented prime coprime to {modulus} for class {class} within |x|,|y| <= {bound}")]
    SearchExhausted { class: usize, modulus: i64, bound: i64 },

    #[error("class id {0} out of range")]
    UnknownClass(usize),

    #[error("character of discriminant {found} used with an order of discriminant {expected}")]
    CharacterMismatch { found: i64, expected: i64 },

    #[error("the order has conductor {0}; a maximal order (f = 1) is required")]
    NotMaximal(i64),

    #[error("{0} requires a real quadratic field")]
    NotReal(i64),

    #[error("evaluation point s = {0} must exceed 1")]
    BadEvaluationPoint(f64),

    #[error("coefficient a_{n} = {value} violates the bound {bound}")]
    CoefficientBound { n: usize, value: i64, bound: i64 },

    #[error("local factor at p = {0} is not divisible by 1 - p X^2")]
    InexactDivision(i64),

    #[error("truncation length must be at least 1")]
    EmptySeries,
}

pub type Result<T> = std::result::Result<T, Error>;
