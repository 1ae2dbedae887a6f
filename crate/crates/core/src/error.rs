use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("residue {k} out of range [0, {modulus})")]
    ResidueOutOfRange { k: u64, modulus: u64 },

    #[error("gcd({a}, {b}) = {gcd}, expected coprime pair ({a}, {b})")]
    NotCoprime { a: u64, b: u64, gcd: u64 },

    #[error("modulus {b} does not divide period {period}")]
    ModulusNotDivisor { b: u64, period: u64 },

    #[error("cyclotomic field mismatch: Q(xi_{left}) vs Q(xi_{right})")]
    FieldMismatch { left: u64, right: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("element is not rational: nonzero coefficient at xi^{degree}")]
    NotRational { degree: usize },

    #[error("{0}")]
    Domain(String),

    #[error("constituent {k} evaluated at n = {n} is not a nonnegative integer: {value}")]
    NonIntegerEvaluation { k: u64, n: BigInt, value: String },

    #[error("q_{k} - Poly has degree {degree}, expected a constant")]
    NonConstantDifference { k: u64, degree: usize },
}
