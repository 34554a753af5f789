use thiserror::Error;

/// Failures raised by the arithmetic kernels and identity verifiers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument must be nonzero")]
    Zero,
    #[error("{a} is not invertible modulo {c}")]
    NotInvertible { a: i64, c: u64 },
    #[error("{divisor} does not divide {n}")]
    NotDivisor { divisor: i64, n: i64 },
    #[error("coefficient A({m1}, {m2}) undefined: first index shares a factor with level {level}")]
    CoefficientDomain { m1: i64, m2: i64, level: u64 },
    #[error("prime {p} exceeds the model's prime bound {bound}")]
    PrimeOutOfRange { p: u64, bound: u64 },
    #[error("character of modulus {modulus} is not primitive (conductor {conductor})")]
    NotPrimitive { modulus: u64, conductor: u64 },
    #[error("coprimality hypothesis violated: {0}")]
    Coprimality(String),
    #[error("series cannot be complete on the requested window: {0}")]
    Incomplete(String),
    #[error("structural check failed: {0}")]
    Structural(String),
    #[error("gamma function pole at {0}")]
    Pole(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
