use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{m} is not invertible modulo {n}")]
    NotCoprime { m: i64, n: u64 },
    #[error("zeta has a pole at s = 1")]
    PoleAtOne,
    #[error("riemann-siegel evaluation requested at Re s = {re}, |Im s| = {im}; it needs Re s = 1/2 and |Im s| >= 10")]
    MethodDomain { re: f64, im: f64 },
    #[error("log gamma has a pole at the non-positive integer {0}")]
    PoleAtNonPositiveInteger(i64),
    #[error("quadrature did not converge: {0}")]
    QuadratureNotConverged(&'static str),
    #[error("inconsistent coefficient model: {0}")]
    BadModel(&'static str),
    #[error("evaluation count {count} exceeds the guard {limit}")]
    TooLarge { count: u128, limit: u128 },
    #[error("no primes congruent to {residue} mod {modulus} in [{lo}, {hi}]")]
    EmptyPrimeClass { residue: u64, modulus: u64, lo: u64, hi: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
