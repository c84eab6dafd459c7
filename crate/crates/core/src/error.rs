use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("f'(z) vanishes at z = {}{:+}i", .witness.re, .witness.im)]
    DerivativeVanishes { witness: Complex64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("singular power: 0 raised to an exponent with non-positive real part")]
    SingularPower,
    #[error("path sample {index} is zero")]
    SingularPath { index: usize },
    #[error("argument jump of pi or more between path samples {index} and {next}", next = .index + 1)]
    UndersampledPath { index: usize },
    #[error("gamma must be nonzero")]
    ZeroGamma,
    #[error("Re gamma must be positive, got {0}")]
    NonPositiveGamma(f64),
    #[error("{what} did not converge within {limit} {unit}")]
    NoConvergence { what: &'static str, limit: usize, unit: &'static str },
    #[error("hypergeometric parameter c is a non-positive integer")]
    HypergeometricPole,
    #[error("transfer pole: (1-a)G + 1 + ma vanishes")]
    TransferPole,
    #[error("w = 1, so p = (1+w)/(1-w) is undefined")]
    PUndefined,
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("unknown catalog function `{0}`")]
    UnknownCatalog(String),
    #[error("parameter `{name}` out of range: {detail}")]
    ParameterOutOfRange { name: String, detail: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
