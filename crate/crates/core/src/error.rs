use thiserror::Error;

/// Errors raised by the exact pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("rational function with zero denominator")]
    ZeroDenominator,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("modulus must be a monic quadratic")]
    NonQuadraticModulus,
    #[error("invalid interval: lower end must be strictly below upper end")]
    InvalidInterval,
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("potential is pluriharmonic, its form vanishes identically")]
    NotAMetric,
    #[error("ricci density is not positive at the origin")]
    NonPositiveAtOrigin,
    #[error("metric is not positive at the origin (first Taylor coefficient {0})")]
    NonPositiveMetricAtOrigin(String),
    #[error("density is negative somewhere on [0, inf)")]
    NegativeDensity,
    #[error("density has a pole on [0, inf)")]
    SingularDensity,
    #[error("density does not define a Kahler form on CP1")]
    NotKahler,
    #[error("polynomial must take the value 1 at the origin")]
    Unnormalized,
    #[error("expression size {size} exceeds the limit {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("iteration depth {0} is outside the supported range")]
    DepthOutOfRange(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
