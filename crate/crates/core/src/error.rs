use thiserror::Error;

/// Errors raised by the numerical kernels, constructions and testers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular (smallest singular value {0:.3e})")]
    Singular(f64),
    #[error("infidelity {0:.3e} is too small to bound sample complexity")]
    DegenerateInstance(f64),
    #[error("invalid density operator: {0}")]
    InvalidState(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("operator norm {norm:.6} exceeds normalization {alpha:.6}")]
    NormTooLarge { norm: f64, alpha: f64 },
    #[error("scaling factor {0} must exceed 1")]
    BadFactor(f64),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("encodings do not share a contract: {0}")]
    ContractMismatch(String),
    #[error("target is not a scaled unitary: {0}")]
    NotUnitaryTarget(String),
    #[error("amplification order {0} must be odd")]
    EvenM(usize),
    #[error("substituted oracle must have alpha = 1, got {0}")]
    AlphaNotOne(f64),
    #[error("polynomial is not bounded as required: {0}")]
    PolynomialUnbounded(String),
    #[error("polynomial has no definite parity")]
    NoParity,
    #[error("robustness hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("polynomial construction failed: {0}")]
    ConstructionFailed(String),
    #[error("polynomial bound exceeded: sup {0:.6} > 1")]
    BoundExceeded(f64),
    #[error("vector is not an eigenvector (residual {0:.3e})")]
    NotEigenvector(f64),
    #[error("malformed amplitude-estimation unitary: {0}")]
    MalformedU(String),
    #[error("oracle does not prepare a purification: {0}")]
    NotPurifier(String),
    #[error("state is not bounded below by I/kappa: {0}")]
    RankDeficient(String),
    #[error("bit string must mark exactly one index: {0}")]
    MarkCountInvalid(String),
    #[error("bad circuit: {0}")]
    BadCircuit(String),
    #[error("norm hypothesis failed: {0}")]
    NormHypothesisFailed(String),
    #[error("N must be a power of two in 4..=64, got {0}")]
    BadN(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
