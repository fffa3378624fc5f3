use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pentagon count must be at least 1, got n = {0}")]
    InvalidPentagonCount(usize),

    #[error("blueprint with n = {n} needs {expected} attachment choices, got {got}")]
    ChoiceLengthMismatch { n: usize, expected: usize, got: usize },

    #[error("probability p1 must lie in [0, 1], got {0}")]
    InvalidProbability(String),

    #[error("enumeration of n = {n} exceeds the cap of {cap} pentagons")]
    EnumerationCapExceeded { n: usize, cap: usize },

    #[error("graph has {vertices} vertices, above the dense engine cap of {cap}")]
    DenseCapExceeded { vertices: usize, cap: usize },

    #[error("Laplacian system is singular (graph disconnected?)")]
    SingularLaplacian,

    #[error("Laplacian solve residual {0:e} exceeds tolerance")]
    LaplacianResidual(f64),

    #[error("matrix dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix kind mismatch: expected {expected}, got {got}")]
    KindMismatch { expected: &'static str, got: &'static str },

    #[error("variance is zero at n = {n}, p1 = {p1}; normality needs n >= 3 and 0 < p1 < 1")]
    DegenerateVariance { n: usize, p1: f64 },

    #[error("sample count must be at least 1")]
    EmptySample,

    #[error("worker count must be at least 1")]
    NoWorkers,

    #[error("engines disagree: {0}")]
    EngineDisagreement(String),

    #[error("no tabulated Kolmogorov-Smirnov critical value for alpha = {0}")]
    UnsupportedAlpha(f64),

    #[error("invalid blueprint JSON: {0}")]
    BlueprintJson(String),
}

pub type Result<T> = std::result::Result<T, Error>;
