use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NonHermitian { asymmetry: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("matrix has eigenvalue {value:e} below the PSD tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("{what} overflows double precision at argument {argument}")]
    Overflow { what: &'static str, argument: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("{what} is not normalized (norm² = {norm_sqr})")]
    NotNormalized { what: &'static str, norm_sqr: f64 },

    #[error("covariance factorization failed at pivot {index} (value {pivot:e})")]
    FactorizationFailure { index: usize, pivot: f64 },

    #[error("integrator norm drift {drift:e} exceeds tolerance")]
    StepTooLarge { drift: f64 },

    #[error("runs do not share a time grid")]
    GridMismatch,

    #[error("weight {name} = {value} is not positive at nbar = {nbar}")]
    NonPositiveWeight {
        name: &'static str,
        value: f64,
        nbar: f64,
    },
}
