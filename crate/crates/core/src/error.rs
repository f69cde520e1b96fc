use thiserror::Error;

use crate::matrix::Var;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variance `{name}` must be strictly positive, got {value}")]
    NonPositiveVariance { name: &'static str, value: f64 },

    #[error("correlation `{name}` must lie in [-1, 1], got {value}")]
    CorrelationOutOfRange { name: &'static str, value: f64 },

    #[error("channel is degenerate (|rho_xs1| = 1 or |rho_s2z| = 1)")]
    DegenerateChannel,

    #[error("capacity is indeterminate when |rho_xs1| = 1 and |rho_s2z| = 1")]
    IndeterminateCapacity,

    #[error("covariance over {labels:?} is singular (det = {det:e})")]
    SingularCovariance { labels: Vec<Var>, det: f64 },

    #[error("empirical covariance over {labels:?} is singular; retry with another seed")]
    SingularEmpiricalCovariance { labels: Vec<Var> },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("label error: {0}")]
    LabelError(String),

    #[error("invalid bracket [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("objective returned a non-finite value at {at}")]
    NonFiniteValue { at: f64 },

    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),

    #[error("need at least {required} samples, got {got}")]
    InsufficientSamples { required: usize, got: usize },

    #[error("at grid value {value}: {source}")]
    Sweep {
        value: f64,
        #[source]
        source: Box<Error>,
    },
}
