use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace:.12} (expected 1)")]
    BadTrace { trace: f64 },

    #[error("matrix has negative eigenvalue {eigenvalue:.3e}")]
    NotPositive { eigenvalue: f64 },

    #[error("basis vectors are not orthonormal (deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state of total dimension {dim} exceeds the supported limit of {limit}")]
    TooLarge { dim: usize, limit: usize },

    #[error("state is not Bell-diagonal up to local unitaries (marginal deviation {deviation:.3e})")]
    NotBellDiagonal { deviation: f64 },

    #[error(
        "integration became unphysical at t = {time:.6e} with dt = {dt:.3e} \
         (trace drift {trace_drift:.3e}, min eigenvalue {min_eigenvalue:.3e}); reduce the step size"
    )]
    IntegrationUnstable {
        time: f64,
        dt: f64,
        trace_drift: f64,
        min_eigenvalue: f64,
    },

    #[error("scenario invariant violated: {0}")]
    InvalidScenario(String),

    #[error("covariance matrix is unphysical: 2*nu_min = {two_nu_min:.12} at t = {time:.6e}")]
    Unphysical { two_nu_min: f64, time: f64 },

    #[error("covariance matrix is not symmetric (deviation {deviation:.3e})")]
    NotSymmetric { deviation: f64 },

    #[error("drift matrix is unstable (max Re eigenvalue = {max_real_part:.6e}); no steady state exists")]
    Unstable { max_real_part: f64 },

    #[error("linear solve failed: {0}")]
    Singular(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
