use thiserror::Error;

/// Errors surfaced by state construction, measure evaluation, and the
/// triangle/LOCC machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid subsystem dimensions: {0}")]
    InvalidDims(String),
    #[error("state vector is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix has eigenvalue {0:.3e} below tolerance")]
    NotPositive(f64),
    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("measure {0} is not defined for reduced dimension {1}")]
    UnsupportedMeasure(&'static str, usize),
    #[error("triangle relation violated (worst slack {0:.3e})")]
    InvalidTriangle(f64),
    #[error("degenerate triangle (area {0:.3e})")]
    DegenerateTriangle(f64),
    #[error("measurement operators are not complete (residual {0:.3e})")]
    IncompleteMeasurement(f64),
    #[error("unphysical covariance matrix: {0}")]
    UnphysicalCovariance(String),
    #[error("state rank {0} exceeds supported limit {1}")]
    RankTooHigh(usize, usize),
    #[error("search failed: {0}")]
    SearchFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
