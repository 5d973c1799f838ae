use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (relative asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("coincident points {0} and {1}: free-space kernel is singular")]
    SingularKernel(usize, usize),

    #[error("could not place point {index} at minimum distance {d_min} after {attempts} attempts")]
    PointCloudInfeasible {
        index: usize,
        d_min: f64,
        attempts: usize,
    },

    #[error("covariance is singular or not positive definite")]
    SingularCovariance,

    #[error("eigensolver did not converge ({0})")]
    NonConvergence(&'static str),

    #[error("selftest checks failed: {0}")]
    SelftestFailed(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Numerical failures map to CLI exit code 3, everything else to 2.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence(_) | Error::SingularCovariance | Error::NonFinite(_) | Error::SelftestFailed(_)
        )
    }

    /// Short machine-readable tag, used in the CLI's one-line failure report.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDimension(_) => "invalid-dimension",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::NotHermitian(_) => "not-hermitian",
            Error::NonFinite(_) => "non-finite",
            Error::SingularKernel(..) => "singular-kernel",
            Error::PointCloudInfeasible { .. } => "point-cloud-infeasible",
            Error::SingularCovariance => "singular-covariance",
            Error::NonConvergence(_) => "non-convergence",
            Error::SelftestFailed(_) => "selftest-failed",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
        }
    }
}
