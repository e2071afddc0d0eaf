use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not Hermitian (relative residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("sphere optimizer stalled: no restart improved on its starting point")]
    OptimizerStall,

    #[error("unknown bound `{0}`")]
    UnknownBound(String),

    #[error("bound {0} requires a second operator")]
    MissingPartner(String),

    #[error("equality diagnostic failed: {0}")]
    DiagnosticFailed(String),

    #[error("invalid norm `{0}`")]
    InvalidNorm(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Failures that come from iterative numerics rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::OptimizerStall | Error::DiagnosticFailed(_)
        )
    }
}
