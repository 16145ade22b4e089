use thiserror::Error;

/// Errors raised by the physics and numerics layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    Argument { name: &'static str, reason: String },

    #[error("{function} is singular at this point: {reason}")]
    Domain { function: &'static str, reason: String },

    #[error("eigensolver did not converge after {sweeps} QR sweeps ({deflated} of {n} eigenvalues deflated)")]
    NoConvergence { sweeps: usize, deflated: usize, n: usize },

    #[error("eigenpair {index} residual {residual:.3e} exceeds bound {bound:.3e}")]
    Residual { index: usize, residual: f64, bound: f64 },

    #[error("mode {index} has negative linewidth {linewidth:.3e} beyond roundoff")]
    NegativeLinewidth { index: usize, linewidth: f64 },

    #[error("branch {xi} has not been assigned to any eigenvector")]
    UnassignedBranch { xi: usize },

    #[error("quadrature failed to reach tolerance {tol:.1e} (estimate {estimate:.3e})")]
    Quadrature { tol: f64, estimate: f64 },

    #[error("power-law fit needs at least 3 positive points in the window, got {got}")]
    Fit { got: usize },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn argument(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Argument {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(function: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            function,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
