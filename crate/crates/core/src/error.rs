use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The Gamma function was evaluated at one of its poles.
    #[error("Gamma function pole at x = {0}")]
    GammaPole(f64),

    /// Adaptive quadrature ran out of subdivisions.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error estimate {error:e})"
    )]
    NotConverged {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    /// The accelerated sum over an infinite oscillatory tail did not settle.
    #[error("oscillatory tail did not converge after {} terms", partial_sums.len())]
    TailNotConverged { partial_sums: Vec<f64> },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Best available value carried by a numerical failure, if any.
    pub fn best_estimate(&self) -> Option<f64> {
        match self {
            Error::NotConverged { estimate, .. } => Some(*estimate),
            Error::TailNotConverged { partial_sums } => partial_sums.last().copied(),
            _ => None,
        }
    }

    /// True for failures of a numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotConverged { .. } | Error::TailNotConverged { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
