use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{0}")]
    Invalid(String),

    #[error("{what}: no branch converged (best error estimate {estimate:e})")]
    NonConvergence { what: &'static str, estimate: f64 },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("under-resolved: {0}")]
    UnderResolved(String),

    #[error("exponent theta = {theta} outside admissible window ({lo}, {hi}) for mu = {mu}")]
    InadmissibleExponent {
        theta: f64,
        mu: f64,
        lo: f64,
        hi: f64,
    },

    #[error("{operation}: instability detected at step {step} (growth factor {growth:e})")]
    Instability {
        operation: &'static str,
        step: usize,
        growth: f64,
    },
}

impl Error {
    pub(crate) fn param<T: crate::Real>(
        name: &'static str,
        value: T,
        reason: &'static str,
    ) -> Self {
        Error::InvalidParameter {
            name,
            value: value.as_f64(),
            reason,
        }
    }

    /// True for failures of a numerical method, false for rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::UnderResolved(_) | Error::Instability { .. }
        )
    }
}
