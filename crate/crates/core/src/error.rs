use thiserror::Error;

/// Errors raised by model construction, evaluation and sampling.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor argument is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An evaluation argument is outside the function's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Quadrature or root finding did not reach the requested tolerance.
    #[error("numeric failure in {context}: achieved error {achieved:e}, requested {requested:e}")]
    NumericFailure {
        context: &'static str,
        achieved: f64,
        requested: f64,
    },

    /// A sampler exhausted its work budget before certifying its truncation bound.
    #[error("resource limit in {context}: budget of {budget} exhausted, truncation bound {achieved_bound:e}")]
    Resource {
        context: &'static str,
        budget: u64,
        achieved_bound: f64,
    },

    /// A model description could not be read.
    #[error("parse error: {0}")]
    Parse(String),

    /// Input dimension exceeds what an enumeration-based evaluator supports.
    #[error("capacity exceeded: dimension {dim} > limit {limit}")]
    Capacity { dim: usize, limit: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
