use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StruveError {
    /// Argument outside the domain where the requested representation is valid.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested accuracy could not be reached; `estimate` is the best value found.
    #[error("accuracy error: {reason} (best estimate {estimate:e})")]
    Accuracy { reason: String, estimate: f64 },

    /// A ratio expansion was evaluated too close to one of its poles.
    #[error("pole proximity: x = {x} lies within {radius:e} of zero #{index} at {zero}")]
    PoleProximity {
        x: f64,
        index: usize,
        zero: f64,
        radius: f64,
    },

    /// Internal failure that should not happen for documented inputs.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, StruveError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(StruveError::Domain(msg.into()))
}

/// Rejects NaN and infinities at a public boundary.
pub(crate) fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} must be finite, got {v}"))
    }
}
