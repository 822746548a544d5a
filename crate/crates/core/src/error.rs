use thiserror::Error;

/// Errors raised by the harvesting kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("accelerated scenario `{scenario}` needs a > 0; use the inertial scenario for a = 0")]
    ZeroAcceleration { scenario: &'static str },

    #[error("{what} did not converge at regulator level {level} (eps = {eps:e}, error estimate {error:e})")]
    NonConvergence {
        what: &'static str,
        level: usize,
        eps: f64,
        error: f64,
    },

    #[error("regulator extrapolation unstable: successive orders differ by {spread:e} (tolerance {tolerance:e})")]
    UnstableExtrapolation { spread: f64, tolerance: f64 },

    #[error("image sum tail bound {bound:e} exceeds tolerance {tolerance:e} with {images} images")]
    ImageSumTruncation { images: usize, bound: f64, tolerance: f64 },

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("perturbative regime violated: L_AA + L_BB = {total:e} >= 1 (reduce the coupling)")]
    NonPerturbative { total: f64 },

    #[error("Cauchy-Schwarz violated beyond error bars: L_- = {l_minus:e}, tolerance {tolerance:e}")]
    CauchySchwarz { l_minus: f64, tolerance: f64 },

    #[error("finite-difference step instability: spread {spread:e} exceeds {tolerance:e}")]
    StepInstability { spread: f64, tolerance: f64 },

    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
