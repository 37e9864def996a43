use std::io;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An analytic formula was called outside the regime where it is exact.
    #[error("outside validity domain: {0}")]
    Domain(String),

    #[error("time step too large: dt * spectral radius = {product:.3e}, must be below {limit}")]
    StepTooLarge { product: f64, limit: f64 },

    #[error("eigendecomposition failed to converge for dimension {0}")]
    NoConvergence(usize),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { field, reason: reason.into() }
    }

    /// True for errors caused by bad user input rather than a failure inside
    /// the library.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::InvalidArgument(_)
                | Error::Domain(_)
                | Error::StepTooLarge { .. }
                | Error::Json(_)
                | Error::Csv(_)
        )
    }
}
