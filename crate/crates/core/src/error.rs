use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("unsupported matrix dimension {0} (only 2 and 4)")]
    UnsupportedDimension(usize),

    #[error("non-finite entries in {0}")]
    NonFinite(&'static str),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid parameter `{key}`: {reason}")]
    InvalidParameter { key: String, reason: String },

    #[error("time {t} outside the evolution window [0, {end}]")]
    TimeOutOfRange { t: f64, end: f64 },

    #[error("singular geometry at t = {t}: {reason}")]
    SingularGeometry { t: f64, reason: String },

    #[error("dressed-frame breakdown at t = {t}: E_DS vanishes")]
    FrameBreakdown { t: f64 },

    #[error("no convergence after {halvings} step halvings (last difference {last_diff:e}, tol {tol:e})")]
    Convergence {
        halvings: u32,
        last_diff: f64,
        tol: f64,
    },

    #[error("integrator failure: {0}")]
    Integrator(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by user input rather than by the numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. } | Error::Config(_) | Error::TimeOutOfRange { .. }
        )
    }
}
