use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("resource guard exceeded: {what} requires {requested}, limit {limit}")]
    Guard {
        what: String,
        requested: f64,
        limit: f64,
    },

    #[error("empty-window evidence: {0}")]
    EmptyWindow(String),

    #[error("undetermined within window: all levels through {reached} admissible")]
    Undetermined { reached: u32 },

    #[error("power iteration did not converge after {iterations} steps (bounds [{lower}, {upper}])")]
    NonConvergent {
        iterations: usize,
        lower: f64,
        upper: f64,
    },

    #[error("inconsistent h_ref: kappa_{index} = {kappa} < 0")]
    InconsistentHRef { index: usize, kappa: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn guard(what: impl Into<String>, requested: f64, limit: f64) -> Self {
        Error::Guard {
            what: what.into(),
            requested,
            limit,
        }
    }

    /// True for errors caused by exceeding a feasibility guard.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
