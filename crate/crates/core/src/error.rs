use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (e.g. a time outside `[0, 1]`).
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed or inconsistent input (coefficients, thresholds, grids, configs).
    #[error("validation error: {0}")]
    Validation(String),

    /// The remaining variance `rho - tau` vanished: drift quantities are undefined at `t = 1`.
    #[error("singular time t = {t}: remaining variance {remaining} is not positive")]
    SingularTime { t: f64, remaining: f64 },

    /// Adaptive quadrature exhausted its panel budget before reaching the target accuracy.
    #[error("quadrature did not converge ({context}): partial value {value:e}, error estimate {abs_error:e}")]
    NonConvergence {
        context: String,
        value: f64,
        abs_error: f64,
    },

    /// Too many Monte Carlo paths produced a non-finite log wealth.
    #[error("{flagged} of {total} paths overflowed (limit {limit})")]
    PathOverflow {
        flagged: usize,
        total: usize,
        limit: usize,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Adds context to a non-convergence error; other variants pass through.
    pub fn context(self, what: impl std::fmt::Display) -> Self {
        match self {
            Error::NonConvergence {
                context,
                value,
                abs_error,
            } => Error::NonConvergence {
                context: format!("{what}: {context}"),
                value,
                abs_error,
            },
            other => other,
        }
    }
}
