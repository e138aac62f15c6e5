use thiserror::Error;

/// Failures reported by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("horizon evaluation: {0}")]
    Horizon(String),

    #[error("singular state: {0}")]
    SingularState(String),

    #[error("degenerate profile: {0}")]
    DegenerateProfile(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{what} did not converge (estimate {estimate:e}, tolerance {tolerance:e}, work {work})")]
    NotConverged {
        what: &'static str,
        estimate: f64,
        tolerance: f64,
        work: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
