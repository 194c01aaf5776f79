use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{op}: {reason}")]
    Domain { op: &'static str, reason: String },

    /// The input is valid but too close to a singularity for a stable answer.
    #[error("{op}: degenerate input: {reason}")]
    Degenerate { op: &'static str, reason: String },

    #[error("{op}: model does not apply: {reason}")]
    NotApplicable { op: &'static str, reason: String },

    #[error("{op}: no root in [{lo}, {hi}]")]
    NoRoot { op: &'static str, lo: f64, hi: f64 },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("duplicate year {0}")]
    DuplicateYear(i32),

    #[error("year {year} does not increase after {previous}")]
    NonMonotoneYear { previous: i32, year: i32 },

    #[error("series too short: {0}")]
    TooShort(String),

    #[error("{what} does not cover year {year}")]
    Coverage { what: &'static str, year: i32 },

    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }
}
