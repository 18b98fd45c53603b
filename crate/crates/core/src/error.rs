use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A model or run parameter is outside its admissible domain.
    #[error("{name} must {constraint} (got {value})")]
    Domain {
        name: &'static str,
        constraint: &'static str,
        value: String,
    },

    #[error("{0} is not applicable in the current regime")]
    NotApplicable(&'static str),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: achieved relative error {achieved:e}")]
    Quadrature { achieved: f64 },

    #[error("chi-square affinity is infinite for {0} noise with a positive shift")]
    InfiniteAffinity(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("{0} noise is not supported by the likelihood-ratio oracle")]
    UnsupportedNoise(&'static str),

    /// The variance estimate collapsed to zero, so no unknown-variance rule can run.
    #[error("variance estimate is degenerate (all query coordinates are zero)")]
    NoEstimate,

    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("unknown classifier `{0}`")]
    UnknownClassifier(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, constraint: &'static str, value: impl ToString) -> Self {
        Error::Domain {
            name,
            constraint,
            value: value.to_string(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
