use thiserror::Error;

/// Errors raised by the simulation and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sphere of radius {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("carry or comparison ran past {bound} lazy digits")]
    LookaheadExceeded { bound: usize },

    #[error("cylinder atom at depth {depth} reaches the boundary under one Markov step")]
    BoundaryContact { depth: u32 },

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("verification failed: {0}")]
    Check(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Failures of the computing machinery rather than of a mathematical check.
    pub fn is_infrastructure(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. }
                | Error::LookaheadExceeded { .. }
                | Error::BoundaryContact { .. }
                | Error::Io(_)
                | Error::Json(_)
                | Error::Csv(_)
        )
    }

    pub(crate) fn parse(what: &'static str, input: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
