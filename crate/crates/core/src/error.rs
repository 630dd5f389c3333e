use thiserror::Error;

/// Errors surfaced by the library. `InvalidConfig` carries the offending
/// field or JSON node path so the CLI can report it verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid config at `{path}`: {message}")]
    InvalidConfig { path: String, message: String },

    #[error("numerical failure: {context}")]
    Numerical { context: String },

    #[error("resource limit exceeded: {what} ({requested} > {limit})")]
    ResourceLimit {
        what: String,
        limit: u64,
        requested: u64,
    },

    #[error("degenerate sample: {context}")]
    Degenerate { context: String },
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn numerical(context: impl Into<String>) -> Self {
        Error::Numerical {
            context: context.into(),
        }
    }

    pub fn degenerate(context: impl Into<String>) -> Self {
        Error::Degenerate {
            context: context.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
