use thiserror::Error;

/// Errors produced by the plant model, the controllers and the scenario runner.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input fell outside the domain of a physical formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value violates its invariants.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A controller received a non-finite measurement or produced a non-finite command.
    #[error("controller fault in loop `{loop_id}` at t = {t} s: {reason}")]
    ControllerFault {
        t: f64,
        loop_id: String,
        reason: String,
    },

    /// A file could not be read or written.
    #[error("I/O error on `{path}`: {reason}")]
    Io { path: String, reason: String },

    /// Neither or both error conventions stabilised a scenario.
    #[error("error convention ambiguity for scenario `{scenario}`: {detail}")]
    ConventionAmbiguity { scenario: String, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}
