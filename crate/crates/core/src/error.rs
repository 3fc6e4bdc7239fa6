use thiserror::Error;

/// Errors raised by the library. The CLI maps every variant to exit code 2.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An operation was given input outside its domain (for example an empty
    /// multiset).
    #[error("domain error: {0}")]
    Domain(String),
    /// A mechanism or search configuration is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),
    /// The search grid cannot decide the property for this mechanism.
    #[error("breakpoint not on grid: {0}")]
    BreakpointNotOnGrid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
    #[error("replay mismatch: {0}")]
    Replay(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
