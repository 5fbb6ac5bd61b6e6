use thiserror::Error;

/// Errors raised by the library. Messages are stable and are matched by the
/// CLI to choose exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown group: {0}")]
    UnknownGroup(String),
    #[error("no such subgroup: {0}")]
    NoSuchSubgroup(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("d undefined for V = 0")]
    ZeroRepresentation,
    #[error("degree not covered by chart data: {0}")]
    Unsupported(String),
    #[error("invalid chart table: {0}")]
    Chart(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("oracle cap exceeded: {0}")]
    Cap(String),
    #[error("lemma hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid chain complex: {0}")]
    Complex(String),
    #[error("vanishing requirement fails: {0}")]
    VanishingFails(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
