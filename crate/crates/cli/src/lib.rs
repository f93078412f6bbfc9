//! IO side of the conformable solver toolkit: command-line parsing, problem
//! assembly from flags, CSV output and the acceptance runner behind
//! `conformable reproduce`.

pub mod args;
pub mod commands;
pub mod csv;
pub mod problem;
pub mod reproduce;

/// Anything that should stop a run before or while producing output.
/// Every variant maps to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] conformable_core::Error),
    #[error("cannot parse {what}: {source}")]
    Expression {
        what: &'static str,
        source: conformable_core::ParseError,
    },
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, ConfigError>;

pub const EXIT_CONFIG_ERROR: i32 = 2;
