//! Library half of the `dualbvp` command: problem files, the four
//! subcommands and their output formats. `main.rs` only parses flags.

pub mod commands;
pub mod output;
pub mod spec;

use thiserror::Error;

/// Highest degree accepted by the subcommands.
pub const MAX_DEGREE: usize = 60;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or invalid problem files. Exit code 2.
    #[error("{0}")]
    Usage(String),
    /// The solver itself failed. Exit code 3.
    #[error("{0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<dualbvp::Error> for CliError {
    fn from(e: dualbvp::Error) -> Self {
        use dualbvp::Error as E;
        match e {
            E::Argument(_) | E::Parse(_) | E::Fixture(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
