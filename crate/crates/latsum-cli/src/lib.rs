//! Command-line front end for `latsum`: σₙ⁽ᵐ⁾ and S_{l,m,n} evaluation,
//! the exact-value table, verification suites and point listings, with
//! json, csv or text output.
//!
//! Exit codes: 0 success, 1 failed check or other error, 2 invalid orders
//! or usage, 3 divergent sum, 4 point set not centred on the origin.

pub mod commands;
pub mod config;
pub mod report;

use std::fmt;

pub use commands::run;
pub use config::{CommandKind, Format, JobConfig, LatticeArg, Suite};
pub use report::{Field, Report, SCHEMA};

#[derive(Debug)]
pub enum CliError {
    Lib(latsum::Error),
    Usage(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(latsum::Error::InvalidOrder(_)) | CliError::Usage(_) => 2,
            CliError::Lib(latsum::Error::Divergent(_)) => 3,
            CliError::Lib(latsum::Error::NotOriginCentred(_)) => 4,
            CliError::Lib(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<latsum::Error> for CliError {
    fn from(e: latsum::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}
