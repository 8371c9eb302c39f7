use thiserror::Error;

use crate::plan::{Severity, Violation};

/// Process exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const IO: u8 = 1;
    pub const CONFIG: u8 = 2;
    pub const RESOURCE: u8 = 3;
    pub const INVARIANT: u8 = 4;
    pub const NUMERIC: u8 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("I/O error: {0}")]
    Io(String),
    #[error("cannot parse config: {0}")]
    Parse(String),
    #[error("invalid config:\n{}", list(.0))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Core(#[from] unibound_core::Error),
}

fn list(violations: &[Violation]) -> String {
    violations.iter().map(|v| format!("  - {v}")).collect::<Vec<_>>().join("\n")
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use unibound_core::Error as E;
        match self {
            CliError::Io(_) => exit::IO,
            CliError::Parse(_) => exit::CONFIG,
            CliError::Invalid(v) => {
                if v.iter().all(|v| v.severity == Severity::Resource) {
                    exit::RESOURCE
                } else {
                    exit::CONFIG
                }
            }
            CliError::Core(E::Resource(_)) => exit::RESOURCE,
            CliError::Core(E::Numeric(_)) => exit::NUMERIC,
            CliError::Core(_) => exit::CONFIG,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
