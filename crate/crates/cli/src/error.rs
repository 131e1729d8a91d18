use std::fmt;

use mukai_lattice::Error;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const BAD_INPUT: i32 = 1;
    pub const INVARIANT: i32 = 2;
    pub const IO: i32 = 3;
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Malformed(String),
    NotEven(String),
    Input(Error),
    Invariant(String),
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Input(Error::InvalidInput(msg.into()))
    }

    /// Short machine-readable tag for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Malformed(_) => "malformed",
            CliError::NotEven(_) => "not-even",
            CliError::Invariant(_) => "invariant-violation",
            CliError::Input(e) => match e {
                Error::NotIsometric(_) => "not-isometric",
                Error::NotSaturated => "not-saturated",
                Error::NotAdmissible(_) => "not-admissible",
                Error::Degenerate => "degenerate",
                Error::NotSymmetric => "not-symmetric",
                _ => "invalid-input",
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => exit::IO,
            CliError::Invariant(_) => exit::INVARIANT,
            _ => exit::BAD_INPUT,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_invariant_violation() {
            CliError::Invariant(e.to_string())
        } else {
            CliError::Input(e)
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) | CliError::Malformed(m) | CliError::NotEven(m) | CliError::Invariant(m) => {
                f.write_str(m)
            }
            CliError::Input(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}
