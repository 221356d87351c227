use std::fmt;
use std::path::Path;

use mdinf_core::{Error, ErrorKind};

/// Exit code for bad flags, out-of-domain parameters and I/O failures.
pub const EXIT_DOMAIN: i32 = 2;
/// Exit code for numerical breakdowns.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: i32,
}

impl CliError {
    pub fn domain(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: EXIT_DOMAIN,
        }
    }

    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        Self::domain(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// The command-line flag responsible for a core error, if any.
fn flag_for(err: &Error) -> Option<&'static str> {
    match err {
        Error::InvalidDeltaT(_) => Some("--dt"),
        Error::InvalidDeltaP(_) => Some("--dp"),
        Error::UnorderedGrid { .. } => Some("--t"),
        Error::InvalidParameter { name, .. } => match *name {
            "lambda" => Some("--lambda"),
            "service" => Some("--service"),
            "l" => Some("--l-exponent"),
            "t" => Some("--t"),
            "samples" => Some("--samples"),
            "order" => Some("--order"),
            _ => None,
        },
        Error::AtTime { source, .. } => flag_for(source),
        _ => None,
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err.kind() {
            ErrorKind::Domain => EXIT_DOMAIN,
            ErrorKind::Numerical => EXIT_NUMERICAL,
        };
        let message = match flag_for(&err) {
            Some(flag) => format!("{flag}: {err}"),
            None => err.to_string(),
        };
        Self { message, code }
    }
}
