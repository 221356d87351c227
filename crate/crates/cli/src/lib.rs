//! Command-line front end: argument definitions, the subcommands, output
//! encodings and the embedded reference tables.

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod output;
pub mod reference;

use mdinf_core::Target;

use args::{Cli, Command};
use error::CliError;

fn dispatch(command: &Command) -> Result<(), CliError> {
    match command {
        Command::BusyPeriod(a) => commands::table::run(a, Target::BusyPeriod),
        Command::BusyCycle(a) => commands::table::run(a, Target::BusyCycle),
        Command::Moments(a) => commands::moments::run(a),
        Command::Simulate(a) => commands::simulate::run(a),
        Command::ReproduceTable(a) => commands::reproduce::run(a),
    }
}

/// Runs a parsed invocation, inside a dedicated thread pool when
/// `--threads` is given.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    match cli.threads {
        Some(0) => Err(CliError::domain("--threads: must be >= 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::domain(format!("--threads: {e}")))?;
            pool.install(|| dispatch(&cli.command))
        }
        None => dispatch(&cli.command),
    }
}
