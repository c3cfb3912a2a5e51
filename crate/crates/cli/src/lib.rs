//! Command-line front end: analytic states and measurements, tradeoff and
//! figure data, Monte Carlo runs and a self-check report.

pub mod args;
pub mod commands;
pub mod output;
pub mod verify;

use clap::Parser;

pub use args::{Cli, Command};

/// Text produced by a command and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), code: 0 }
    }
}

/// Exit code for a library error: inconsistencies inside the library are
/// reported as failures (1), everything else is bad input (2).
fn error_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<seqclass::Error>() {
        Some(seqclass::Error::Internal(_)) => 1,
        _ => 2,
    }
}

pub fn run(cli: Cli) -> Outcome {
    match commands::dispatch(cli.command) {
        Ok(out) => out,
        Err(err) => Outcome { stdout: String::new(), stderr: format!("error: {err:#}\n"), code: error_code(&err) },
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(err) => {
            let code = err.exit_code();
            let text = err.render().to_string();
            if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            }
        }
    }
}
