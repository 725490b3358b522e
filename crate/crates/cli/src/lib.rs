//! The `nelab` command line: argument parsing, check dispatch and report output.

pub mod config;
pub mod emit;
pub mod run;
pub mod suite;

use nelab_core::NelabError;
use thiserror::Error;

pub use config::{parse_args, CheckKind, CheckParams, Format, Invocation, RunConfig, SuiteConfig};
pub use emit::{emit_report, emit_reports, CSV_HEADER};
pub use run::{execute, run};
pub use suite::{run_suite, SuiteOutcome};

pub const EXIT_USAGE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Clap(#[from] clap::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] NelabError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) if !e.use_stderr() => 0,
            CliError::Io(_) => EXIT_IO,
            _ => EXIT_USAGE,
        }
    }
}

/// Parse `argv`, run it and return the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let outcome = parse_args(argv).and_then(|inv| match inv {
        Invocation::Check(c) => run(&c),
        Invocation::Suite(c) => run_suite(&c).map(|o| o.exit_code()),
    });
    match outcome {
        Ok(code) => code,
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("nelab: {e}");
            e.exit_code()
        }
    }
}
