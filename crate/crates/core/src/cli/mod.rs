//! Command-line front end: parses a [`RunConfig`], runs one pipeline and
//! writes a JSON [`Report`].
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or a
//! computation errors, 2 on usage errors, 3 when a resource limit stops the
//! run (a partial report is still written).

mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use thiserror::Error;

pub use config::{Command, RunConfig};
pub use report::{Check, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("computation failed: {0}")]
    Compute(String),
}

/// What a finished run produced.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

/// Runs the pipeline for `config`. Resource and computation errors are folded
/// into the report as failed checks; only I/O is left to the caller.
pub fn execute(config: &RunConfig) -> Outcome {
    let mut report = Report::new(config);
    let result = match config.threads {
        0 => commands::dispatch(config, &mut report),
        t => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| commands::dispatch(config, &mut report)),
            Err(e) => Err(CliError::Compute(e.to_string())),
        },
    };
    let exit_code = match result {
        Ok(()) if report.passed() => EXIT_PASS,
        Ok(()) => EXIT_FAIL,
        Err(e) => {
            let code = match e {
                CliError::Resource(_) => EXIT_RESOURCE,
                CliError::Usage(_) => EXIT_USAGE,
                _ => EXIT_FAIL,
            };
            report.check("completed", false, serde_json::json!({ "error": e.to_string() }));
            code
        }
    };
    Outcome { report, exit_code }
}

/// Parses `args` (including the program name), runs, writes the report and
/// returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::from_args(args) {
        Ok(c) => c,
        Err(config::ParseOutcome::Exit(code)) => return code,
        Err(config::ParseOutcome::Error(e)) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = execute(&config);
    if let Err(e) = outcome.report.write_atomic(&config.out) {
        eprintln!("error: {e}");
        return EXIT_FAIL;
    }
    for c in outcome.report.checks.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {}", c.name);
    }
    eprintln!("wrote {}", config.out.display());
    outcome.exit_code
}
