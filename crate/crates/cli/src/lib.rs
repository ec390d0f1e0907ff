//! The `bqst` command line: every computation of `bqst-core` as a
//! deterministic subcommand emitting CSV or JSON.
//!
//! Exit codes: 0 on success, 1 on bad arguments or domain errors, 2 when
//! `verify` finds a violated invariant.

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub mod args;
mod commands;
pub mod output;
mod verify;

use args::{Cli, Command, Format};
use output::Document;

/// Environment variable that overrides `--threads`.
pub const THREADS_ENV: &str = "BQST_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] bqst_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

/// Runs with the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(
        argv,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

/// Runs with explicit output and diagnostic streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn thread_count(cli: &Cli) -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!("{THREADS_ENV} must be a thread count, got {v:?}"))
        }),
        Err(_) => Ok(cli.threads.unwrap_or(0)),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(cli)?)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let (doc, code) = pool.install(|| dispatch(cli))?;

    let mut buf = Vec::new();
    match cli.format {
        Format::Csv => doc.write_csv(&mut buf)?,
        Format::Json => doc.write_json(&mut buf)?,
    }
    match &cli.output {
        Some(path) => std::fs::write(path, &buf)?,
        None => out.write_all(&buf)?,
    }
    Ok(code)
}

fn dispatch(cli: &Cli) -> Result<(Document, i32), CliError> {
    let doc = match &cli.command {
        Command::Spectrum(a) => commands::spectrum(a)?,
        Command::Amplitude(a) => commands::amplitude(a)?,
        Command::Optimize(a) => commands::optimize_cmd(a, cli.format)?,
        Command::FidelityMap(a) => commands::fidelity_map_cmd(a)?,
        Command::Asymptotic(a) => commands::asymptotic(a)?,
        Command::Dynamics(a) => commands::dynamics(a)?,
        Command::Verify(a) => {
            let (doc, passed) = verify::verify(a.n_max, a.cases)?;
            return Ok((doc, if passed { 0 } else { 2 }));
        }
    };
    Ok((doc, 0))
}
