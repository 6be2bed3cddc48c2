//! Command-line front end for `sphereperc-core`.
//!
//! Angles are degrees on the command line and radians in every output
//! column named `*_rad`. Lengths are km throughout.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::CliError;

/// Worker-count cap. Affects speed only.
pub const THREADS_ENV: &str = "SPHEREPERC_THREADS";

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Config(format!(
            "{THREADS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("{THREADS_ENV}: {e}")))
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Layout(a) => commands::layout(a),
        Command::Hexgrid(a) => commands::hexgrid(a),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run(args: Vec<OsString>) -> ExitCode {
    let result = config::expand(args).and_then(|args| {
        let cli = match Cli::try_parse_from(args) {
            Ok(cli) => cli,
            Err(e) => {
                // Help and version go to stdout with status 0; usage errors exit 2.
                let _ = e.print();
                return Ok(Some(ExitCode::from(e.exit_code() as u8)));
            }
        };
        init_threads()?;
        dispatch(&cli).map(|()| None)
    });
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(code)) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
