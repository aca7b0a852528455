//! `transmute`: command-line front end.
//!
//! Each command writes its CSV fields and a `report.json` into `--out` and
//! prints the report on stdout. Failures print `{"error": {...}}` on stderr
//! and exit non-zero: 1 for a failed check, 2 for bad input, 3 for a
//! numerical failure, 4 for I/O.
//!
//! `TRANSMUTE_THREADS` sets the worker thread count.

mod bvp;
mod commands;
mod config;
mod error;
mod output;
mod verify;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::config::{Cli, Command};
use crate::error::{CliError, CliResult};

const THREADS_VAR: &str = "TRANSMUTE_THREADS";

fn init_threads() -> CliResult<()> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_VAR} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(e.to_string()))
}

fn load_config(path: &std::path::Path) -> CliResult<Command> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn dispatch(cmd: &Command) -> CliResult<commands::Done> {
    if let Command::Run { config } = cmd {
        return dispatch(&load_config(config)?);
    }
    let config = serde_json::to_value(cmd).expect("config serializes");
    match cmd {
        Command::Basis(a) => commands::basis(a, &config),
        Command::Spps(a) => commands::spps(a, &config),
        Command::Kernel(a) => commands::kernel(a, &config),
        Command::Family(a) => commands::family(a, &config),
        Command::SolveBvp(a) => bvp::solve(a, &config),
        Command::Verify(a) => verify::verify(a, &config),
        Command::Run { .. } => unreachable!("handled above"),
    }
}

fn run() -> CliResult<bool> {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help, --version
            let _ = e.print();
            return Ok(true);
        }
        Err(e) => return Err(CliError::Validation(e.render().to_string().trim_end().to_string())),
    };
    init_threads()?;
    let done = dispatch(&cli.command)?;
    let text = serde_json::to_string_pretty(&done.report).expect("report serializes");
    // a closed pipe (e.g. `| head`) is not an error
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    Ok(done.ok)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
