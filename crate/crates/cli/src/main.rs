//! `gridctl`: exact controllability and observability analysis of grid
//! graphs. Exit codes: 0 controllable (or command success), 3 not
//! controllable, 1 usage error, 2 internal or precision error.

mod args;
mod commands;
mod error;
mod render;
mod report;

use clap::error::ErrorKind;
use clap::Parser;
use gridctl_core::Precision;

use crate::args::{Cli, Command};
use crate::error::CliError;

/// Working precision from `GRIDCTL_PRECISION_DIGITS` (default 30 digits).
fn precision_from_env() -> Result<Precision, CliError> {
    match std::env::var("GRIDCTL_PRECISION_DIGITS") {
        Err(_) => Ok(Precision::default()),
        Ok(s) => {
            let digits: u32 = s.trim().parse().map_err(|_| {
                CliError::Usage(format!(
                    "GRIDCTL_PRECISION_DIGITS=\"{s}\" is not a decimal digit count"
                ))
            })?;
            Ok(Precision::new(digits)?)
        }
    }
}

fn dispatch() -> Result<(i32, String), CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return Ok((code, String::new()));
        }
    };
    let prec = precision_from_env()?;
    match &cli.command {
        Command::Analyze(a) => commands::analyze("analyze", a, false, &prec),
        Command::Verify(a) => commands::analyze("verify", a, true, &prec),
        Command::Partition(a) => commands::partition(a, &prec),
        Command::Suggest(a) => commands::suggest(a, &prec),
        Command::Spectrum(a) => commands::spectrum(a, &prec),
        Command::ScanConjecture(a) => commands::scan_conjecture(a, &prec),
    }
}

fn main() {
    let code = match dispatch() {
        Ok((code, output)) => {
            print!("{output}");
            code
        }
        Err(err) => {
            eprintln!("error: {}", err.message());
            err.exit_code()
        }
    };
    std::process::exit(code);
}
