//! `qpredict` — reproducible quantum-prediction reports from the command
//! line. Subcommands: `dice`, `epr`, `bell`, `measure`, `lattice`.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 numerical invariant
//! violation (an internal self-check failed).

mod args;
mod bell;
mod dice;
mod epr_run;
mod lattice_run;
mod measure;
mod output;
mod json_input;

use clap::Parser;
use std::process::ExitCode;

use args::{Cli, Command};
use output::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful exits, not usage errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let result = match &cli.command {
        Command::Dice(a) => dice::run(&cli.config, a),
        Command::Epr(a) => epr_run::run(&cli.config, a),
        Command::Bell(a) => bell::run(&cli.config, a),
        Command::Measure(a) => measure::run(&cli.config, a),
        Command::Lattice(a) => lattice_run::run(&cli.config, a),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical self-check failed: {msg}");
            ExitCode::from(2)
        }
    }
}
