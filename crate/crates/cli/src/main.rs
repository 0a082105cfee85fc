//! `tdq`: batch driver for the tdq toolkit.
//!
//! Exit status: 0 on success, 1 when a checked invariant fails, 2 for usage
//! errors, 3 for I/O errors.

mod args;
mod commands;
mod error;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, ExpsumCommand};
use commands::Context;
use error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = Context { seed: cli.seed, sieve_limit: cli.sieve_limit };
    let outcome = match &cli.command {
        Command::Constant(a) => commands::constant(&ctx, a)?,
        Command::STable(a) => commands::s_table(&ctx, a)?,
        Command::Expsum { action: ExpsumCommand::Verify(a) } => commands::expsum_verify(&ctx, a)?,
        Command::Sum(a) => commands::sum(&ctx, a)?,
        Command::Decompose(a) => commands::decompose(&ctx, a)?,
        Command::Pairs(a) => commands::pairs(&ctx, a)?,
    };
    let format = cli.format.unwrap_or(outcome.default_format);
    report::emit(&outcome.doc, format, cli.out.as_deref())?;
    match outcome.failure {
        Some(reason) => Err(CliError::Invariant(reason)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tdq: {e}");
            e.exit_code()
        }
    }
}
