use std::process::ExitCode;

use clap::Parser;
use lspec_cli::config::{Cli, ExperimentConfig};
use lspec_cli::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = ExperimentConfig::from_cli(cli).and_then(|c| lspec_cli::run(&c));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = match e {
                CliError::Validation(_) => "validation failed",
                CliError::Usage(_) => "error",
                CliError::Numerical(_) => "numerical failure",
            };
            eprintln!("lspec: {kind}: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
