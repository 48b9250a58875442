//! Front end for the `lspec` binary: argument handling, the experiment
//! commands, table output and the validation suite.

pub mod calibration;
pub mod commands;
pub mod config;
pub mod table;
pub mod validate;

use std::fs::File;
use std::io::{BufWriter, Write};

use config::{Command, ExperimentConfig};

/// Failure classes, one per nonzero exit code.
#[derive(Debug)]
pub enum CliError {
    /// Some validation check failed.
    Validation(String),
    Usage(String),
    /// Root bracketing, series or iteration budget failures.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Usage(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<lspec_core::Error> for CliError {
    fn from(e: lspec_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

fn emit(config: &ExperimentConfig, table: &table::Table) -> Result<(), CliError> {
    let io = |e: anyhow::Error| CliError::Usage(format!("cannot write output: {e:#}"));
    match &config.output_path {
        Some(path) => {
            let file = File::create(path).map_err(|e| io(anyhow::Error::new(e).context(path.display().to_string())))?;
            let mut w = BufWriter::new(file);
            table.write(config.output_format, &mut w).map_err(io)?;
            w.flush().map_err(|e| io(e.into()))
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            table.write(config.output_format, &mut w).map_err(io)
        }
    }
}

/// Runs one command end to end and writes its table.
pub fn run(config: &ExperimentConfig) -> Result<(), CliError> {
    let table = match config.command {
        Command::Spectrum => commands::cmd_spectrum(config)?,
        Command::Counting => commands::cmd_counting(config)?,
        Command::Extremes => commands::cmd_extremes(config)?,
        Command::Norm => commands::cmd_norm(config)?,
        Command::Validate => {
            let cal = calibration::Calibration::load(config.calibration.as_deref())?;
            let report = validate::run(config.seed.unwrap_or(0), cal, config.perturb_constant)?;
            emit(config, &report.table())?;
            let failed: Vec<&str> = report
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| c.name.as_str())
                .collect();
            eprintln!(
                "validate: {}/{} checks passed",
                report.checks.len() - failed.len(),
                report.checks.len()
            );
            if report.all_pass() {
                return Ok(());
            }
            return Err(CliError::Validation(format!("failed checks: {}", failed.join(", "))));
        }
    };
    emit(config, &table)
}
