use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Spectrum,
    Counting,
    Extremes,
    Norm,
    Validate,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Counting => "counting",
            Command::Extremes => "extremes",
            Command::Norm => "norm",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Spectra of generalized Hilbert L-matrices L_n(nu) = (1/(max(i,j)+nu)).
#[derive(Debug, Parser)]
#[command(name = "lspec", version)]
pub struct Cli {
    pub command: Command,

    /// Matrix size.
    #[arg(long, conflicts_with = "n_grid")]
    pub n: Option<usize>,

    /// Comma-separated matrix sizes.
    #[arg(long, value_delimiter = ',')]
    pub n_grid: Option<Vec<usize>>,

    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub nu: f64,

    /// Eigenvalue threshold in (0, 4).
    #[arg(long, conflicts_with = "x_grid")]
    pub x: Option<f64>,

    /// Comma-separated thresholds.
    #[arg(long, value_delimiter = ',')]
    pub x_grid: Option<Vec<f64>>,

    /// Eigenvalue indices for `extremes` (at most 20).
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub j_list: Vec<usize>,

    /// Highest expansion order (extremes: 1..=3, norm: 1..=4).
    #[arg(long)]
    pub order: Option<usize>,

    /// Absolute eigenvalue tolerance (relative below 1).
    #[arg(long, default_value_t = 1e-13)]
    pub tol: f64,

    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Write the table here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Seed for the randomized checks of `validate`.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Calibration file for `validate` (defaults to the built-in copy).
    #[arg(long)]
    pub calibration: Option<PathBuf>,

    /// Relative perturbation applied to the reference constants of `validate`.
    #[arg(long, hide = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub perturb_constant: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub n_grid: Vec<usize>,
    pub nu: f64,
    pub thresholds: Vec<f64>,
    pub j_list: Vec<usize>,
    pub order: Option<usize>,
    pub tol: f64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub seed: Option<u64>,
    pub calibration: Option<PathBuf>,
    pub perturb_constant: f64,
}

fn default_n_grid(command: Command) -> Vec<usize> {
    match command {
        Command::Spectrum => vec![10],
        Command::Counting | Command::Norm => vec![10_000, 100_000, 1_000_000],
        Command::Extremes => vec![1_000, 10_000, 100_000],
        Command::Validate => vec![],
    }
}

impl ExperimentConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let n_grid = match (cli.n, cli.n_grid) {
            (Some(n), _) => vec![n],
            (None, Some(g)) => g,
            (None, None) => default_n_grid(cli.command),
        };
        let thresholds = match (cli.x, cli.x_grid) {
            (Some(x), _) => vec![x],
            (None, Some(g)) => g,
            (None, None) => vec![1.0, 2.0, 3.0],
        };
        let config = Self {
            command: cli.command,
            n_grid,
            nu: cli.nu,
            thresholds,
            j_list: cli.j_list,
            order: cli.order,
            tol: cli.tol,
            output_format: cli.format,
            output_path: cli.output,
            seed: cli.seed,
            calibration: cli.calibration,
            perturb_constant: cli.perturb_constant,
        };
        config.check()?;
        Ok(config)
    }

    fn check(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.command != Command::Validate && self.n_grid.is_empty() {
            return usage("the n grid is empty".into());
        }
        if self.n_grid.contains(&0) {
            return usage("n must be positive".into());
        }
        if self.thresholds.is_empty() {
            return usage("the threshold grid is empty".into());
        }
        if self.j_list.is_empty() || self.j_list.contains(&0) {
            return usage("--j-list needs positive indices".into());
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return usage(format!("--tol must be positive, got {}", self.tol));
        }
        if !self.nu.is_finite() {
            return usage(format!("--nu must be finite, got {}", self.nu));
        }
        Ok(())
    }
}
