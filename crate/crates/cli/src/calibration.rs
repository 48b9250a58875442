use std::path::Path;

use serde::Deserialize;

use crate::CliError;

pub const BUILTIN: &str = include_str!("../calibration.toml");

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    pub counting: Counting,
    pub small_eigs: SmallEigs,
    pub large_eigs: LargeEigs,
    pub expansion: Expansion,
    pub remainder: Remainder,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counting {
    pub n_grid: Vec<usize>,
    pub nu: Vec<f64>,
    pub x_abs: Vec<f64>,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmallEigs {
    pub n_grid: Vec<usize>,
    pub nu: Vec<f64>,
    pub j: Vec<usize>,
    pub rel_tol: f64,
    #[serde(default)]
    pub monotone_exempt: Vec<(f64, f64)>,
}

impl SmallEigs {
    pub fn is_exempt(&self, nu: f64, j: usize) -> bool {
        self.monotone_exempt
            .iter()
            .any(|&(e_nu, e_j)| e_nu == nu && e_j == j as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LargeEigs {
    pub n_grid: Vec<usize>,
    pub j: Vec<usize>,
    pub orders: Vec<usize>,
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expansion {
    pub log_n: Vec<f64>,
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Remainder {
    pub n_grid: Vec<usize>,
    pub factor: f64,
}

impl Calibration {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("bad calibration file: {e}")))
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("built-in calibration parses")
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::builtin()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }
}
