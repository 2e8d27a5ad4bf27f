//! Run configuration: optional JSON file merged under command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Largest Fock dimension accepted.
pub const MAX_FOCK_DIM: usize = 4096;
/// Largest torus half-width accepted (window `[-2048, 2048]`).
pub const MAX_TORUS_HALF_WIDTH: usize = 2048;
/// Largest angle grid accepted.
pub const MAX_GRID: usize = 1 << 20;

pub const DEFAULT_DIM: usize = 64;
pub const DEFAULT_GRID: usize = 2048;
pub const DEFAULT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Settings file; every field is optional and has the same meaning as the
/// flag of the same name.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Subcommand the file is meant for; a mismatch is rejected.
    pub command: Option<String>,
    pub dim: Option<usize>,
    pub dims: Option<Vec<usize>>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub space: Option<String>,
    pub weight: Option<f64>,
    pub arcs: Option<String>,
    pub set: Option<String>,
    pub kind: Option<String>,
    pub mu: Option<String>,
    pub nu: Option<String>,
    pub tgrid: Option<Vec<f64>>,
    pub probe_angles: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }
}

/// Flag beats file beats default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Cap on matrix dimensions from `NUMPHASE_MAX_DIM`, if set.
fn env_cap() -> CliResult<Option<usize>> {
    match std::env::var("NUMPHASE_MAX_DIM") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Validation(format!("NUMPHASE_MAX_DIM = '{v}' is not a positive integer"))),
        Err(_) => Ok(None),
    }
}

/// Checks a Fock dimension against the hard limit and the environment cap.
pub fn check_fock_dim(dim: usize) -> CliResult<usize> {
    if dim == 0 || dim > MAX_FOCK_DIM {
        return Err(CliError::Validation(format!("dimension {dim} outside 1..={MAX_FOCK_DIM}")));
    }
    check_cap(dim)?;
    Ok(dim)
}

/// Checks a torus half-width `k` (window `[-k, k]`, dimension `2k+1`).
pub fn check_torus_half_width(k: usize) -> CliResult<usize> {
    if k > MAX_TORUS_HALF_WIDTH {
        return Err(CliError::Validation(format!("torus window [-{k}, {k}] exceeds [-{MAX_TORUS_HALF_WIDTH}, {MAX_TORUS_HALF_WIDTH}]")));
    }
    check_cap(2 * k + 1)?;
    Ok(k)
}

fn check_cap(matrix_dim: usize) -> CliResult<()> {
    if let Some(cap) = env_cap()? {
        if matrix_dim > cap {
            return Err(CliError::Validation(format!(
                "matrix dimension {matrix_dim} exceeds NUMPHASE_MAX_DIM = {cap}"
            )));
        }
    }
    Ok(())
}

pub fn check_tol(tol: f64) -> CliResult<f64> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(CliError::Validation(format!("tolerance {tol} must be positive")));
    }
    Ok(tol)
}

pub fn check_grid(grid: usize) -> CliResult<usize> {
    if grid == 0 || grid > MAX_GRID {
        return Err(CliError::Validation(format!("grid {grid} outside 1..={MAX_GRID}")));
    }
    Ok(grid)
}
