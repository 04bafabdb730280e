//! Validated run settings shared by the commands and the harnesses.

use slr_core::model_selection::{default_grid, normalize_grid};
use slr_core::{ClusterMethod, SimConfig};

use crate::error::{CliError, Result};

/// Grid of screening sizes as given on the command line.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum GridSpec {
    /// Even sizes up to `min(p, 30)`, plus `p` itself when `p ≤ 30`.
    #[default]
    Default,
    List(Vec<usize>),
}

impl GridSpec {
    /// Accepts `default`, a list `2,4,6`, or a range `start:end[:step]`
    /// (inclusive end).
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() || spec.eq_ignore_ascii_case("default") {
            return Ok(GridSpec::Default);
        }
        let bad = || CliError::InvalidArgument(format!("cannot parse grid {spec:?}"));
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
        if spec.contains(':') {
            let parts: Vec<&str> = spec.split(':').collect();
            let (start, end, step) = match parts.as_slice() {
                [a, b] => (num(a)?, num(b)?, 1),
                [a, b, c] => (num(a)?, num(b)?, num(c)?),
                _ => return Err(bad()),
            };
            if step == 0 || start > end {
                return Err(bad());
            }
            return Ok(GridSpec::List((start..=end).step_by(step).collect()));
        }
        let list = spec.split(',').map(num).collect::<Result<Vec<_>>>()?;
        Ok(GridSpec::List(list))
    }

    /// Concrete, sorted, de-duplicated grid for `p` variables.
    pub fn resolve(&self, p: usize) -> Result<Vec<usize>> {
        match self {
            GridSpec::Default => Ok(default_grid(p)),
            GridSpec::List(list) => Ok(normalize_grid(list, p)?),
        }
    }
}

pub fn check_pseudocount(pc: Option<f64>) -> Result<Option<f64>> {
    match pc {
        Some(v) if !(v.is_finite() && v > 0.0) => Err(CliError::InvalidArgument(format!(
            "--pseudocount must be > 0, got {v}"
        ))),
        other => Ok(other),
    }
}

pub fn check_split(split: f64) -> Result<f64> {
    if split > 0.0 && split < 1.0 {
        Ok(split)
    } else {
        Err(CliError::InvalidArgument(format!(
            "--split must lie strictly between 0 and 1, got {split}"
        )))
    }
}

/// Cross-validation settings used inside every replication.
#[derive(Debug, Clone, PartialEq)]
pub struct CvSettings {
    pub folds: usize,
    pub grid: GridSpec,
    pub method: ClusterMethod,
}

impl Default for CvSettings {
    fn default() -> Self {
        Self {
            folds: 10,
            grid: GridSpec::Default,
            method: ClusterMethod::Spectral,
        }
    }
}

/// Simulation benchmark: `reps` independent train/test pairs from `sim`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sim: SimConfig,
    pub reps: usize,
    pub cv: CvSettings,
    /// Test-set size; defaults to the training size.
    pub test_n: Option<usize>,
    /// Shuffle training labels (negative control).
    pub permute_labels: bool,
    /// Include wall-clock fit times (makes output run-dependent).
    pub timing: bool,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(CliError::InvalidArgument("--reps must be ≥ 1".into()));
        }
        if self.test_n == Some(0) {
            return Err(CliError::InvalidArgument("--test-n must be ≥ 1".into()));
        }
        self.sim.validate()?;
        Ok(())
    }
}

/// Repeated train/test splits of one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityConfig {
    pub reps: usize,
    pub split: f64,
    pub cv: CvSettings,
    pub seed: u64,
}

impl StabilityConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(CliError::InvalidArgument("--reps must be ≥ 1".into()));
        }
        check_split(self.split)?;
        Ok(())
    }
}
