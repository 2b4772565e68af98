use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::procedures::RenormPlan;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "LRP_WORKERS";

/// Pruned-search budget used by the `auto` diameter mode, in BFS runs.
pub const AUTO_BUDGET_SWEEPS: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DiameterMetric {
    /// Exact when cheap or when pruning finishes within budget, else estimate.
    #[default]
    Auto,
    Exact,
    Estimate,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MetricsConfig {
    pub diameter: DiameterMetric,
    pub estimate_sources: usize,
    pub budget_sweeps: u64,
    pub corner_path: bool,
    /// Cuts, isolated nodes and the 2-ball at the grid centre.
    pub structure: bool,
    pub descent: bool,
    pub renorm: bool,
    /// Fill `wall_ms`; off by default because timings break byte-identical reruns.
    pub record_timing: bool,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            diameter: DiameterMetric::Auto,
            estimate_sources: 16,
            budget_sweeps: AUTO_BUDGET_SWEEPS,
            corner_path: true,
            structure: false,
            descent: false,
            renorm: false,
            record_timing: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenormConfig {
    pub alpha: f64,
    pub m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DescentConfig {
    pub c: u32,
    /// `None` uses `⌈10·ln N / ln ln N⌉` per cell.
    pub max_steps: Option<usize>,
}

impl Default for DescentConfig {
    fn default() -> Self {
        Self {
            c: 2,
            max_steps: None,
        }
    }
}

/// A sweep over the cartesian product `dims × sides × exponents × betas`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dims: Vec<usize>,
    pub sides: Vec<u32>,
    pub exponents: Vec<f64>,
    pub betas: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    #[serde(default)]
    pub metrics: MetricsConfig,
    #[serde(default)]
    pub renorm: Option<RenormConfig>,
    #[serde(default)]
    pub descent: DescentConfig,
    #[serde(default)]
    pub tail_psi: Vec<f64>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

/// One grid point of the sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub d: usize,
    pub n: u32,
    pub s: f64,
    pub beta: f64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Cells in config order, `d` slowest and `β` fastest.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &d in &self.dims {
            for &n in &self.sides {
                for &s in &self.exponents {
                    for &beta in &self.betas {
                        out.push(Cell {
                            index: out.len(),
                            d,
                            n,
                            s,
                            beta,
                        });
                    }
                }
            }
        }
        out
    }

    /// Checks every cell, the renorm plan and the ψ list.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.cells().is_empty() {
            return Err(Error::Config("the sweep has no cells".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if let Some(&psi) = self.tail_psi.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
            return Err(Error::Config(format!("tail_psi values must lie in (0, 1), got {psi}")));
        }
        if self.descent.max_steps == Some(0) {
            return Err(Error::Config("descent.max_steps must be at least 1".into()));
        }
        if self.metrics.renorm && self.renorm.is_none() {
            return Err(Error::Config("metrics.renorm needs a renorm {alpha, m} block".into()));
        }
        for cell in self.cells() {
            let params = self.params(&cell).map_err(|e| {
                Error::Config(format!("cell d={} N={} s={} beta={}: {e}", cell.d, cell.n, cell.s, cell.beta))
            })?;
            if self.metrics.renorm {
                self.plan(&params).map_err(|e| {
                    Error::Config(format!("cell d={} N={} s={}: {e}", cell.d, cell.n, cell.s))
                })?;
            }
        }
        Ok(())
    }

    /// Model parameters of a cell; the graph seed is derived from the master
    /// seed and the cell index.
    pub fn params(&self, cell: &Cell) -> Result<ModelParams> {
        ModelParams::new(
            cell.d,
            cell.n,
            cell.s,
            cell.beta,
            crate::rng::mix2(self.seed, cell.index as u64),
        )
    }

    pub(crate) fn plan(&self, params: &ModelParams) -> Result<Option<RenormPlan>> {
        match (self.metrics.renorm, self.renorm) {
            (true, Some(r)) => RenormPlan::new(params, r.alpha, r.m).map(Some),
            _ => Ok(None),
        }
    }

    /// Explicit `workers`, then `LRP_WORKERS`, then the rayon default.
    pub fn resolved_workers(&self) -> Option<usize> {
        self.workers.or_else(|| {
            std::env::var(WORKERS_ENV)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .filter(|&w: &usize| w > 0)
        })
    }
}
