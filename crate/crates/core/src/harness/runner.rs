use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use log::{debug, info};
use rayon::prelude::*;

use super::config::{Cell, DiameterMetric, ExperimentConfig};
use super::records::{aggregate, write_aggregates, CellAggregate, RecordWriter, TrialRecord};
use crate::error::{Error, Result};
use crate::graphcore::{
    corner_path_length, estimate_diameter, exact_diameter, pruned_diameter, DiameterOptions,
    DiameterResult,
};
use crate::procedures::{default_max_steps, descent_run, renorm_certificate};
use crate::sampler::{sample_graph, GridGraph};
use crate::structure::{edge_length_histogram, structure_stats, tail_sum};

/// Node count up to which `auto` runs an unbudgeted exact diameter.
pub const AUTO_EXACT_NODES: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub psi: Vec<f64>,
    /// Canonical `(cell, trial)` order.
    pub records: Vec<TrialRecord>,
    pub cells: Vec<CellAggregate>,
}

impl ExperimentReport {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        super::records::write_records(w, &self.psi, &self.records)
    }

    pub fn write_cells_csv<W: Write>(&self, w: W) -> Result<()> {
        write_aggregates(w, &self.psi, &self.cells)
    }
}

/// `<out>.cells.csv`.
pub fn cells_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".cells.csv");
    PathBuf::from(s)
}

/// Diameter under the configured mode.
pub fn trial_diameter(g: &GridGraph, cfg: &ExperimentConfig) -> Result<Option<DiameterResult>> {
    let m = &cfg.metrics;
    Ok(match m.diameter {
        DiameterMetric::None => None,
        DiameterMetric::Exact => Some(exact_diameter(g)?),
        DiameterMetric::Estimate => Some(estimate_diameter(g, m.estimate_sources)),
        DiameterMetric::Auto => {
            let nodes = g.node_count();
            if nodes <= AUTO_EXACT_NODES {
                Some(exact_diameter(g)?)
            } else {
                let budget = DiameterOptions::budget_sweeps(nodes, m.budget_sweeps);
                match pruned_diameter(g, budget) {
                    Ok(r) => Some(r),
                    Err(Error::BudgetExceeded { .. }) => {
                        debug!("pruned search over budget on {nodes} nodes, estimating");
                        Some(estimate_diameter(g, m.estimate_sources))
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    })
}

/// Re-derives one row from `(config, cell, trial)` alone.
pub fn simulate_trial(cfg: &ExperimentConfig, cell: &Cell, trial: u64) -> Result<TrialRecord> {
    let start = Instant::now();
    let params = cfg.params(cell)?;
    let g = sample_graph(&params, trial)?;
    let m = &cfg.metrics;
    let mut rec = TrialRecord::new(cell.d, cell.n, cell.s, cell.beta, trial);
    rec.edges = g.long_edge_count() as u64;

    if let Some(diam) = trial_diameter(&g, cfg)? {
        rec.diameter = Some(diam.value);
        rec.diam_mode = Some(diam.mode.as_str().to_string());
    }
    if m.corner_path {
        rec.corner_path = Some(corner_path_length(&g));
    }
    if m.structure {
        let st = structure_stats(&g, params.center());
        rec.cuts = st.cut_nodes.map(|c| c as u64);
        rec.isolated = st.isolated_nodes.map(|c| c as u64);
        rec.ball2 = Some(st.ball2_size as u64);
    }
    if m.descent {
        let steps = cfg
            .descent
            .max_steps
            .unwrap_or_else(|| default_max_steps(params.n()));
        let trace = descent_run(&g, params.corner_far(), cfg.descent.c, steps)?;
        rec.descent_steps = trace.steps_to_threshold.map(|k| k as u64);
    }
    if let Some(plan) = cfg.plan(&params)? {
        rec.renorm_valid = Some(renorm_certificate(&g, &plan)?.valid);
    }
    if !cfg.tail_psi.is_empty() {
        let h = edge_length_histogram(&g);
        for &psi in &cfg.tail_psi {
            rec.tail_sums.push((psi, tail_sum(&h, psi, &params)?));
        }
    }
    if m.record_timing {
        rec.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(rec)
}

/// Runs the sweep, writing `cfg.out` and `<out>.cells.csv` when set.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    match &cfg.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| {
                Error::Config(format!("cannot write {}: {e}", path.display()))
            })?;
            let cells_file = File::create(cells_path(path))?;
            let report = run_experiment_to(cfg, Some(BufWriter::new(file)))?;
            report.write_cells_csv(BufWriter::new(cells_file))?;
            Ok(report)
        }
        None => run_experiment_to::<std::io::Sink>(cfg, None),
    }
}

/// Runs the sweep, streaming rows to `sink` in canonical order as they
/// complete. Trials run on a work-stealing pool; a reorder buffer on the
/// calling thread is the only writer.
pub fn run_experiment_to<W: Write>(
    cfg: &ExperimentConfig,
    sink: Option<W>,
) -> Result<ExperimentReport> {
    cfg.validate()?;
    let mut writer = sink.map(|w| RecordWriter::new(w, &cfg.tail_psi)).transpose()?;
    let cells = cfg.cells();
    let tasks: Vec<(Cell, u64)> = cells
        .iter()
        .flat_map(|c| (0..cfg.trials).map(move |t| (*c, t)))
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cfg.resolved_workers() {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    info!(
        "running {} cells x {} trials on {} workers",
        cells.len(),
        cfg.trials,
        pool.current_num_threads()
    );

    let cancel = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(usize, Result<TrialRecord>)>();
    let mut records = Vec::with_capacity(tasks.len());
    let mut failure = None;
    std::thread::scope(|scope| {
        let (tasks, cancel, pool) = (&tasks, &cancel, &pool);
        scope.spawn(move || {
            pool.install(|| {
                tasks
                    .par_iter()
                    .enumerate()
                    .for_each_with(tx, |tx, (i, (cell, trial))| {
                        if cancel.load(Ordering::Relaxed) {
                            return;
                        }
                        let _ = tx.send((i, simulate_trial(cfg, cell, *trial)));
                    });
            });
        });

        let mut pending = BTreeMap::new();
        for (i, result) in rx {
            match result {
                Ok(r) => {
                    pending.insert(i, r);
                }
                Err(e) => {
                    cancel.store(true, Ordering::Relaxed);
                    failure.get_or_insert(e);
                    break;
                }
            }
            while let Some(r) = pending.remove(&records.len()) {
                if let Some(w) = writer.as_mut() {
                    if let Err(e) = w.write(&r) {
                        cancel.store(true, Ordering::Relaxed);
                        failure.get_or_insert(e);
                    }
                }
                records.push(r);
            }
            if failure.is_some() {
                break;
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    if let Some(mut w) = writer {
        w.flush()?;
    }
    let cells = aggregate(&cfg.tail_psi, &records);
    Ok(ExperimentReport {
        psi: cfg.tail_psi.clone(),
        records,
        cells,
    })
}
