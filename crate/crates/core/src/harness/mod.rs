//! Seeded parameter sweeps, CSV reports and scaling fits.
//!
//! Every trial is a pure function of `(master seed, cell index, trial)`, so
//! reports are byte-identical across reruns and worker counts.

mod config;
mod fit;
mod records;
mod runner;

pub use config::{
    Cell, DescentConfig, DiameterMetric, ExperimentConfig, MetricsConfig, RenormConfig,
    AUTO_BUDGET_SWEEPS, WORKERS_ENV,
};
pub use fit::{
    fit_loglog_ratio, fit_loglog_ratio_of, fit_power_law, loglog_of_means, power_law_of_means,
    FitKind, Metric, Regime, ScalingFit, MIN_DISTINCT_N,
};
pub use records::{
    aggregate, metric_names, read_records, record_header, write_aggregates, write_records,
    CellAggregate, RecordWriter, Summary, TrialRecord, BASE_COLUMNS,
};
pub use runner::{
    cells_path, run_experiment, run_experiment_to, simulate_trial, trial_diameter,
    ExperimentReport, AUTO_EXACT_NODES,
};
