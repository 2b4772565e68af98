//! Long-range percolation on the grid `{0..N}^d`.
//!
//! Nearest neighbours are always joined; every other pair `x, y` is joined
//! independently with probability `1 - exp(-β / ||x - y||_1^s)`. The crate
//! samples such graphs, computes exact and estimated diameters, extracts
//! structural statistics, builds hierarchical connectivity certificates and
//! runs deterministic scaling experiments.
//!
//! ```
//! use lrp::{exact_diameter, sample_graph, ModelParams};
//!
//! let params = ModelParams::new(1, 200, 1.5, 1.0, 7)?;
//! let g = sample_graph(&params, 0)?;
//! let diam = exact_diameter(&g)?;
//! assert!(diam.value <= 200);
//! # Ok::<(), lrp::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod graphcore;
pub mod harness;
pub mod model;
pub mod procedures;
pub mod rng;
pub mod sampler;
pub mod structure;

pub use error::{Error, Result};
pub use graphcore::{
    all_source_diameter, bfs, corner_path_length, estimate_diameter, exact_diameter,
    exact_diameter_with, pruned_diameter, DiameterMode, DiameterOptions, DiameterResult,
    DistanceField,
};
pub use harness::{
    fit_loglog_ratio, fit_power_law, run_experiment, simulate_trial, ExperimentConfig,
    ExperimentReport, Metric, Regime, ScalingFit, TrialRecord,
};
pub use model::{
    edge_probability, grid_point, l1_distance, long_range_probability, node_id, origin_norm,
    GridPoint, ModelParams, NodeId,
};
pub use procedures::{
    descent_run, descent_step, descent_threshold, renorm_certificate, renorm_path,
    subcube_connected, CubeBox, DescentTrace, RenormCertificate, RenormPlan,
};
pub use sampler::{
    read_graph, sample_graph, sample_graph_coupled, write_graph, GridGraph, SamplerOptions,
};
pub use structure::{
    ball_size, cut_nodes, edge_length_histogram, interval_decomposition, isolated_nodes,
    structure_stats, tail_sum, EdgeLengthHistogram, IntervalDecomposition, StructureStats,
};
