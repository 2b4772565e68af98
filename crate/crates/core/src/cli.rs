//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on runtime errors.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::graphcore::{
    corner_path_length, estimate_diameter, exact_diameter, pruned_diameter, DiameterOptions,
};
use crate::harness::{
    fit_loglog_ratio_of, fit_power_law, read_records, run_experiment_to, cells_path,
    write_aggregates, ExperimentConfig, Metric, RecordWriter, Regime, TrialRecord,
    AUTO_BUDGET_SWEEPS, AUTO_EXACT_NODES,
};
use crate::model::{ModelParams, NodeId};
use crate::procedures::{default_max_steps, descent_run, renorm_certificate, renorm_path, RenormPlan};
use crate::sampler::{read_graph_file, sample_graph, sample_graph_coupled, write_graph, GridGraph};
use crate::structure::{edge_length_histogram, interval_decomposition, structure_stats, tail_sum};

#[derive(Debug, Parser)]
#[command(name = "lrp", version, about = "Long-range percolation graphs on {0..N}^d")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample one graph and write it in lrp1 format.
    Generate(GenerateArgs),
    /// Print the diameter of a stored graph.
    Diameter(DiameterArgs),
    /// Structural statistics of a stored graph as one CSV row.
    Stats(StatsArgs),
    /// Greedy norm descent trace.
    Descent(DescentArgs),
    /// Renormalization certificate, optionally with an explicit path.
    Renorm(RenormArgs),
    /// Run a sweep from a JSON config.
    Experiment(ExperimentArgs),
    /// Scaling fit over a record CSV.
    Fit(FitArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub s: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub trial: u64,
    /// Use per-pair common random numbers (nested in beta).
    #[arg(long)]
    pub coupled: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiameterChoice {
    Auto,
    Exact,
    Estimate,
    /// Distance between the two extreme corners.
    Corner,
}

#[derive(Debug, Args)]
pub struct DiameterArgs {
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = DiameterChoice::Auto)]
    pub mode: DiameterChoice,
    /// BFS sources for the estimate.
    #[arg(long, default_value_t = 16)]
    pub sources: usize,
    /// Also print mode, witness pair and upper bound.
    #[arg(long)]
    pub details: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub graph: PathBuf,
    /// Tail-sum thresholds to report.
    #[arg(long, num_args = 1..)]
    pub psi: Vec<f64>,
    /// Print the `k,count` edge-length histogram instead.
    #[arg(long)]
    pub histogram: bool,
    /// Print the interval quotient summary for this block length (d = 1).
    #[arg(long)]
    pub interval: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DescentArgs {
    pub graph: PathBuf,
    /// Start node id; defaults to the far corner.
    #[arg(long)]
    pub start: Option<u32>,
    #[arg(long, default_value_t = 2)]
    pub c: u32,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenormArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub m: usize,
    /// Build an explicit path between two node ids.
    #[arg(long, num_args = 2, value_names = ["X", "Y"])]
    pub path: Option<Vec<u32>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config's `out`; `-` writes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the config and the LRP_WORKERS variable.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitRegime {
    /// Slope of log mean against log N.
    Power,
    /// Ratio mean·log log N / log N.
    #[value(name = "s=d", alias = "ratio")]
    SEqualsD,
    /// Slope of log mean against log log N.
    #[value(name = "intermediate", alias = "delta")]
    Intermediate,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub regime: FitRegime,
    #[arg(long, default_value = "diameter")]
    pub metric: String,
    /// Keep only rows with this d.
    #[arg(long)]
    pub d: Option<usize>,
    /// Keep only rows with this s.
    #[arg(long)]
    pub s: Option<f64>,
    /// Keep only rows with this beta.
    #[arg(long)]
    pub beta: Option<f64>,
}

/// Parses `args` (program name first) and runs the command.
pub fn run_with_output<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn run(args: impl IntoIterator<Item = String>) -> i32 {
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    run_with_output(args, &mut out, &mut err)
}

fn with_sink(path: &Option<PathBuf>, out: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        _ => f(out),
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Generate(a) => {
            let params = ModelParams::new(a.d, a.n, a.s, a.beta, a.seed)?;
            let g = if a.coupled {
                sample_graph_coupled(&params, a.trial)?
            } else {
                sample_graph(&params, a.trial)?
            };
            with_sink(&a.out, out, |w| write_graph(&g, w))
        }
        Command::Diameter(a) => diameter(a, out),
        Command::Stats(a) => stats(a, out),
        Command::Descent(a) => {
            let g = read_graph_file(&a.graph)?;
            let start = a.start.map(NodeId).unwrap_or_else(|| g.params().corner_far());
            let steps = a.max_steps.unwrap_or_else(|| default_max_steps(g.params().n()));
            let trace = descent_run(&g, start, a.c, steps)?;
            with_sink(&a.out, out, |w| Ok(write!(w, "{trace}")?))
        }
        Command::Renorm(a) => {
            let g = read_graph_file(&a.graph)?;
            let plan = RenormPlan::new(g.params(), a.alpha, a.m)?;
            let cert = renorm_certificate(&g, &plan)?;
            with_sink(&a.out, out, |w| {
                write!(w, "{cert}")?;
                if let Some(xy) = &a.path {
                    let path = renorm_path(&g, &cert, NodeId(xy[0]), NodeId(xy[1]))?;
                    let ids: Vec<String> = path.iter().map(|v| v.to_string()).collect();
                    writeln!(w, "path length={} {}", path.len() - 1, ids.join(" "))?;
                }
                Ok(())
            })
        }
        Command::Experiment(a) => {
            let mut cfg = ExperimentConfig::from_file(&a.config)?;
            if a.workers.is_some() {
                cfg.workers = a.workers;
            }
            if a.out.is_some() {
                cfg.out = a.out;
            }
            cfg.validate()?;
            match cfg.out.clone().filter(|p| p.as_os_str() != "-") {
                Some(path) => {
                    let file = File::create(&path)?;
                    let report = run_experiment_to(&cfg, Some(BufWriter::new(file)))?;
                    let cells = BufWriter::new(File::create(cells_path(&path))?);
                    write_aggregates(cells, &report.psi, &report.cells)?;
                    writeln!(
                        out,
                        "wrote {} rows to {}",
                        report.records.len(),
                        path.display()
                    )?;
                }
                None => {
                    run_experiment_to(&cfg, Some(&mut *out))?;
                }
            }
            Ok(())
        }
        Command::Fit(a) => {
            let metric: Metric = a.metric.parse()?;
            let (_, records) = read_records(BufReader::new(File::open(&a.input)?))?;
            let kept: Vec<TrialRecord> = records
                .into_iter()
                .filter(|r| a.d.is_none_or(|d| r.d == d))
                .filter(|r| a.s.is_none_or(|s| r.s == s))
                .filter(|r| a.beta.is_none_or(|b| r.beta == b))
                .collect();
            let fit = match a.regime {
                FitRegime::Power => fit_power_law(&kept, metric)?,
                FitRegime::SEqualsD => fit_loglog_ratio_of(&kept, Regime::SEqualsD, metric)?,
                FitRegime::Intermediate => {
                    fit_loglog_ratio_of(&kept, Regime::Intermediate, metric)?
                }
            };
            write!(out, "{fit}")?;
            Ok(())
        }
    }
}

fn diameter(a: DiameterArgs, out: &mut dyn Write) -> Result<()> {
    let g = read_graph_file(&a.graph)?;
    if a.mode == DiameterChoice::Corner {
        writeln!(out, "{}", corner_path_length(&g))?;
        return Ok(());
    }
    let r = match a.mode {
        DiameterChoice::Exact => exact_diameter(&g)?,
        DiameterChoice::Estimate => estimate_diameter(&g, a.sources),
        _ if g.node_count() <= AUTO_EXACT_NODES => exact_diameter(&g)?,
        _ => {
            let budget = DiameterOptions::budget_sweeps(g.node_count(), AUTO_BUDGET_SWEEPS);
            match pruned_diameter(&g, budget) {
                Err(Error::BudgetExceeded { .. }) => estimate_diameter(&g, a.sources),
                other => other?,
            }
        }
    };
    writeln!(out, "{}", r.value)?;
    if a.details {
        writeln!(out, "mode {}", r.mode.as_str())?;
        writeln!(out, "witness {} {}", r.witness.0, r.witness.1)?;
        writeln!(out, "upper_bound {}", r.upper_bound)?;
        writeln!(out, "sources {}", r.sources_used)?;
    }
    Ok(())
}

fn stats(a: StatsArgs, out: &mut dyn Write) -> Result<()> {
    let g: GridGraph = read_graph_file(&a.graph)?;
    let p = *g.params();
    let h = edge_length_histogram(&g);
    if a.histogram {
        return with_sink(&a.out, out, |w| Ok(write!(w, "{}", h.to_csv())?));
    }
    if let Some(len) = a.interval {
        let dec = interval_decomposition(&g, len)?;
        return with_sink(&a.out, out, |w| {
            writeln!(w, "intervals {}", dec.interval_count())?;
            writeln!(w, "isolated_intervals {}", dec.isolated_intervals.len())?;
            writeln!(w, "isolated_fraction {}", dec.isolated_fraction())?;
            Ok(())
        });
    }
    let st = structure_stats(&g, p.center());
    let mut rec = TrialRecord::new(p.d(), p.n(), p.s(), p.beta(), g.trial());
    rec.edges = g.long_edge_count() as u64;
    rec.corner_path = Some(corner_path_length(&g));
    rec.cuts = st.cut_nodes.map(|c| c as u64);
    rec.isolated = st.isolated_nodes.map(|c| c as u64);
    rec.ball2 = Some(st.ball2_size as u64);
    for &psi in &a.psi {
        rec.tail_sums.push((psi, tail_sum(&h, psi, &p)?));
    }
    with_sink(&a.out, out, |w| {
        let mut rw = RecordWriter::new(w, &a.psi)?;
        rw.write(&rec)?;
        rw.flush()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with_output(
            std::iter::once("lrp").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(cli(&["frobnicate"]).0, 1);
        assert_eq!(cli(&["generate", "--d", "1"]).0, 1);
        let (code, _, err) = cli(&["diameter", "x.lrp", "--bogus"]);
        assert_eq!(code, 1);
        assert!(err.contains("Usage"));
        assert_eq!(cli(&["--help"]).0, 0);
    }

    #[test]
    fn runtime_errors_exit_two() {
        let (code, _, err) = cli(&["diameter", "/nonexistent/g.lrp"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error:"));
        assert_eq!(cli(&["generate", "--d", "1", "--n", "10", "--s", "-1", "--beta", "1"]).0, 2);
    }

    #[test]
    fn generate_to_stdout() {
        let (code, out, _) = cli(&["generate", "--d", "1", "--n", "5", "--s", "2", "--beta", "0"]);
        assert_eq!(code, 0);
        assert_eq!(out, "lrp1 d=1 n=5 s=2 beta=0 seed=0 trial=0 edges=0\n");
    }
}
