//! A small s = d sweep: run it, then fit the ratio and the power law.
//!
//! Writes `sweep.csv` and `sweep.csv.cells.csv` into the current directory.

use lrp::harness::{fit_loglog_ratio, fit_power_law, Metric, Regime};
use lrp::{run_experiment, ExperimentConfig};

const CONFIG: &str = r#"{
    "dims": [1],
    "sides": [1024, 2048, 4096, 8192, 16384],
    "exponents": [1],
    "betas": [1],
    "trials": 10,
    "seed": 2024,
    "metrics": {"diameter": "estimate", "descent": true},
    "out": "sweep.csv"
}"#;

fn main() -> lrp::Result<()> {
    let cfg = ExperimentConfig::from_json(CONFIG)?;
    let report = run_experiment(&cfg)?;
    println!("{} rows", report.records.len());
    for c in &report.cells {
        let diam = c.get(&report.psi, "diameter").unwrap();
        println!("N={:>6}  D mean {:.2} std {:.2} range {}..{}", c.n, diam.mean, diam.std, diam.min, diam.max);
    }

    let ratio = fit_loglog_ratio(&report.records, Regime::SEqualsD)?;
    println!("C(N) = D log log N / log N: mean {:.3}, spread {:.3}", ratio.estimate, ratio.spread.unwrap());
    let power = fit_power_law(&report.records, Metric::Diameter)?;
    println!("power-law slope {:.3} +- {:.3} (R^2 {:.3})", power.estimate, power.std_error, power.r_squared.unwrap());
    Ok(())
}
