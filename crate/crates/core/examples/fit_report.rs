//! Fit a stored record CSV: `cargo run --example fit_report -- sweep.csv cuts`.
use std::fs::File;

use lrp::harness::{fit_power_law, read_records, Metric};

fn main() -> lrp::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "sweep.csv".into());
    let metric: Metric = args.next().as_deref().unwrap_or("diameter").parse()?;
    let (_, records) = read_records(File::open(&path)?)?;
    print!("{}", fit_power_law(&records, metric)?);
    Ok(())
}
