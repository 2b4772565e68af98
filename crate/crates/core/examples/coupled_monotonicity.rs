// Common random numbers make edge sets nested in beta, so the diameter of
// one realisation can only fall as beta grows.
use lrp::{exact_diameter, sample_graph_coupled, ModelParams};

fn main() -> lrp::Result<()> {
    let base = ModelParams::new(1, 512, 2.0, 0.0, 5)?;
    for trial in 0..4 {
        let mut line = format!("trial {trial}:");
        for beta in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let g = sample_graph_coupled(&base.with_beta(beta)?, trial)?;
            let d = exact_diameter(&g)?.value;
            line.push_str(&format!("  b={beta} E={} D={d}", g.long_edge_count()));
        }
        println!("{line}");
    }
    Ok(())
}
