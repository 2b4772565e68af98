//! Exact versus estimated diameter, and the corner-to-corner distance.

use std::time::Instant;

use lrp::{corner_path_length, estimate_diameter, exact_diameter, sample_graph, ModelParams};

fn main() -> lrp::Result<()> {
    for (d, n, s) in [(1, 4000, 1.0), (1, 4000, 1.5), (1, 4000, 2.5), (2, 60, 3.0), (2, 60, 5.0)] {
        let g = sample_graph(&ModelParams::new(d, n, s, 1.0, 7)?, 0)?;

        let t = Instant::now();
        let exact = exact_diameter(&g)?;
        let exact_time = t.elapsed();
        let t = Instant::now();
        let est = estimate_diameter(&g, 16);
        let est_time = t.elapsed();

        println!(
            "d={d} N={n} s={s}: D={} (witness {} - {}, {:.1?}), estimate {} <= D <= {} ({:.1?}), corner path {}",
            exact.value,
            exact.witness.0,
            exact.witness.1,
            exact_time,
            est.value,
            est.upper_bound,
            est_time,
            corner_path_length(&g)
        );
    }
    Ok(())
}
