//! Sample a graph, summarise its long edges and write it in lrp1 format.
//!
//!     cargo run --example sample_graph -- 2 64 3.0 1.5 out.lrp

use std::env;

use lrp::sampler::write_graph_file;
use lrp::{edge_length_histogram, sample_graph, ModelParams};

fn main() -> lrp::Result<()> {
    let args: Vec<String> = env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let d: usize = arg(0, "1").parse().expect("d");
    let n: u32 = arg(1, "1000").parse().expect("N");
    let s: f64 = arg(2, "1.5").parse().expect("s");
    let beta: f64 = arg(3, "1").parse().expect("beta");

    let params = ModelParams::new(d, n, s, beta, 42)?;
    let g = sample_graph(&params, 0)?;
    println!(
        "d={d} N={n} s={s} beta={beta}: {} nodes, {} long edges, {} edges total",
        g.node_count(),
        g.long_edge_count(),
        g.edge_count()
    );

    let h = edge_length_histogram(&g);
    println!("longest edge {}", h.max_length());
    for k in [2, 3, 4, 8, 16, 64] {
        if k <= h.max_length() {
            println!("  L({k}) = {}", h.get(k));
        }
    }

    if let Some(path) = args.get(4) {
        write_graph_file(&g, path)?;
        println!("wrote {path}");
    }
    Ok(())
}
