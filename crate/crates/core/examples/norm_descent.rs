//! Greedy two-hop descent toward the origin from the far corner.
use lrp::procedures::{default_max_steps, descent_run};
use lrp::{sample_graph, ModelParams};

fn main() -> lrp::Result<()> {
    for (d, n) in [(1usize, 1u32 << 16), (2, 200)] {
        let params = ModelParams::new(d, n, d as f64, 1.0, 11)?;
        let g = sample_graph(&params, 0)?;
        let trace = descent_run(&g, params.corner_far(), 2, default_max_steps(n))?;
        println!("d={d} N={n}: threshold {:.2}, reached after {:?} steps", trace.threshold, trace.steps_to_threshold);
        for (id, norm) in trace.chain.iter().zip(&trace.norms) {
            println!("  {id:>8}  norm {norm}");
        }
    }
    Ok(())
}
