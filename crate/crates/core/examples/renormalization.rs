//! Build a renormalization certificate and follow one of its explicit paths.

use lrp::procedures::{renorm_certificate, renorm_path, RenormPlan};
use lrp::{bfs, sample_graph, ModelParams, NodeId};

fn main() -> lrp::Result<()> {
    let n = 1 << 12;
    let plan_params = ModelParams::new(1, n, 1.2, 4.0, 0)?;
    let plan = RenormPlan::new(&plan_params, 0.8, 2)?;
    println!("sides {:?}, implied bound {}", plan.side_lengths(), plan.implied_bound());

    for trial in 0..5 {
        let g = sample_graph(&plan_params, trial)?;
        let cert = renorm_certificate(&g, &plan)?;
        print!("trial {trial}: {cert}");
        if cert.valid {
            let (x, y) = (NodeId(17), NodeId(n - 3));
            let path = renorm_path(&g, &cert, x, y)?;
            println!(
                "  path {x} -> {y}: {} hops (shortest {})",
                path.len() - 1,
                bfs(&g, x).get(y)
            );
        }
    }
    Ok(())
}
