//! Cut points, isolated nodes and interval blocks on the line.
use lrp::{cut_nodes, interval_decomposition, sample_graph, structure_stats, tail_sum, ModelParams};

fn main() -> lrp::Result<()> {
    let n = 1 << 14;
    for beta in [0.25, 0.5, 1.0] {
        let params = ModelParams::new(1, n, 2.0, beta, 3)?;
        let g = sample_graph(&params, 0)?;
        let stats = structure_stats(&g, params.center());
        let cuts = cut_nodes(&g)?;
        let blocks = interval_decomposition(&g, 128)?;
        let h = lrp::edge_length_histogram(&g);
        println!("beta={beta}");
        println!("  cut nodes       {} (first {:?})", cuts.count(), &cuts.positions[..cuts.count().min(5)]);
        println!("  isolated nodes  {:.4} of all", stats.isolated_fraction.unwrap());
        println!("  mean degree     {:.3}, max {}", stats.degree_mean, stats.degree_max);
        println!("  2-ball at {}  {}", stats.ball2_center, stats.ball2_size);
        println!("  isolated intervals of length 128: {:.3}", blocks.isolated_fraction());
        println!("  tail sum (psi=0.5)  {}", tail_sum(&h, 0.5, &params)?);
    }
    Ok(())
}
