mod common;

use lrp::{
    all_source_diameter, ball_size, bfs, corner_path_length, cut_nodes, estimate_diameter,
    exact_diameter, isolated_nodes, pruned_diameter, sample_graph, DiameterMode, GridGraph,
    ModelParams,
};
use proptest::prelude::*;

fn graph(d: usize, n: u32, s: f64, beta: f64, seed: u64) -> GridGraph {
    sample_graph(&ModelParams::new(d, n, s, beta, seed).unwrap(), 0).unwrap()
}

#[test]
fn diameters_match_naive_all_pairs() {
    for seed in 0..60u64 {
        let d = 1 + (seed % 2) as usize;
        let n = if d == 1 { 20 + (seed % 40) as u32 } else { 3 + (seed % 8) as u32 };
        let g = graph(d, n, 0.8 + (seed % 5) as f64 * 0.5, 0.3 * (seed % 6) as f64, seed);
        let want = common::naive_diameter(&g);
        assert_eq!(all_source_diameter(&g).value, want);
        let pruned = pruned_diameter(&g, None).unwrap();
        assert_eq!(pruned.value, want);
        assert_eq!(exact_diameter(&g).unwrap().value, want);
        let (a, b) = pruned.witness;
        assert_eq!(bfs(&g, a).get(b), want);
        let est = estimate_diameter(&g, 4);
        assert!(est.value <= want && want <= est.upper_bound);
        if est.mode == DiameterMode::Exact {
            assert_eq!(est.value, want);
        }
    }
}

#[test]
fn bfs_matches_queue_oracle() {
    for seed in 0..20u64 {
        let g = graph(2, 9, 2.0, 1.5, seed);
        let adj = common::adjacency(&g);
        for src in [0u32, 17, 50, 99] {
            let want: Vec<u32> = common::naive_bfs(&adj, src).into_iter().map(|d| d.unwrap()).collect();
            assert_eq!(bfs(&g, common::node(src)).dist, want);
        }
        let far = g.params().corner_far().0;
        assert_eq!(corner_path_length(&g), common::naive_bfs(&adj, 0)[far as usize].unwrap());
    }
}

#[test]
fn line_statistics_match_brute_force() {
    for seed in 0..40u64 {
        let g = graph(1, 60, 1.8, 0.6, seed);
        let n = 60u32;
        let edges = g.long_edges();
        let cuts: Vec<u32> = (1..n)
            .filter(|&i| !edges.iter().any(|&(a, b)| a < i && i < b))
            .collect();
        assert_eq!(cut_nodes(&g).unwrap().positions, cuts);
        let iso = (0..=n)
            .filter(|&i| !edges.iter().any(|&(a, b)| a == i || b == i))
            .count();
        assert_eq!(isolated_nodes(&g).unwrap(), iso);
        let adj = common::adjacency(&g);
        for c in [0, 30, 60] {
            let dist = common::naive_bfs(&adj, c);
            let want = dist.iter().filter(|d| d.unwrap() <= 2).count();
            assert_eq!(ball_size(&g, common::node(c), 2), want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pruned_equals_all_source(seed in 0u64..1_000_000, n in 10u32..120, s in 0.5f64..4.0, beta in 0.0f64..3.0) {
        let g = graph(1, n, s, beta, seed);
        prop_assert_eq!(pruned_diameter(&g, None).unwrap().value, all_source_diameter(&g).value);
    }

    #[test]
    fn estimate_brackets_exact(seed in 0u64..1_000_000, n in 3u32..14, k in 1usize..8) {
        let g = graph(2, n, 2.5, 1.0, seed);
        let exact = all_source_diameter(&g).value;
        let est = estimate_diameter(&g, k);
        prop_assert!(est.value <= exact);
        prop_assert!(exact <= est.upper_bound);
    }
}
