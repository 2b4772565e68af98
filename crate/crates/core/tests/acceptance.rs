//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run a subset with `cargo test --test acceptance -- 3 5`.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use lrp::graphcore::bfs;
use lrp::harness::{fit_loglog_ratio, fit_loglog_ratio_of, run_experiment_to, Metric, Regime};
use lrp::procedures::{descent_run, renorm_certificate, renorm_path, RenormPlan};
use lrp::sampler::{enumerate_offsets, sample_graph_coupled};
use lrp::{
    all_source_diameter, exact_diameter, fit_power_law, isolated_nodes, pruned_diameter,
    sample_graph, ExperimentConfig, GridGraph, ModelParams, NodeId, TrialRecord,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn params(d: usize, n: u32, s: f64, beta: f64, seed: u64) -> ModelParams {
    ModelParams::new(d, n, s, beta, seed).unwrap()
}

fn minutes(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

/// Sample variance of a sum of independent Bernoulli(p_i): its variance is
/// `(mu4 - sigma^4 (T-3)/(T-1)) / T` with cumulants adding across pairs.
fn variance_of_sample_variance(kappa2: f64, kappa4: f64, t: f64) -> f64 {
    let mu4 = kappa4 + 3.0 * kappa2 * kappa2;
    (mu4 - kappa2 * kappa2 * (t - 3.0) / (t - 1.0)) / t
}

fn criterion_1() -> Outcome {
    let trials = 10_000u64;
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for (d, n) in [(1usize, 12u32), (2, 4)] {
        let p = params(d, n, 1.5, 1.0, 101 + d as u64);
        let classes: Vec<_> = enumerate_offsets(&p).collect();
        let oracle = common::offset_classes(&p);
        let skip: Vec<GridGraph> = (0..trials).into_par_iter().map(|t| sample_graph(&p, t).unwrap()).collect();
        let coupled: Vec<f64> = (0..trials)
            .into_par_iter()
            .map(|t| sample_graph_coupled(&p, t).unwrap().long_edge_count() as f64)
            .collect();
        let per_trial: Vec<_> = skip.iter().map(common::class_counts).collect();
        for c in &classes {
            let (m, q) = oracle[&c.delta];
            let (mean_o, var_o) = (m as f64 * q, m as f64 * q * (1.0 - q));
            let xs: Vec<f64> = per_trial
                .iter()
                .map(|pc| pc.get(&c.delta).copied().unwrap_or(0) as f64)
                .collect();
            let (mean, var) = common::mean_var(&xs);
            let z_mean = (mean - mean_o).abs() / (var_o / trials as f64).sqrt();
            let k4 = var_o * (1.0 - 6.0 * q * (1.0 - q));
            let z_var = (var - var_o).abs() / variance_of_sample_variance(var_o, k4, trials as f64).sqrt();
            worst = worst.max(z_mean).max(z_var);
        }
        let (k2, k4): (f64, f64) = oracle.values().fold((0.0, 0.0), |(a, b), &(m, q)| {
            let v = m as f64 * q * (1.0 - q);
            (a + v, b + v * (1.0 - 6.0 * q * (1.0 - q)))
        });
        let totals: Vec<f64> = skip.iter().map(|g| g.long_edge_count() as f64).collect();
        let (ms, vs) = common::mean_var(&totals);
        let (mc, vc) = common::mean_var(&coupled);
        let t = trials as f64;
        let z_mean = (ms - mc).abs() / (vs / t + vc / t).sqrt();
        let z_var = (vs - vc).abs() / (2.0 * variance_of_sample_variance(k2, k4, t)).sqrt();
        worst = worst.max(z_mean).max(z_var);
        notes.push(format!("d={d} N={n}: {} classes, skip/coupled mean {ms:.3}/{mc:.3}", classes.len()));
    }
    outcome(worst <= 4.0, format!("max |z| = {worst:.2} (limit 4); {}", notes.join("; ")))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cases: Vec<ModelParams> = (0..200u64)
        .map(|i| {
            let d = rng.gen_range(1..=2usize);
            let n = if d == 1 { rng.gen_range(16..=4095u32) } else { rng.gen_range(3..=63u32) };
            params(d, n, rng.gen_range(0.5..4.5), rng.gen_range(0.0..3.0), i)
        })
        .collect();
    let mismatches: Vec<String> = cases
        .par_iter()
        .filter_map(|p| {
            let g = sample_graph(p, 0).unwrap();
            let (a, b) = (pruned_diameter(&g, None).unwrap().value, all_source_diameter(&g).value);
            (a != b).then(|| format!("d={} N={} seed={}: {a} vs {b}", p.d(), p.n(), p.seed()))
        })
        .collect();
    outcome(
        mismatches.is_empty(),
        format!("{} instances, {} mismatches {:?}", cases.len(), mismatches.len(), mismatches),
    )
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    for (d, n) in [(1usize, 1u32), (1, 10), (1, 1000), (2, 30), (3, 8)] {
        let g = sample_graph(&params(d, n, 2.0, 0.0, 3), 0).unwrap();
        let diam = exact_diameter(&g).unwrap().value;
        if u64::from(diam) != d as u64 * u64::from(n) {
            failures.push(format!("beta=0 d={d} N={n}: diameter {diam}"));
        }
        if d == 1 {
            let iso = isolated_nodes(&g).unwrap();
            if iso != n as usize + 1 {
                failures.push(format!("beta=0 N={n}: {iso} isolated"));
            }
        }
    }
    for (d, n) in [(1usize, 50u32), (2, 10), (3, 4)] {
        let g = sample_graph(&params(d, n, 2.0, f64::INFINITY, 3), 0).unwrap();
        let diam = exact_diameter(&g).unwrap().value;
        if diam != 1 {
            failures.push(format!("complete d={d} N={n}: diameter {diam}"));
        }
    }
    outcome(failures.is_empty(), format!("{failures:?}"))
}

fn is_subset(a: &[(u32, u32)], b: &[(u32, u32)]) -> bool {
    let mut it = b.iter();
    a.iter().all(|e| it.by_ref().any(|f| f == e))
}

fn criterion_4() -> Outcome {
    let betas = [0.5, 1.0, 2.0, 4.0];
    let violations: usize = (0..100u64)
        .into_par_iter()
        .map(|t| {
            let mut bad = 0;
            let mut prev: Option<(GridGraph, u32)> = None;
            for &beta in &betas {
                let g = sample_graph_coupled(&params(1, 256, 2.0, beta, 44), t).unwrap();
                let diam = exact_diameter(&g).unwrap().value;
                if let Some((pg, pd)) = &prev {
                    if !is_subset(pg.long_edges(), g.long_edges()) {
                        bad += 1;
                    }
                    if diam > *pd {
                        bad += 1;
                    }
                }
                prev = Some((g, diam));
            }
            bad
        })
        .sum();
    outcome(violations == 0, format!("100 trials x {} betas, {violations} violations", betas.len()))
}

fn criterion_5() -> Outcome {
    let n = 100_000u32;
    let mut pass = true;
    let mut notes = Vec::new();
    for beta in [0.5, 1.0] {
        let fractions: Vec<f64> = (0..20u64)
            .into_par_iter()
            .map(|t| {
                let g = sample_graph(&params(1, n, 2.0, beta, 55), t).unwrap();
                isolated_nodes(&g).unwrap() as f64 / f64::from(n + 1)
            })
            .collect();
        let (mean, var) = common::mean_var(&fractions);
        let se = (var / 20.0).sqrt();
        let c = (-beta * std::f64::consts::PI.powi(2) / 3.0).exp();
        pass &= mean >= c - 3.0 * se;
        notes.push(format!("beta={beta}: fraction {mean:.4} (se {se:.5}) vs c {c:.4}"));
    }
    outcome(pass, notes.join("; "))
}

fn sweep(sides: &[u32], s: f64, beta: f64, trials: u64, seed: u64, metrics: &str) -> ExperimentConfig {
    let sides: Vec<String> = sides.iter().map(u32::to_string).collect();
    ExperimentConfig::from_json(&format!(
        r#"{{"dims":[1],"sides":[{}],"exponents":[{s}],"betas":[{beta}],"trials":{trials},"seed":{seed},"metrics":{metrics}}}"#,
        sides.join(",")
    ))
    .unwrap()
}

fn records(cfg: &ExperimentConfig) -> Vec<TrialRecord> {
    run_experiment_to::<Vec<u8>>(cfg, None).unwrap().records
}

fn criterion_6() -> Outcome {
    let sides: Vec<u32> = (8..=14).map(|e| 1 << e).collect();
    let cfg = sweep(&sides, 2.0, 0.5, 100, 6, r#"{"diameter":"none","corner_path":false,"structure":true}"#);
    let fit = fit_power_law(&records(&cfg), Metric::Cuts).unwrap();
    let means: Vec<String> = fit.points.iter().map(|(n, m)| format!("{n}:{m:.1}")).collect();
    outcome(
        (0.35..=0.65).contains(&fit.estimate),
        format!("slope {:.4} (se {:.4}, target 0.5, window [0.35, 0.65]); means {}", fit.estimate, fit.std_error, means.join(" ")),
    )
}

fn criterion_7() -> Outcome {
    let mut cfg = sweep(&[1 << 14], 3.0, 1.0, 100, 7, r#"{"diameter":"none","corner_path":false}"#);
    cfg.tail_psi = vec![0.4];
    let recs = records(&cfg);
    let bound = (1u64 << 14) / 2;
    let held = recs.iter().filter(|r| r.tail_sums[0].1 <= bound).count();
    let max = recs.iter().map(|r| r.tail_sums[0].1).max().unwrap();
    outcome(held >= 95, format!("bound dN/2 = {bound} held in {held}/100 trials (largest sum {max})"))
}

fn criterion_8() -> Outcome {
    let n = 1u32 << 16;
    let base = params(1, n, 1.5, 1.0, 8);
    let plan = RenormPlan::new(&base, 0.8, 3).unwrap();
    let results: Vec<(bool, Option<usize>, usize)> = (0..50u64)
        .into_par_iter()
        .map(|t| {
            let g = sample_graph(&base, t).unwrap();
            let cert = renorm_certificate(&g, &plan).unwrap();
            if !cert.valid {
                return (false, cert.failing_level(), 0);
            }
            let bound = cert.implied_bound.unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(t);
            let mut bad = 0;
            for _ in 0..20 {
                let (x, y) = (NodeId(rng.gen_range(0..=n)), NodeId(rng.gen_range(0..=n)));
                let path = renorm_path(&g, &cert, x, y).unwrap();
                let len = path.len() as u64 - 1;
                let linked = path.windows(2).all(|w| g.is_adjacent(w[0], w[1]));
                let ends = path[0] == x && *path.last().unwrap() == y;
                if !(linked && ends && len <= bound && len >= u64::from(bfs(&g, x).get(y))) {
                    bad += 1;
                }
            }
            (true, None, bad)
        })
        .collect();
    let valid = results.iter().filter(|r| r.0).count();
    let bad_paths: usize = results.iter().map(|r| r.2).sum();
    let mut by_level = [0usize; 4];
    for r in &results {
        if let Some(l) = r.1 {
            by_level[l] += 1;
        }
    }
    outcome(
        valid >= 45 && bad_paths == 0,
        format!(
            "valid {valid}/50 (need 45), failing level counts L1={} L2={} L3={}, bad paths {bad_paths}; sides {:?}, bound {}",
            by_level[1],
            by_level[2],
            by_level[3],
            plan.side_lengths(),
            plan.implied_bound()
        ),
    )
}

fn loglog_sides() -> Vec<u32> {
    (10..=16).map(|e| 1 << e).collect()
}

fn criterion_9() -> Outcome {
    let cfg = sweep(&loglog_sides(), 1.0, 1.0, 50, 9, r#"{"diameter":"estimate","estimate_sources":16,"corner_path":false}"#);
    let recs = records(&cfg);
    let fit = fit_loglog_ratio(&recs, Regime::SEqualsD).unwrap();
    let spread = fit.spread.unwrap();
    let means: Vec<f64> = loglog_sides()
        .iter()
        .map(|&n| {
            let ds: Vec<f64> = recs.iter().filter(|r| r.n == n).map(|r| f64::from(r.diameter.unwrap())).collect();
            ds.iter().sum::<f64>() / ds.len() as f64
        })
        .collect();
    let increasing = means.windows(2).all(|w| w[1] > w[0]);
    let shown: Vec<String> = means.iter().map(|m| format!("{m:.2}")).collect();
    outcome(
        spread <= 2.0 && increasing,
        format!(
            "C(N) spread {spread:.3} (limit 2); mean D strictly increasing: {increasing}; mean D {}",
            shown.join(" ")
        ),
    )
}

fn criterion_10() -> Outcome {
    let cfg = sweep(&loglog_sides(), 1.0, 1.0, 50, 10, r#"{"diameter":"none","corner_path":false,"descent":true}"#);
    let recs = records(&cfg);
    let unreached = recs.iter().filter(|r| r.descent_steps.is_none()).count();
    let fit = fit_loglog_ratio_of(&recs, Regime::SEqualsD, Metric::DescentSteps).unwrap();
    let spread = fit.spread.unwrap();
    let cells = cfg.cells();
    let bad_traces: usize = recs
        .par_iter()
        .enumerate()
        .map(|(i, r)| {
            let cell = &cells[i / cfg.trials as usize];
            let p = cfg.params(cell).unwrap();
            let g = sample_graph(&p, r.trial).unwrap();
            let steps = lrp::procedures::default_max_steps(p.n());
            let trace = descent_run(&g, p.corner_far(), 2, steps).unwrap();
            let monotone = trace.norms.windows(2).all(|w| w[1] <= w[0]);
            let linked = trace.chain.windows(2).all(|w| bfs(&g, w[0]).get(w[1]) <= 2);
            let same = trace.steps_to_threshold.map(|k| k as u64) == r.descent_steps;
            usize::from(!(monotone && linked && same))
        })
        .sum();
    let ratios: Vec<String> = fit.points.iter().map(|(_, c)| format!("{c:.3}")).collect();
    outcome(
        spread <= 2.0 && bad_traces == 0 && unreached == 0,
        format!(
            "ratio spread {spread:.3} (limit 2); ratios {}; bad traces {bad_traces}; unreached {unreached}",
            ratios.join(" ")
        ),
    )
}

fn criterion_11() -> Outcome {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let archived = std::fs::read(data.join("sweep.csv")).unwrap();
    let mut cfg = ExperimentConfig::from_file(data.join("sweep.json")).unwrap();
    let mut mismatches = Vec::new();
    for workers in [1usize, 2, 3, 8, 1] {
        cfg.workers = Some(workers);
        let mut buf = Vec::new();
        run_experiment_to(&cfg, Some(&mut buf)).unwrap();
        if buf != archived {
            mismatches.push(workers);
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("{} archived bytes, reruns with workers 1,2,3,8,1; mismatching runs {mismatches:?}", archived.len()),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "sampler oracle", criterion_1, minutes(2)),
        (2, "diameter oracle", criterion_2, minutes(2)),
        (3, "deterministic extremes", criterion_3, Duration::MAX),
        (4, "pathwise monotonicity", criterion_4, Duration::MAX),
        (5, "isolated fraction", criterion_5, minutes(3)),
        (6, "cut-node scaling", criterion_6, minutes(10)),
        (7, "tail sum", criterion_7, minutes(5)),
        (8, "renormalization certificate", criterion_8, minutes(10)),
        (9, "s=d diameter trend", criterion_9, minutes(30)),
        (10, "descent trend", criterion_10, minutes(15)),
        (11, "reproducibility", criterion_11, Duration::MAX),
    ];
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (id, name, run, limit) in criteria {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = took <= limit;
        let pass = out.pass && in_time;
        let timing = if limit == Duration::MAX {
            format!("{took:.1?}")
        } else {
            format!("{took:.1?} of {}s", limit.as_secs())
        };
        println!(
            "criterion {id:>2} {name}: {} [{}] {}",
            if pass { "PASS" } else { "FAIL" },
            timing,
            out.detail
        );
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all selected criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
