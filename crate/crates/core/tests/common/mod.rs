//! Slow, obviously-correct reference implementations.
#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use lrp::{GridGraph, ModelParams, NodeId};

pub fn coords(id: u32, p: &ModelParams) -> Vec<i64> {
    let side = i64::from(p.n()) + 1;
    let mut rest = i64::from(id);
    (0..p.d())
        .map(|_| {
            let c = rest % side;
            rest /= side;
            c
        })
        .collect()
}

pub fn l1(a: &[i64], b: &[i64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| (x - y).unsigned_abs()).sum()
}

/// `1 - exp(-beta / k^s)` written out directly.
pub fn naive_probability(k: u64, s: f64, beta: f64) -> f64 {
    if beta.is_infinite() {
        return 1.0;
    }
    1.0 - (-beta / (k as f64).powf(s)).exp()
}

/// Displacement `v - u`, flipped to be lexicographically positive.
pub fn canonical_offset(a: &[i64], b: &[i64]) -> Vec<i64> {
    let delta: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let first = delta.iter().find(|&&x| x != 0).copied().unwrap_or(0);
    if first < 0 {
        delta.iter().map(|x| -x).collect()
    } else {
        delta
    }
}

/// Every unordered pair at distance >= 2, grouped by canonical offset:
/// `offset -> (pair count, probability)`.
pub fn offset_classes(p: &ModelParams) -> BTreeMap<Vec<i64>, (u64, f64)> {
    let n = p.node_count() as u32;
    let mut out: BTreeMap<Vec<i64>, (u64, f64)> = BTreeMap::new();
    for u in 0..n {
        let cu = coords(u, p);
        for v in u + 1..n {
            let cv = coords(v, p);
            let k = l1(&cu, &cv);
            if k < 2 {
                continue;
            }
            let e = out
                .entry(canonical_offset(&cu, &cv))
                .or_insert((0, naive_probability(k, p.s(), p.beta())));
            e.0 += 1;
        }
    }
    out
}

/// Long-edge counts per canonical offset.
pub fn class_counts(g: &GridGraph) -> BTreeMap<Vec<i64>, u64> {
    let p = g.params();
    let mut out = BTreeMap::new();
    for &(u, v) in g.long_edges() {
        *out.entry(canonical_offset(&coords(u, p), &coords(v, p))).or_insert(0) += 1;
    }
    out
}

pub fn adjacency(g: &GridGraph) -> Vec<Vec<u32>> {
    let p = g.params();
    let n = g.node_count() as u32;
    let mut adj = vec![Vec::new(); n as usize];
    for u in 0..n {
        let cu = coords(u, p);
        for v in 0..n {
            if l1(&cu, &coords(v, p)) == 1 {
                adj[u as usize].push(v);
            }
        }
    }
    for &(u, v) in g.long_edges() {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    adj
}

/// Queue BFS over a nested-vector adjacency.
pub fn naive_bfs(adj: &[Vec<u32>], src: u32) -> Vec<Option<u32>> {
    let mut dist = vec![None; adj.len()];
    dist[src as usize] = Some(0);
    let mut q = VecDeque::from([src]);
    while let Some(u) = q.pop_front() {
        let du = dist[u as usize].unwrap();
        for &v in &adj[u as usize] {
            if dist[v as usize].is_none() {
                dist[v as usize] = Some(du + 1);
                q.push_back(v);
            }
        }
    }
    dist
}

pub fn naive_diameter(g: &GridGraph) -> u32 {
    let adj = adjacency(g);
    (0..adj.len() as u32)
        .map(|s| naive_bfs(&adj, s).into_iter().map(|d| d.unwrap()).max().unwrap())
        .max()
        .unwrap()
}

/// Explicit per-pair coin flips with a plain RNG; independent of the
/// skip sampler's code path.
pub fn naive_sample(p: &ModelParams, rng: &mut impl rand::Rng) -> Vec<(u32, u32)> {
    let n = p.node_count() as u32;
    let mut edges = Vec::new();
    for u in 0..n {
        let cu = coords(u, p);
        for v in u + 1..n {
            let k = l1(&cu, &coords(v, p));
            if k >= 2 && rng.gen::<f64>() < naive_probability(k, p.s(), p.beta()) {
                edges.push((u, v));
            }
        }
    }
    edges
}

pub fn node(id: u32) -> NodeId {
    NodeId(id)
}

/// Mean and unbiased variance.
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v)
}
