//! Structural statistics of one realisation.
//!
//! Edge-length histograms and their weighted tails, cut nodes and isolated
//! nodes of the line (`d = 1`), the interval quotient graph with its local
//! cuts, and ball growth around a node.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graphcore::BfsWorkspace;
use crate::model::{ModelParams, NodeId};
use crate::sampler::GridGraph;

/// `counts[k] = L(k)`, the number of edges of L1 length `k`, for `k = 0..=dN`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeLengthHistogram {
    counts: Vec<u64>,
}

impl EdgeLengthHistogram {
    pub fn get(&self, k: usize) -> u64 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn max_length(&self) -> usize {
        self.counts.len() - 1
    }

    /// `sum_{k >= 2} L(k)`.
    pub fn long_total(&self) -> u64 {
        self.counts.iter().skip(2).sum()
    }

    /// `k,count` rows for `k = 1..=dN`, with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,count\n");
        for (k, c) in self.counts.iter().enumerate().skip(1) {
            let _ = writeln!(out, "{k},{c}");
        }
        out
    }

    pub fn from_counts(counts: Vec<u64>) -> Self {
        Self { counts }
    }
}

pub fn edge_length_histogram(g: &GridGraph) -> EdgeLengthHistogram {
    let p = g.params();
    let mut counts = vec![0u64; p.max_distance() as usize + 1];
    let d = p.d() as u64;
    let n = u64::from(p.n());
    counts[1] = d * n * (n + 1).pow(p.d() as u32 - 1);
    for &(u, v) in g.long_edges() {
        counts[p.distance_of(u, v) as usize] += 1;
    }
    EdgeLengthHistogram { counts }
}

/// `sum_{k > N^(1 - psi)} k·L(k)`.
pub fn tail_sum(h: &EdgeLengthHistogram, psi: f64, params: &ModelParams) -> Result<u64> {
    if !(psi > 0.0 && psi < 1.0) {
        return Err(Error::InvalidParams(format!("psi must lie in (0, 1), got {psi}")));
    }
    let threshold = f64::from(params.n()).powf(1.0 - psi);
    Ok(h.counts
        .iter()
        .enumerate()
        .filter(|&(k, _)| k as f64 > threshold)
        .map(|(k, &c)| k as u64 * c)
        .sum())
}

fn require_line(g: &GridGraph) -> Result<()> {
    match g.params().d() {
        1 => Ok(()),
        d => Err(Error::RequiresOneDimension(d)),
    }
}

/// Interior positions `1..N-1` crossed by no edge `(j, k)` with `j < i < k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutNodes {
    pub positions: Vec<u32>,
}

impl CutNodes {
    pub fn count(&self) -> usize {
        self.positions.len()
    }
}

/// Marks the open spans `(j, k)` of `edges` and returns the cover count at
/// every position `0..len`.
fn span_cover(len: usize, edges: impl Iterator<Item = (u32, u32)>) -> Vec<i64> {
    let mut diff = vec![0i64; len + 1];
    for (j, k) in edges {
        if k > j + 1 {
            diff[j as usize + 1] += 1;
            diff[k as usize] -= 1;
        }
    }
    let mut acc = 0;
    diff.truncate(len);
    for x in diff.iter_mut() {
        acc += *x;
        *x = acc;
    }
    diff
}

pub fn cut_nodes(g: &GridGraph) -> Result<CutNodes> {
    require_line(g)?;
    let n = g.params().n() as usize;
    let cover = span_cover(n + 1, g.long_edges().iter().copied());
    let positions = (1..n)
        .filter(|&i| cover[i] == 0)
        .map(|i| i as u32)
        .collect();
    Ok(CutNodes { positions })
}

/// Nodes whose only neighbours are their lattice neighbours (`d = 1`).
pub fn isolated_nodes(g: &GridGraph) -> Result<usize> {
    require_line(g)?;
    Ok((0..g.node_count() as u32)
        .filter(|&u| g.degree(u) == g.lattice_degree(u))
        .count())
}

/// Number of nodes within `radius` hops of `center`.
pub fn ball_size(g: &GridGraph, center: NodeId, radius: u32) -> usize {
    let mut ws = BfsWorkspace::new(g.node_count());
    ws.run_limited(g, center.0, radius)
}

/// Intervals `[iℓ, (i+1)ℓ - 1]` of the line, the last one truncated at `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalDecomposition {
    pub interval_length: u32,
    /// Sorted neighbour lists over the intervals; `i ± 1` always present.
    pub quotient_adjacency: Vec<Vec<u32>>,
    pub isolated_intervals: Vec<u32>,
    /// Cut nodes of the subgraph induced by each interval.
    pub local_cut_counts: Vec<u32>,
}

impl IntervalDecomposition {
    pub fn interval_count(&self) -> usize {
        self.quotient_adjacency.len()
    }

    pub fn isolated_fraction(&self) -> f64 {
        self.isolated_intervals.len() as f64 / self.interval_count() as f64
    }
}

pub fn interval_decomposition(g: &GridGraph, length: u32) -> Result<IntervalDecomposition> {
    require_line(g)?;
    let nodes = g.node_count();
    if length == 0 || length as usize > nodes {
        return Err(Error::InvalidParams(format!(
            "interval length must lie in 1..={nodes}, got {length}"
        )));
    }
    let count = nodes.div_ceil(length as usize);
    let block = |v: u32| v / length;

    let mut adj: Vec<Vec<u32>> = (0..count as u32)
        .map(|i| {
            let mut v = Vec::new();
            if i > 0 {
                v.push(i - 1);
            }
            if (i as usize) + 1 < count {
                v.push(i + 1);
            }
            v
        })
        .collect();
    for &(u, v) in g.long_edges() {
        let (a, b) = (block(u), block(v));
        if b > a + 1 {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
        list.dedup();
    }
    let isolated_intervals = adj
        .iter()
        .enumerate()
        .filter(|(i, list)| list.iter().all(|&j| j.abs_diff(*i as u32) == 1))
        .map(|(i, _)| i as u32)
        .collect();

    let internal = g
        .long_edges()
        .iter()
        .copied()
        .filter(|&(u, v)| block(u) == block(v));
    let cover = span_cover(nodes, internal);
    let local_cut_counts = (0..count)
        .map(|i| {
            let lo = i * length as usize;
            let hi = (lo + length as usize - 1).min(nodes - 1);
            ((lo + 1)..hi).filter(|&x| cover[x] == 0).count() as u32
        })
        .collect();

    Ok(IntervalDecomposition {
        interval_length: length,
        quotient_adjacency: adj,
        isolated_intervals,
        local_cut_counts,
    })
}

/// Per-realisation summary. Line-only fields are `None` when `d > 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureStats {
    pub cut_nodes: Option<usize>,
    pub isolated_nodes: Option<usize>,
    pub isolated_fraction: Option<f64>,
    pub degree_mean: f64,
    pub degree_max: usize,
    pub ball2_center: NodeId,
    pub ball2_size: usize,
}

/// Stats with the 2-ball taken around `center`.
pub fn structure_stats(g: &GridGraph, center: NodeId) -> StructureStats {
    let n = g.node_count();
    let (cut, iso) = if g.params().d() == 1 {
        (
            cut_nodes(g).ok().map(|c| c.count()),
            isolated_nodes(g).ok(),
        )
    } else {
        (None, None)
    };
    let degree_max = (0..n as u32).map(|u| g.degree(u)).max().unwrap_or(0);
    StructureStats {
        cut_nodes: cut,
        isolated_nodes: iso,
        isolated_fraction: iso.map(|i| i as f64 / n as f64),
        degree_mean: 2.0 * g.edge_count() as f64 / n as f64,
        degree_max,
        ball2_center: center,
        ball2_size: ball_size(g, center, 2),
    }
}
