//! Graph realisations of the model.
//!
//! Long-range pairs are grouped by displacement into [`OffsetClass`]es.
//! Within a class every pair shares one probability, so the realised pairs
//! are drawn by geometric skips over the class's pair indexing: expected
//! cost is proportional to classes plus realised edges, never to pairs.

mod io;
mod offsets;

pub use io::{read_graph, read_graph_file, write_graph, write_graph_file};
pub use offsets::{enumerate_offsets, OffsetClass, Offsets};

use crate::error::{Error, Result};
use crate::model::{long_range_probability, ModelParams, NodeId};
use crate::rng::{pair_uniform, trial_rng};

/// Default ceiling on stored long edges.
pub const DEFAULT_EDGE_CAP: u64 = 1 << 31;
/// Default node ceiling of the all-pairs coupled sampler.
pub const DEFAULT_COUPLED_NODE_CAP: usize = 1 << 13;

#[derive(Debug, Clone, Copy)]
pub struct SamplerOptions {
    pub edge_cap: u64,
    pub coupled_node_cap: usize,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        Self {
            edge_cap: DEFAULT_EDGE_CAP,
            coupled_node_cap: DEFAULT_COUPLED_NODE_CAP,
        }
    }
}

/// An immutable realisation: implicit lattice edges plus the sampled long
/// edges, stored as CSR adjacency with sorted neighbour lists.
#[derive(Debug, Clone, PartialEq)]
pub struct GridGraph {
    params: ModelParams,
    trial: u64,
    long_edges: Vec<(u32, u32)>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl GridGraph {
    /// Builds a graph from an arbitrary list of long-range pairs.
    ///
    /// Pairs may be given in either orientation and any order. Self-loops,
    /// out-of-range ids, lattice pairs and duplicates are rejected.
    pub fn from_long_edges(
        params: ModelParams,
        trial: u64,
        mut edges: Vec<(u32, u32)>,
    ) -> Result<Self> {
        let n = params.node_count() as u32;
        for e in edges.iter_mut() {
            let (a, b) = *e;
            if a == b {
                return Err(Error::InvalidEdges(format!("self-loop at {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidEdges(format!("edge ({a}, {b}) out of range")));
            }
            if params.distance_of(a, b) < 2 {
                return Err(Error::InvalidEdges(format!(
                    "({a}, {b}) is a lattice pair, which is always present"
                )));
            }
            *e = (a.min(b), a.max(b));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidEdges(format!("duplicate edge {:?}", w[0])));
        }
        Ok(Self::from_sorted(params, trial, edges))
    }

    /// `edges` must be sorted, deduplicated, smaller id first, all long-range.
    pub(crate) fn from_sorted(params: ModelParams, trial: u64, long_edges: Vec<(u32, u32)>) -> Self {
        let n = params.node_count();
        let d = params.d();
        let side = params.side();

        let mut degree = vec![0usize; n];
        let mut coords = vec![0u32; d];
        for deg in degree.iter_mut() {
            for &c in &coords {
                *deg += usize::from(c > 0) + usize::from(c + 1 < side);
            }
            increment(&mut coords, side);
        }
        for &(u, v) in &long_edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }

        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0usize);
        let mut acc = 0usize;
        for &deg in &degree {
            acc += deg;
            offsets.push(acc);
        }
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        let mut targets = vec![0u32; acc];

        coords.iter_mut().for_each(|c| *c = 0);
        for id in 0..n as u32 {
            let slot = &mut cursor[id as usize];
            let mut stride = 1u32;
            for &c in &coords {
                if c > 0 {
                    targets[*slot] = id - stride;
                    *slot += 1;
                }
                if c + 1 < side {
                    targets[*slot] = id + stride;
                    *slot += 1;
                }
                stride *= side;
            }
            increment(&mut coords, side);
        }
        for &(u, v) in &long_edges {
            targets[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            targets[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for u in 0..n {
            targets[offsets[u]..offsets[u + 1]].sort_unstable();
        }

        Self {
            params,
            trial,
            long_edges,
            offsets,
            targets,
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn trial(&self) -> u64 {
        self.trial
    }

    pub fn node_count(&self) -> usize {
        self.params.node_count()
    }

    /// Long edges, smaller id first, sorted.
    pub fn long_edges(&self) -> &[(u32, u32)] {
        &self.long_edges
    }

    pub fn long_edge_count(&self) -> usize {
        self.long_edges.len()
    }

    /// Total undirected edge count, lattice included.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, u: u32) -> &[u32] {
        let u = u as usize;
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn degree(&self, u: u32) -> usize {
        let u = u as usize;
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn is_adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u.0).binary_search(&v.0).is_ok()
    }

    /// Re-checks the structural invariants: sorted duplicate-free symmetric
    /// adjacency, no self-loops, every lattice pair present, long edges
    /// consistent with adjacency.
    pub fn audit(&self) -> Result<()> {
        let n = self.node_count() as u32;
        let fail = |msg: String| Err(Error::InvalidEdges(msg));
        let mut long_seen = 0usize;
        for u in 0..n {
            let adj = self.neighbors(u);
            if adj.windows(2).any(|w| w[0] >= w[1]) {
                return fail(format!("adjacency of {u} not strictly sorted"));
            }
            for &v in adj {
                if v == u {
                    return fail(format!("self-loop at {u}"));
                }
                if self.neighbors(v).binary_search(&u).is_err() {
                    return fail(format!("asymmetric edge ({u}, {v})"));
                }
                let dist = self.params.distance_of(u, v);
                if dist >= 2 && u < v {
                    long_seen += 1;
                    if self.long_edges.binary_search(&(u, v)).is_err() {
                        return fail(format!("adjacency edge ({u}, {v}) missing from long edges"));
                    }
                }
            }
            let lattice = adj.iter().filter(|&&v| self.params.distance_of(u, v) == 1).count();
            if lattice != self.lattice_degree(u) {
                return fail(format!("node {u} is missing lattice neighbours"));
            }
        }
        if long_seen != self.long_edges.len() {
            return fail("long-edge list disagrees with adjacency".into());
        }
        if self.long_edges.windows(2).any(|w| w[0] >= w[1]) {
            return fail("long edges not strictly sorted".into());
        }
        Ok(())
    }

    /// Number of lattice neighbours of `u`.
    pub fn lattice_degree(&self, u: u32) -> usize {
        let side = self.params.side();
        let mut rest = u;
        let mut deg = 0;
        for _ in 0..self.params.d() {
            let c = rest % side;
            rest /= side;
            deg += usize::from(c > 0) + usize::from(c + 1 < side);
        }
        deg
    }
}

fn increment(coords: &mut [u32], side: u32) {
    for c in coords.iter_mut() {
        *c += 1;
        if *c < side {
            return;
        }
        *c = 0;
    }
}

/// Samples the realisation owned by `(params.seed(), trial)`.
pub fn sample_graph(params: &ModelParams, trial: u64) -> Result<GridGraph> {
    sample_graph_with(params, trial, &SamplerOptions::default())
}

pub fn sample_graph_with(
    params: &ModelParams,
    trial: u64,
    options: &SamplerOptions,
) -> Result<GridGraph> {
    let mut edges = Vec::new();
    if params.beta() > 0.0 {
        let mut rng = trial_rng(params.seed(), trial);
        for class in enumerate_offsets(params) {
            class.sample_into(params, &mut rng, &mut edges, options.edge_cap)?;
        }
        edges.sort_unstable();
    }
    Ok(GridGraph::from_sorted(*params, trial, edges))
}

/// All-pairs sampler with common random numbers.
///
/// Pair `{a, b}` (a < b) is present iff `U(seed, trial, a, b) < p(dist)`,
/// with `U` a stateless hash. For fixed `(seed, trial)` the edge set is
/// therefore nondecreasing in `beta`.
pub fn sample_graph_coupled(params: &ModelParams, trial: u64) -> Result<GridGraph> {
    sample_graph_coupled_with(params, trial, &SamplerOptions::default())
}

pub fn sample_graph_coupled_with(
    params: &ModelParams,
    trial: u64,
    options: &SamplerOptions,
) -> Result<GridGraph> {
    let n = params.node_count();
    if n > options.coupled_node_cap {
        return Err(Error::NodeCapExceeded {
            what: "the coupled sampler",
            nodes: n,
            cap: options.coupled_node_cap,
        });
    }
    let probs: Vec<f64> = (0..=params.max_distance())
        .map(|k| {
            if k < 2 {
                0.0
            } else {
                long_range_probability(k, params.s(), params.beta())
            }
        })
        .collect();
    let mut edges = Vec::new();
    if params.beta() > 0.0 {
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                let k = params.distance_of(a, b) as usize;
                if k >= 2 && pair_uniform(params.seed(), trial, a, b) < probs[k] {
                    if edges.len() as u64 >= options.edge_cap {
                        return Err(Error::EdgeCapExceeded {
                            delta: Vec::new(),
                            cap: options.edge_cap,
                        });
                    }
                    edges.push((a, b));
                }
            }
        }
    }
    Ok(GridGraph::from_sorted(*params, trial, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(d: usize, n: u32, s: f64, beta: f64) -> ModelParams {
        ModelParams::new(d, n, s, beta, 11).unwrap()
    }

    #[test]
    fn zero_beta_is_lattice_only() {
        for (d, n) in [(1, 30), (2, 7), (3, 3)] {
            let p = params(d, n, 1.5, 0.0);
            for g in [sample_graph(&p, 0).unwrap(), sample_graph_coupled(&p, 0).unwrap()] {
                assert!(g.long_edges().is_empty());
                g.audit().unwrap();
                assert_eq!(
                    g.edge_count() as u64,
                    d as u64 * u64::from(n) * u64::from(n + 1).pow(d as u32 - 1)
                );
            }
        }
    }

    #[test]
    fn infinite_beta_is_complete() {
        let p = params(1, 3, 2.0, f64::INFINITY);
        for g in [sample_graph(&p, 5).unwrap(), sample_graph_coupled(&p, 5).unwrap()] {
            g.audit().unwrap();
            assert_eq!(g.edge_count(), 6);
            assert_eq!(g.long_edges(), &[(0, 2), (0, 3), (1, 3)]);
        }
    }

    #[test]
    fn deterministic_per_trial() {
        let p = params(2, 20, 2.0, 1.5);
        let a = sample_graph(&p, 3).unwrap();
        let b = sample_graph(&p, 3).unwrap();
        let c = sample_graph(&p, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.long_edges(), c.long_edges());
        a.audit().unwrap();
        c.audit().unwrap();
    }

    #[test]
    fn edge_cap_names_the_class() {
        let p = params(1, 50, 1.0, 20.0);
        let opts = SamplerOptions {
            edge_cap: 3,
            ..Default::default()
        };
        match sample_graph_with(&p, 0, &opts) {
            Err(Error::EdgeCapExceeded { delta, cap }) => {
                assert_eq!(cap, 3);
                assert_eq!(delta.len(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coupled_cap_enforced() {
        let p = params(1, 100, 1.0, 1.0);
        let opts = SamplerOptions {
            coupled_node_cap: 50,
            ..Default::default()
        };
        assert!(matches!(
            sample_graph_coupled_with(&p, 0, &opts),
            Err(Error::NodeCapExceeded { .. })
        ));
    }

    #[test]
    fn coupled_edges_nested_in_beta() {
        let mut prev: Option<GridGraph> = None;
        for beta in [0.0, 0.3, 1.0, 2.5, 9.0] {
            let g = sample_graph_coupled(&params(2, 6, 2.0, beta), 7).unwrap();
            if let Some(p) = &prev {
                assert!(p.long_edges().iter().all(|e| g.long_edges().binary_search(e).is_ok()));
            }
            prev = Some(g);
        }
    }

    #[test]
    fn from_long_edges_validates() {
        let p = params(1, 10, 2.0, 1.0);
        assert!(GridGraph::from_long_edges(p, 0, vec![(3, 3)]).is_err());
        assert!(GridGraph::from_long_edges(p, 0, vec![(3, 4)]).is_err());
        assert!(GridGraph::from_long_edges(p, 0, vec![(3, 40)]).is_err());
        assert!(GridGraph::from_long_edges(p, 0, vec![(3, 7), (7, 3)]).is_err());
        let g = GridGraph::from_long_edges(p, 0, vec![(9, 0), (2, 5)]).unwrap();
        assert_eq!(g.long_edges(), &[(0, 9), (2, 5)]);
        g.audit().unwrap();
        assert!(g.is_adjacent(NodeId(9), NodeId(0)));
    }
}
