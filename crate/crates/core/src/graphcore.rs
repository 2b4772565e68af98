//! Shortest paths and diameters.
//!
//! All quantities are unweighted hop counts in 32 bits. BFS runs on two
//! flat frontier buffers owned by a reusable [`BfsWorkspace`].
//!
//! Exact diameters come from either all-source BFS or eccentricity pruning
//! (double sweep to a central root, then refuting candidate eccentricities
//! level by level from the bottom of the root's BFS tree). Both return the
//! same value; the first is the oracle for the second.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::NodeId;
use crate::sampler::GridGraph;

pub const UNREACHED: u32 = u32::MAX;

/// Default node count up to which [`exact_diameter`] runs all-source BFS.
pub const DEFAULT_ALL_SOURCE_CAP: usize = 1 << 12;
/// Default pruned-search budget, in BFS runs (scaled by node count).
pub const DEFAULT_BUDGET_SWEEPS: u64 = 4096;

/// Hop counts from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceField {
    pub source: NodeId,
    pub dist: Vec<u32>,
}

impl DistanceField {
    pub fn get(&self, v: NodeId) -> u32 {
        self.dist[v.index()]
    }

    /// Largest distance with the smallest node attaining it.
    pub fn eccentricity(&self) -> (u32, NodeId) {
        farthest(&self.dist)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiameterMode {
    Exact,
    LowerBound,
}

impl DiameterMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiameterMode::Exact => "exact",
            DiameterMode::LowerBound => "lower_bound",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiameterResult {
    pub value: u32,
    pub mode: DiameterMode,
    /// A pair at distance `value`.
    pub witness: (NodeId, NodeId),
    pub sources_used: usize,
    /// Proven upper bound on the diameter (equal to `value` when exact).
    pub upper_bound: u32,
}

#[derive(Debug, Clone, Copy)]
pub struct DiameterOptions {
    pub all_source_cap: usize,
    /// Node visits allowed to the pruned search; `None` is unlimited.
    pub visit_budget: Option<u64>,
}

impl Default for DiameterOptions {
    fn default() -> Self {
        Self {
            all_source_cap: DEFAULT_ALL_SOURCE_CAP,
            visit_budget: Some(u64::MAX),
        }
    }
}

impl DiameterOptions {
    pub fn budget_sweeps(nodes: usize, sweeps: u64) -> Option<u64> {
        Some(sweeps.saturating_mul(nodes as u64))
    }
}

/// Reusable BFS buffers.
pub struct BfsWorkspace {
    dist: Vec<u32>,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

impl BfsWorkspace {
    pub fn new(nodes: usize) -> Self {
        Self {
            dist: vec![UNREACHED; nodes],
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    pub fn dist(&self) -> &[u32] {
        &self.dist
    }

    /// Full BFS; returns `(eccentricity, smallest farthest node)`.
    pub fn run(&mut self, g: &GridGraph, source: u32) -> (u32, u32) {
        self.run_limited(g, source, UNREACHED);
        let (ecc, far) = farthest(&self.dist);
        (ecc, far.0)
    }

    /// BFS truncated after `radius` levels; returns the number of nodes
    /// reached. Unreached entries stay [`UNREACHED`].
    pub fn run_limited(&mut self, g: &GridGraph, source: u32, radius: u32) -> usize {
        self.dist.fill(UNREACHED);
        self.frontier.clear();
        self.dist[source as usize] = 0;
        self.frontier.push(source);
        let mut reached = 1;
        let mut level = 0u32;
        while !self.frontier.is_empty() && level < radius {
            level += 1;
            self.next.clear();
            for &u in &self.frontier {
                for &v in g.neighbors(u) {
                    let slot = &mut self.dist[v as usize];
                    if *slot == UNREACHED {
                        *slot = level;
                        self.next.push(v);
                    }
                }
            }
            reached += self.next.len();
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
        reached
    }

    pub fn into_field(self, source: NodeId) -> DistanceField {
        DistanceField {
            source,
            dist: self.dist,
        }
    }
}

fn farthest(dist: &[u32]) -> (u32, NodeId) {
    let mut best = (0u32, 0u32);
    for (i, &d) in dist.iter().enumerate() {
        if d != UNREACHED && d > best.0 {
            best = (d, i as u32);
        }
    }
    (best.0, NodeId(best.1))
}

pub fn bfs(g: &GridGraph, source: NodeId) -> DistanceField {
    let mut ws = BfsWorkspace::new(g.node_count());
    ws.run(g, source.0);
    ws.into_field(source)
}

/// Shortest-path length between `(0, ..., 0)` and `(N, ..., N)`.
pub fn corner_path_length(g: &GridGraph) -> u32 {
    let mut ws = BfsWorkspace::new(g.node_count());
    ws.run(g, 0);
    ws.dist[g.params().corner_far().index()]
}

/// `(ecc, source, farthest)`, ordered so that `max` prefers larger
/// eccentricity and then the smaller source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Ecc {
    ecc: u32,
    source: u32,
    far: u32,
}

impl Ecc {
    fn better(self, other: Ecc) -> Ecc {
        if (other.ecc, std::cmp::Reverse(other.source)) > (self.ecc, std::cmp::Reverse(self.source)) {
            other
        } else {
            self
        }
    }
}

/// Buffers for 64-lane bit-parallel BFS: bit `k` of a word belongs to the
/// `k`-th source of the batch.
struct LaneWorkspace {
    seen: Vec<u64>,
    frontier: Vec<u64>,
    next: Vec<u64>,
    active: Vec<u32>,
    grown: Vec<u32>,
}

impl LaneWorkspace {
    fn new(n: usize) -> Self {
        Self {
            seen: vec![0; n],
            frontier: vec![0; n],
            next: vec![0; n],
            active: Vec::new(),
            grown: Vec::new(),
        }
    }

    /// Eccentricities of up to 64 distinct sources at once.
    fn eccentricities(&mut self, g: &GridGraph, sources: &[u32]) -> Vec<u32> {
        debug_assert!(sources.len() <= 64);
        self.seen.fill(0);
        self.active.clear();
        for (k, &s) in sources.iter().enumerate() {
            let bit = 1u64 << k;
            self.seen[s as usize] |= bit;
            self.frontier[s as usize] |= bit;
            self.active.push(s);
        }
        let mut ecc = vec![0u32; sources.len()];
        let mut level = 0;
        loop {
            level += 1;
            self.grown.clear();
            for &v in &self.active {
                let f = self.frontier[v as usize];
                for &u in g.neighbors(v) {
                    let add = f & !self.seen[u as usize];
                    if add != 0 {
                        if self.next[u as usize] == 0 {
                            self.grown.push(u);
                        }
                        self.next[u as usize] |= add;
                    }
                }
            }
            for &v in &self.active {
                self.frontier[v as usize] = 0;
            }
            if self.grown.is_empty() {
                return ecc;
            }
            let mut lanes = 0u64;
            for &u in &self.grown {
                let bits = std::mem::take(&mut self.next[u as usize]);
                self.seen[u as usize] |= bits;
                self.frontier[u as usize] = bits;
                lanes |= bits;
            }
            while lanes != 0 {
                ecc[lanes.trailing_zeros() as usize] = level;
                lanes &= lanes - 1;
            }
            std::mem::swap(&mut self.active, &mut self.grown);
        }
    }
}

/// Largest eccentricity over `sources` (ties to the smaller source), with
/// the smallest farthest node as partner.
fn eccentricities_max(g: &GridGraph, sources: &[u32]) -> Option<Ecc> {
    let n = g.node_count();
    let (ecc, source) = sources
        .par_chunks(64)
        .map_init(
            || LaneWorkspace::new(n),
            |ws, chunk| {
                let eccs = ws.eccentricities(g, chunk);
                eccs.into_iter()
                    .zip(chunk)
                    .map(|(e, &s)| (e, std::cmp::Reverse(s)))
                    .max()
                    .expect("chunks are non-empty")
            },
        )
        .max()
        .map(|(e, s)| (e, s.0))?;
    let (_, far) = BfsWorkspace::new(n).run(g, source);
    Some(Ecc { ecc, source, far })
}

/// Diameter by BFS from every node.
pub fn all_source_diameter(g: &GridGraph) -> DiameterResult {
    let sources: Vec<u32> = (0..g.node_count() as u32).collect();
    let best = eccentricities_max(g, &sources).expect("graph has at least two nodes");
    DiameterResult {
        value: best.ecc,
        mode: DiameterMode::Exact,
        witness: (NodeId(best.source), NodeId(best.far)),
        sources_used: sources.len(),
        upper_bound: best.ecc,
    }
}

/// Exact diameter by eccentricity pruning.
///
/// Double sweep `0 -> a -> b` gives a lower bound and a peripheral pair; the
/// midpoint of an `a`-`b` geodesic becomes the root `r`. With `F_i` the
/// nodes at distance `i` from `r`, every pair inside levels `<= i` is within
/// `2i`, so levels are processed from the deepest up until the best
/// eccentricity found reaches `2(i - 1)`.
pub fn pruned_diameter(g: &GridGraph, visit_budget: Option<u64>) -> Result<DiameterResult> {
    let n = g.node_count();
    let budget = visit_budget.unwrap_or(u64::MAX);
    let mut visits: u64 = 0;
    let mut charge = |sweeps: usize| -> Result<()> {
        visits = visits.saturating_add(sweeps as u64 * n as u64);
        if visits > budget {
            Err(Error::BudgetExceeded { budget })
        } else {
            Ok(())
        }
    };

    let mut ws = BfsWorkspace::new(n);
    charge(4)?;
    let (_, a) = ws.run(g, 0);
    let (ecc_a, b) = ws.run(g, a);
    let dist_a = ws.dist.clone();
    let (ecc_b, far_b) = ws.run(g, b);
    let mut best = Ecc {
        ecc: ecc_a,
        source: a,
        far: b,
    }
    .better(Ecc {
        ecc: ecc_b,
        source: b,
        far: far_b,
    });

    let ab = dist_a[b as usize];
    let half = ab / 2;
    let root = (0..n)
        .find(|&v| dist_a[v] == half && ws.dist[v] == ab - half)
        .expect("a geodesic midpoint exists") as u32;

    let (ecc_r, far_r) = ws.run(g, root);
    best = best.better(Ecc {
        ecc: ecc_r,
        source: root,
        far: far_r,
    });
    let mut sources_used = 4;

    // Bucket nodes by level from the root.
    let mut level_start = vec![0usize; ecc_r as usize + 2];
    for &d in &ws.dist {
        level_start[d as usize + 1] += 1;
    }
    for i in 1..level_start.len() {
        level_start[i] += level_start[i - 1];
    }
    let mut fill = level_start.clone();
    let mut by_level = vec![0u32; n];
    for (v, &d) in ws.dist.iter().enumerate() {
        by_level[fill[d as usize]] = v as u32;
        fill[d as usize] += 1;
    }

    let mut level = ecc_r;
    while 2 * level > best.ecc {
        let nodes = &by_level[level_start[level as usize]..level_start[level as usize + 1]];
        charge(nodes.len())?;
        if let Some(e) = eccentricities_max(g, nodes) {
            best = best.better(e);
        }
        sources_used += nodes.len();
        level -= 1;
    }

    Ok(DiameterResult {
        value: best.ecc,
        mode: DiameterMode::Exact,
        witness: (NodeId(best.source), NodeId(best.far)),
        sources_used,
        upper_bound: best.ecc,
    })
}

pub fn exact_diameter(g: &GridGraph) -> Result<DiameterResult> {
    exact_diameter_with(g, &DiameterOptions::default())
}

pub fn exact_diameter_with(g: &GridGraph, opts: &DiameterOptions) -> Result<DiameterResult> {
    if g.node_count() <= opts.all_source_cap {
        Ok(all_source_diameter(g))
    } else {
        pruned_diameter(g, opts.visit_budget)
    }
}

/// Lower bound from `k` eccentricities.
///
/// Sources are node 0, the far corner, then farthest-point iterates: the
/// farthest node from the latest source, or, when that was already used,
/// the node farthest from every source so far. Any eccentricity `e` bounds
/// the diameter by `2e`, so `upper_bound` is twice the smallest one seen.
pub fn estimate_diameter(g: &GridGraph, k: usize) -> DiameterResult {
    let n = g.node_count();
    let k = k.max(1).min(n);
    let mut ws = BfsWorkspace::new(n);
    let mut min_dist = vec![UNREACHED; n];
    let mut used = vec![false; n];
    let mut best: Option<Ecc> = None;
    let mut min_ecc = UNREACHED;
    let mut next = Some(0u32);
    let mut sources_used = 0;

    for round in 0..k {
        let Some(src) = next.take() else { break };
        used[src as usize] = true;
        let (ecc, far) = ws.run(g, src);
        sources_used += 1;
        let e = Ecc {
            ecc,
            source: src,
            far,
        };
        best = Some(best.map_or(e, |b| b.better(e)));
        min_ecc = min_ecc.min(ecc);
        for (m, &d) in min_dist.iter_mut().zip(&ws.dist) {
            *m = (*m).min(d);
        }

        let corner = g.params().corner_far().0;
        next = if round == 0 && !used[corner as usize] {
            Some(corner)
        } else if !used[far as usize] {
            Some(far)
        } else {
            let mut cand: Option<(u32, u32)> = None;
            for (v, &m) in min_dist.iter().enumerate() {
                if !used[v] && cand.is_none_or(|(bm, _)| m > bm) {
                    cand = Some((m, v as u32));
                }
            }
            cand.map(|(_, v)| v)
        };
    }

    let best = best.expect("at least one source");
    let upper = min_ecc.saturating_mul(2);
    log::debug!(
        "estimate_diameter: lower {} <= D <= {} from {} sources",
        best.ecc,
        upper,
        sources_used
    );
    DiameterResult {
        value: best.ecc,
        mode: DiameterMode::LowerBound,
        witness: (NodeId(best.source), NodeId(best.far)),
        sources_used,
        upper_bound: upper,
    }
}
