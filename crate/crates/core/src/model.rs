//! Model parameters, grid geometry and the edge law.
//!
//! Nodes are the integer points of the box `{0..N}^d`. Two nodes at L1
//! distance 1 are always joined; a pair at distance `k >= 2` is joined
//! independently with probability `1 - exp(-beta / k^s)`.
//!
//! Points are linearised with coordinate 0 least significant:
//! `idx(x) = sum_j x_j * (N+1)^j`. Every file format in the crate relies on
//! this rule.

use std::fmt;

use crate::error::{Error, Result};

/// Largest admissible hop count bound `d·N`; distances are stored in 32 bits.
pub const MAX_SPAN: u64 = (1 << 31) - 1;

/// Parameters `(d, N, s, beta, seed)` of one graph distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    d: usize,
    n: u32,
    s: f64,
    beta: f64,
    seed: u64,
    node_count: u32,
}

impl ModelParams {
    pub fn new(d: usize, n: u32, s: f64, beta: f64, seed: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParams("d must be at least 1".into()));
        }
        if n == 0 {
            return Err(Error::InvalidParams("N must be at least 1".into()));
        }
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidParams(format!("s must be positive and finite, got {s}")));
        }
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::InvalidParams(format!("beta must be nonnegative, got {beta}")));
        }
        if (d as u64).saturating_mul(u64::from(n)) > MAX_SPAN {
            return Err(Error::InvalidParams(format!(
                "d·N = {}·{} exceeds the 31-bit hop-count range",
                d, n
            )));
        }
        let side = u64::from(n) + 1;
        let mut count: u64 = 1;
        for _ in 0..d {
            count = count
                .checked_mul(side)
                .filter(|&c| c <= u64::from(u32::MAX))
                .ok_or_else(|| {
                    Error::InvalidParams(format!("(N+1)^d = {side}^{d} overflows the node index range"))
                })?;
        }
        Ok(Self {
            d,
            n,
            s,
            beta,
            seed,
            node_count: count as u32,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `(N+1)^d`.
    pub fn node_count(&self) -> usize {
        self.node_count as usize
    }

    /// Side of the box in nodes, `N+1`.
    pub fn side(&self) -> u32 {
        self.n + 1
    }

    /// Largest possible L1 distance, `d·N`.
    pub fn max_distance(&self) -> u64 {
        self.d as u64 * u64::from(self.n)
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::InvalidParams(format!("beta must be nonnegative, got {beta}")));
        }
        self.beta = beta;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `(N+1)^j` for `j < d`.
    pub fn stride(&self, axis: usize) -> u32 {
        self.side().pow(axis as u32)
    }

    pub fn corner_zero(&self) -> NodeId {
        NodeId(0)
    }

    /// The node `(N, ..., N)`.
    pub fn corner_far(&self) -> NodeId {
        NodeId(self.node_count - 1)
    }

    /// The node `(⌊N/2⌋, ..., ⌊N/2⌋)`.
    pub fn center(&self) -> NodeId {
        let half = self.n / 2;
        NodeId((0..self.d).map(|j| half * self.stride(j)).sum())
    }

    /// Decodes `id` into `out` without allocating. `out.len()` must be `d`.
    #[inline]
    pub fn decode_into(&self, id: u32, out: &mut [u32]) {
        debug_assert_eq!(out.len(), self.d);
        let side = self.side();
        let mut rest = id;
        for c in out.iter_mut() {
            *c = rest % side;
            rest /= side;
        }
    }

    /// Origin norm of the node with index `id`.
    #[inline]
    pub fn norm_of(&self, id: u32) -> u64 {
        if self.d == 1 {
            return u64::from(id);
        }
        let side = self.side();
        let mut rest = id;
        let mut sum = 0u64;
        for _ in 0..self.d {
            sum += u64::from(rest % side);
            rest /= side;
        }
        sum
    }

    /// L1 distance between two node indices.
    #[inline]
    pub fn distance_of(&self, a: u32, b: u32) -> u64 {
        if self.d == 1 {
            return u64::from(a.abs_diff(b));
        }
        let side = self.side();
        let (mut ra, mut rb) = (a, b);
        let mut sum = 0u64;
        for _ in 0..self.d {
            sum += u64::from((ra % side).abs_diff(rb % side));
            ra /= side;
            rb /= side;
        }
        sum
    }
}

/// Linear index of a grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for NodeId {
    fn from(v: u32) -> Self {
        NodeId(v)
    }
}

/// A point of `{0..N}^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridPoint {
    coords: Vec<u32>,
}

impl GridPoint {
    /// Checks length and range against `params`.
    pub fn new(coords: Vec<u32>, params: &ModelParams) -> Result<Self> {
        if coords.len() != params.d() {
            return Err(Error::DimensionMismatch {
                expected: params.d(),
                got: coords.len(),
            });
        }
        if let Some(c) = coords.iter().find(|&&c| c > params.n()) {
            return Err(Error::OutOfRange(format!("coordinate {c} (N = {})", params.n())));
        }
        Ok(Self { coords })
    }

    pub fn origin(params: &ModelParams) -> Self {
        Self {
            coords: vec![0; params.d()],
        }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// `sum_j |a_j - b_j|`.
pub fn l1_distance(a: &GridPoint, b: &GridPoint) -> Result<u64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(a.coords
        .iter()
        .zip(&b.coords)
        .map(|(&x, &y)| u64::from(x.abs_diff(y)))
        .sum())
}

/// `||p|| = sum_j p_j`; coordinates are nonnegative so this is the distance to the origin.
pub fn origin_norm(p: &GridPoint) -> u64 {
    p.coords.iter().map(|&c| u64::from(c)).sum()
}

/// Probability that a pair at distance `k >= 2` is joined: `1 - exp(-beta / k^s)`.
///
/// Evaluated through `expm1` so tiny rates keep full relative precision.
#[inline]
pub fn long_range_probability(k: u64, s: f64, beta: f64) -> f64 {
    if beta.is_infinite() {
        return 1.0;
    }
    let rate = beta / (k as f64).powf(s);
    -(-rate).exp_m1()
}

/// Edge probability at distance `k` under `params`.
pub fn edge_probability(k: u64, params: &ModelParams) -> Result<f64> {
    match k {
        0 => Err(Error::ZeroDistance),
        1 => Ok(1.0),
        _ => Ok(long_range_probability(k, params.s(), params.beta())),
    }
}

pub fn node_id(p: &GridPoint, params: &ModelParams) -> Result<NodeId> {
    if p.dim() != params.d() {
        return Err(Error::DimensionMismatch {
            expected: params.d(),
            got: p.dim(),
        });
    }
    let side = params.side();
    let mut id: u32 = 0;
    for &c in p.coords.iter().rev() {
        if c > params.n() {
            return Err(Error::OutOfRange(format!("coordinate {c} (N = {})", params.n())));
        }
        id = id * side + c;
    }
    Ok(NodeId(id))
}

pub fn grid_point(id: NodeId, params: &ModelParams) -> Result<GridPoint> {
    if id.index() >= params.node_count() {
        return Err(Error::OutOfRange(format!(
            "node {id} (node count {})",
            params.node_count()
        )));
    }
    let mut coords = vec![0; params.d()];
    params.decode_into(id.0, &mut coords);
    Ok(GridPoint { coords })
}
