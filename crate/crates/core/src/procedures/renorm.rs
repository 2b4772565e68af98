//! Hierarchical subcube certificates.
//!
//! Level 0 is the whole box. A level-`r` cube is split along every axis into
//! blocks of side `L_{r+1} = ⌈N^(α^(r+1))⌉` starting at the parent's lower
//! corner; a remainder shorter than one block is folded into the last block,
//! so blocks stay disjoint and every block spans between `L` and `2L - 1`.
//!
//! The certificate holds when, at each level `r = 1..m`, every pair of
//! sibling subcubes is joined by at least one edge. It then yields explicit
//! paths of length at most `2^(m+1)·d·L_m` between any two nodes.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{ModelParams, NodeId};
use crate::sampler::GridGraph;

/// Inclusive axis-aligned box of grid coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubeBox {
    pub lo: Vec<u32>,
    pub hi: Vec<u32>,
}

impl CubeBox {
    pub fn new(lo: Vec<u32>, hi: Vec<u32>, params: &ModelParams) -> Result<Self> {
        if lo.len() != params.d() || hi.len() != params.d() {
            return Err(Error::DimensionMismatch {
                expected: params.d(),
                got: lo.len().max(hi.len()),
            });
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::InvalidBox(format!("empty box {lo:?}..{hi:?}")));
        }
        if hi.iter().any(|&h| h > params.n()) {
            return Err(Error::InvalidBox(format!(
                "box {lo:?}..{hi:?} leaves the grid (N = {})",
                params.n()
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn whole(params: &ModelParams) -> Self {
        Self {
            lo: vec![0; params.d()],
            hi: vec![params.n(); params.d()],
        }
    }

    pub fn contains(&self, coords: &[u32]) -> bool {
        coords
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(c, (l, h))| l <= c && c <= h)
    }

    pub fn volume(&self) -> u64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| u64::from(h - l + 1))
            .product()
    }

    fn lo_id(&self, params: &ModelParams) -> u32 {
        corner_id(self.lo.iter().copied(), params)
    }
}

impl fmt::Display for CubeBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        write!(f, "[{}]..[{}]", join(&self.lo), join(&self.hi))
    }
}

fn corner_id(coords: impl Iterator<Item = u32>, params: &ModelParams) -> u32 {
    let side = params.side();
    let mut stride = 1;
    let mut id = 0;
    for c in coords {
        id += c * stride;
        stride *= side;
    }
    id
}

/// Some edge with one endpoint in each box, oriented `(in a, in b)`.
pub fn subcube_connected(
    g: &GridGraph,
    a: &CubeBox,
    b: &CubeBox,
) -> Result<Option<(NodeId, NodeId)>> {
    let params = g.params();
    for bx in [a, b] {
        CubeBox::new(bx.lo.clone(), bx.hi.clone(), params)?;
    }
    let mut cu = a.lo.clone();
    let mut cv = vec![0u32; params.d()];
    loop {
        let u = corner_id(cu.iter().copied(), params);
        for &v in g.neighbors(u) {
            params.decode_into(v, &mut cv);
            if b.contains(&cv) {
                return Ok(Some((NodeId(u), NodeId(v))));
            }
        }
        // odometer over a, axis 0 fastest
        let mut axis = 0;
        loop {
            if axis == cu.len() {
                return Ok(None);
            }
            if cu[axis] < a.hi[axis] {
                cu[axis] += 1;
                break;
            }
            cu[axis] = a.lo[axis];
            axis += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenormPlan {
    alpha: f64,
    side_lengths: Vec<u32>,
    d: usize,
    n: u32,
}

impl RenormPlan {
    /// Requires `0 < alpha < 1`, `2dα > s` and `m >= 1` strictly decreasing sides.
    pub fn new(params: &ModelParams, alpha: f64, m: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidPlan(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        if 2.0 * params.d() as f64 * alpha <= params.s() {
            return Err(Error::InvalidPlan(format!(
                "need 2dα > s, got 2·{}·{alpha} <= {}",
                params.d(),
                params.s()
            )));
        }
        if m == 0 {
            return Err(Error::InvalidPlan("at least one level is required".into()));
        }
        let n = f64::from(params.n());
        let mut side_lengths = Vec::with_capacity(m);
        let mut prev = params.side();
        for r in 1..=m {
            let exact = n.powf(alpha.powi(r as i32));
            let side = ((exact - 1e-9).ceil().max(1.0)) as u32;
            if side >= prev {
                return Err(Error::InvalidPlan(format!(
                    "level {r} has side {side}, not below the level above ({prev}); \
                     the side lengths are exhausted"
                )));
            }
            side_lengths.push(side);
            prev = side;
        }
        Ok(Self {
            alpha,
            side_lengths,
            d: params.d(),
            n: params.n(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn levels(&self) -> usize {
        self.side_lengths.len()
    }

    /// `⌈N^(α^r)⌉` for `r = 1..=m`.
    pub fn side_lengths(&self) -> &[u32] {
        &self.side_lengths
    }

    /// `2^(m+1)·d·⌈N^(α^m)⌉`.
    pub fn implied_bound(&self) -> u64 {
        let m = self.levels() as u32;
        2u64.pow(m + 1) * self.d as u64 * u64::from(*self.side_lengths.last().unwrap())
    }

    /// Child ranges of `[lo, hi]` at 1-based `level`.
    fn split(&self, lo: u32, hi: u32, level: usize) -> impl Iterator<Item = (u32, u32)> {
        let side = self.side_lengths[level - 1];
        let count = ((hi - lo + 1) / side).max(1);
        (0..count).map(move |i| {
            let start = lo + i * side;
            let end = if i + 1 == count { hi } else { start + side - 1 };
            (start, end)
        })
    }

    /// Writes the containing cube's `(lo, hi)` per axis at every level into
    /// `out`, laid out `[level][axis]`.
    fn locate(&self, coords: &[u32], out: &mut Vec<(u32, u32)>) {
        out.clear();
        let mut bounds: Vec<(u32, u32)> = vec![(0, self.n); self.d];
        for level in 1..=self.levels() {
            let side = self.side_lengths[level - 1];
            for (axis, b) in bounds.iter_mut().enumerate() {
                let (lo, hi) = *b;
                let count = ((hi - lo + 1) / side).max(1);
                let i = ((coords[axis] - lo) / side).min(count - 1);
                let start = lo + i * side;
                let end = if i + 1 == count { hi } else { start + side - 1 };
                *b = (start, end);
            }
            out.extend_from_slice(&bounds);
        }
    }
}

type PairKey = (usize, u32, u32);

/// Outcome at one level of the hierarchy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelOutcome {
    pub level: usize,
    pub side: u32,
    pub parents: usize,
    pub sibling_pairs: u64,
    pub missing_pairs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailingPair {
    pub level: usize,
    pub a: CubeBox,
    pub b: CubeBox,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenormCertificate {
    pub plan: RenormPlan,
    pub valid: bool,
    /// First unjoined sibling pair at the lowest failing level.
    pub failing: Option<FailingPair>,
    pub levels: Vec<LevelOutcome>,
    pub implied_bound: Option<u64>,
    params: ModelParams,
    witnesses: HashMap<PairKey, (u32, u32)>,
}

impl RenormCertificate {
    pub fn failing_level(&self) -> Option<usize> {
        self.failing.as_ref().map(|f| f.level)
    }
}

impl fmt::Display for RenormCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "renorm alpha={} m={} valid={}",
            self.plan.alpha,
            self.plan.levels(),
            self.valid
        )?;
        match self.implied_bound {
            Some(b) => writeln!(f, " implied_bound={b}")?,
            None => writeln!(f, " implied_bound=none")?,
        }
        for l in &self.levels {
            writeln!(
                f,
                "level {} side={} parents={} pairs={} missing={}",
                l.level, l.side, l.parents, l.sibling_pairs, l.missing_pairs
            )?;
        }
        if let Some(fp) = &self.failing {
            writeln!(f, "failing level={} a={} b={}", fp.level, fp.a, fp.b)?;
        }
        Ok(())
    }
}

/// Tags sibling pairs joined by long edges, then audits every level.
///
/// Face-adjacent siblings are always joined through lattice edges, so only
/// long edges need the tagging pass.
pub fn renorm_certificate(g: &GridGraph, plan: &RenormPlan) -> Result<RenormCertificate> {
    let params = *g.params();
    if plan.d != params.d() || plan.n != params.n() {
        return Err(Error::InvalidPlan(format!(
            "plan built for d={} N={}, graph has d={} N={}",
            plan.d,
            plan.n,
            params.d(),
            params.n()
        )));
    }
    let d = params.d();
    let m = plan.levels();

    let mut witnesses: HashMap<PairKey, (u32, u32)> = HashMap::new();
    let (mut cu, mut cv) = (vec![0u32; d], vec![0u32; d]);
    let (mut bu, mut bv) = (Vec::new(), Vec::new());
    for &(u, v) in g.long_edges() {
        params.decode_into(u, &mut cu);
        params.decode_into(v, &mut cv);
        plan.locate(&cu, &mut bu);
        plan.locate(&cv, &mut bv);
        for level in 1..=m {
            let su = &bu[(level - 1) * d..level * d];
            let sv = &bv[(level - 1) * d..level * d];
            if su != sv {
                let iu = corner_id(su.iter().map(|b| b.0), &params);
                let iv = corner_id(sv.iter().map(|b| b.0), &params);
                let (key, w) = if iu < iv {
                    ((level, iu, iv), (u, v))
                } else {
                    ((level, iv, iu), (v, u))
                };
                witnesses.entry(key).or_insert(w);
                break;
            }
        }
    }

    let mut levels = Vec::with_capacity(m);
    let mut failing = None;
    let mut parents = vec![CubeBox::whole(&params)];
    for level in 1..=m {
        let mut outcome = LevelOutcome {
            level,
            side: plan.side_lengths[level - 1],
            parents: parents.len(),
            sibling_pairs: 0,
            missing_pairs: 0,
        };
        let mut next = Vec::new();
        for parent in &parents {
            let axes: Vec<Vec<(u32, u32)>> = (0..d)
                .map(|j| plan.split(parent.lo[j], parent.hi[j], level).collect())
                .collect();
            let children = product_children(&axes);
            for i in 0..children.len() {
                for k in i + 1..children.len() {
                    let (a, b) = (&children[i], &children[k]);
                    outcome.sibling_pairs += 1;
                    if face_adjacent(&a.1, &b.1) {
                        continue;
                    }
                    let (ia, ib) = (a.0.lo_id(&params), b.0.lo_id(&params));
                    let key = (level, ia.min(ib), ia.max(ib));
                    if !witnesses.contains_key(&key) {
                        outcome.missing_pairs += 1;
                        if failing.is_none() {
                            failing = Some(FailingPair {
                                level,
                                a: a.0.clone(),
                                b: b.0.clone(),
                            });
                        }
                    }
                }
            }
            next.extend(children.into_iter().map(|c| c.0));
        }
        levels.push(outcome);
        parents = next;
    }

    let valid = failing.is_none();
    Ok(RenormCertificate {
        plan: plan.clone(),
        valid,
        failing,
        levels,
        implied_bound: valid.then(|| plan.implied_bound()),
        params,
        witnesses,
    })
}

/// Cartesian product of per-axis ranges, with per-axis child indices.
fn product_children(axes: &[Vec<(u32, u32)>]) -> Vec<(CubeBox, Vec<usize>)> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; axes.len()];
    loop {
        let lo = idx.iter().zip(axes).map(|(&i, a)| a[i].0).collect();
        let hi = idx.iter().zip(axes).map(|(&i, a)| a[i].1).collect();
        out.push((CubeBox { lo, hi }, idx.clone()));
        let mut axis = 0;
        loop {
            if axis == axes.len() {
                return out;
            }
            idx[axis] += 1;
            if idx[axis] < axes[axis].len() {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }
}

fn face_adjacent(a: &[usize], b: &[usize]) -> bool {
    let mut diff = 0;
    for (x, y) in a.iter().zip(b) {
        match x.abs_diff(*y) {
            0 => {}
            1 => diff += 1,
            _ => return false,
        }
    }
    diff == 1
}

/// Explicit `x`-`y` path under a valid certificate.
///
/// Inside a level-`(r-1)` cube: if `x` and `y` share their level-`r` cube,
/// descend; otherwise cross the witness edge between their two cubes and
/// solve both halves one level down. Below level `m`, walk the lattice.
pub fn renorm_path(
    g: &GridGraph,
    cert: &RenormCertificate,
    x: NodeId,
    y: NodeId,
) -> Result<Vec<NodeId>> {
    if !cert.valid {
        return Err(Error::InvalidCertificate);
    }
    let n = g.node_count() as u32;
    if x.0 >= n || y.0 >= n {
        return Err(Error::OutOfRange(format!("path endpoint (node count {n})")));
    }
    let mut builder = PathBuilder {
        cert,
        params: cert.params,
        out: vec![x.0],
    };
    builder.walk(x.0, y.0, 1);
    Ok(builder.out.into_iter().map(NodeId).collect())
}

struct PathBuilder<'a> {
    cert: &'a RenormCertificate,
    params: ModelParams,
    out: Vec<u32>,
}

impl PathBuilder<'_> {
    fn chain(&self, id: u32) -> Vec<(u32, u32)> {
        let mut c = vec![0; self.params.d()];
        self.params.decode_into(id, &mut c);
        let mut out = Vec::new();
        self.cert.plan.locate(&c, &mut out);
        out
    }

    /// Appends a path from `x` (already last in `out`) to `y`.
    fn walk(&mut self, x: u32, y: u32, level: usize) {
        if x == y {
            return;
        }
        let d = self.params.d();
        if level > self.cert.plan.levels() {
            self.lattice_walk(x, y);
            return;
        }
        let (bx, by) = (self.chain(x), self.chain(y));
        let sx = &bx[(level - 1) * d..level * d];
        let sy = &by[(level - 1) * d..level * d];
        if sx == sy {
            self.walk(x, y, level + 1);
            return;
        }
        let (u, v) = self.witness(level, sx, sy);
        self.walk(x, u, level + 1);
        self.out.push(v);
        self.walk(v, y, level + 1);
    }

    /// Edge `(u in sx, v in sy)` between two sibling cubes.
    fn witness(&self, level: usize, sx: &[(u32, u32)], sy: &[(u32, u32)]) -> (u32, u32) {
        let p = &self.params;
        let ix = corner_id(sx.iter().map(|b| b.0), p);
        let iy = corner_id(sy.iter().map(|b| b.0), p);
        let key = (level, ix.min(iy), ix.max(iy));
        if let Some(&(a, b)) = self.cert.witnesses.get(&key) {
            return if ix < iy { (a, b) } else { (b, a) };
        }
        // Face-adjacent siblings: use a lattice edge across the shared face.
        let mut pu: Vec<u32> = sx.iter().map(|b| b.0).collect();
        let mut pv = pu.clone();
        for j in 0..sx.len() {
            if sx[j].1 + 1 == sy[j].0 {
                pu[j] = sx[j].1;
                pv[j] = sy[j].0;
            } else if sy[j].1 + 1 == sx[j].0 {
                pu[j] = sx[j].0;
                pv[j] = sy[j].1;
            }
        }
        (corner_id(pu.into_iter(), p), corner_id(pv.into_iter(), p))
    }

    fn lattice_walk(&mut self, x: u32, y: u32) {
        let d = self.params.d();
        let (mut cx, mut cy) = (vec![0; d], vec![0; d]);
        self.params.decode_into(x, &mut cx);
        self.params.decode_into(y, &mut cy);
        let mut id = x;
        for j in 0..d {
            let stride = self.params.stride(j);
            while cx[j] != cy[j] {
                if cx[j] < cy[j] {
                    cx[j] += 1;
                    id += stride;
                } else {
                    cx[j] -= 1;
                    id -= stride;
                }
                self.out.push(id);
            }
        }
    }
}
