//! Greedy norm descent: repeatedly jump to the smallest-norm node within
//! two hops, driving a walk toward the origin.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{ModelParams, NodeId};
use crate::sampler::GridGraph;

#[derive(Debug, Clone, PartialEq)]
pub struct DescentTrace {
    pub start: NodeId,
    /// `X_0 = start, X_1, ...`
    pub chain: Vec<NodeId>,
    pub norms: Vec<u64>,
    pub c: u32,
    pub threshold: f64,
    /// First `r` with `||X_r|| <= threshold`.
    pub steps_to_threshold: Option<usize>,
}

impl DescentTrace {
    pub fn steps(&self) -> usize {
        self.chain.len() - 1
    }
}

impl fmt::Display for DescentTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "descent start={} c={} threshold={} steps_to_threshold=",
            self.start, self.c, self.threshold
        )?;
        match self.steps_to_threshold {
            Some(k) => writeln!(f, "{k}")?,
            None => writeln!(f, "none")?,
        }
        for (r, (id, norm)) in self.chain.iter().zip(&self.norms).enumerate() {
            writeln!(f, "{r} {id} {norm}")?;
        }
        Ok(())
    }
}

/// `exp((ln N)^(d / 2^c))`.
pub fn descent_threshold(params: &ModelParams, c: u32) -> f64 {
    let log_n = f64::from(params.n()).ln();
    let exponent = params.d() as f64 / 2f64.powi(c as i32);
    log_n.powf(exponent).exp()
}

/// `⌈10·ln N / ln ln N⌉`, at least 1.
pub fn default_max_steps(n: u32) -> usize {
    let ln = f64::from(n).ln();
    let lnln = ln.ln();
    if lnln <= 0.0 {
        return 10;
    }
    ((10.0 * ln / lnln).ceil() as usize).max(1)
}

/// Smallest-norm node of the closed 2-ball around `current`, ties to the
/// smaller id.
pub fn descent_step(g: &GridGraph, current: NodeId) -> NodeId {
    let p = g.params();
    let key = |v: u32| (p.norm_of(v), v);
    let mut best = key(current.0);
    for &u in g.neighbors(current.0) {
        best = best.min(key(u));
        for &v in g.neighbors(u) {
            best = best.min(key(v));
        }
    }
    NodeId(best.1)
}

/// Iterates [`descent_step`] from `start`.
///
/// Stops at a fixed point, at `max_steps`, or once the threshold is met and
/// a step brings no strict decrease.
pub fn descent_run(g: &GridGraph, start: NodeId, c: u32, max_steps: usize) -> Result<DescentTrace> {
    if max_steps == 0 {
        return Err(Error::InvalidParams("max_steps must be at least 1".into()));
    }
    if start.index() >= g.node_count() {
        return Err(Error::OutOfRange(format!("start node {start}")));
    }
    let p = g.params();
    let threshold = descent_threshold(p, c);
    let mut chain = vec![start];
    let mut norms = vec![p.norm_of(start.0)];
    let mut reached = (norms[0] as f64 <= threshold).then_some(0);
    let mut current = start;
    for step in 1..=max_steps {
        let next = descent_step(g, current);
        if next == current {
            break;
        }
        let norm = p.norm_of(next.0);
        let stalled = norm == *norms.last().unwrap();
        chain.push(next);
        norms.push(norm);
        if reached.is_none() && norm as f64 <= threshold {
            reached = Some(step);
        }
        if stalled && reached.is_some() {
            break;
        }
        current = next;
    }
    Ok(DescentTrace {
        start,
        chain,
        norms,
        c,
        threshold,
        steps_to_threshold: reached,
    })
}
