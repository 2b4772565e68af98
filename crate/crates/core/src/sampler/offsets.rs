use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{long_range_probability, ModelParams};

/// Above this probability a class is sampled pair by pair instead of by
/// geometric skips, keeping `ln(1 - p)` away from `-inf`.
pub(crate) const DENSE_THRESHOLD: f64 = 0.99;

/// All long-range pairs `{x, x + delta}` that share one displacement.
///
/// `delta` is lexicographically positive (first nonzero entry is positive),
/// so each unordered pair lands in exactly one class.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetClass {
    pub delta: Vec<i64>,
    /// `prod_j (N + 1 - |delta_j|)`.
    pub pair_count: u64,
    pub prob: f64,
}

impl OffsetClass {
    pub fn distance(&self) -> u64 {
        self.delta.iter().map(|c| c.unsigned_abs()).sum()
    }

    /// Endpoints of the `t`-th pair in the class's canonical indexing.
    ///
    /// The base point `x` is decoded by mixed radix over the per-axis
    /// ranges, coordinate 0 least significant. Returns `(min, max)`.
    pub fn pair(&self, params: &ModelParams, t: u64) -> (u32, u32) {
        let layout = ClassLayout::new(self, params);
        layout.pair(t)
    }

    /// Appends the realised pairs of this class to `out` by geometric skips.
    pub(crate) fn sample_into<R: Rng + ?Sized>(
        &self,
        params: &ModelParams,
        rng: &mut R,
        out: &mut Vec<(u32, u32)>,
        cap: u64,
    ) -> Result<()> {
        let p = self.prob;
        if p <= 0.0 || self.pair_count == 0 {
            return Ok(());
        }
        let layout = ClassLayout::new(self, params);
        let m = self.pair_count;
        let push = |t: u64, out: &mut Vec<(u32, u32)>| -> Result<()> {
            if out.len() as u64 >= cap {
                return Err(Error::EdgeCapExceeded {
                    delta: self.delta.clone(),
                    cap,
                });
            }
            out.push(layout.pair(t));
            Ok(())
        };
        if p > DENSE_THRESHOLD {
            for t in 0..m {
                if rng.gen::<f64>() < p {
                    push(t, out)?;
                }
            }
            return Ok(());
        }
        let log_q = (-p).ln_1p();
        let mut next: u64 = 0;
        loop {
            // u in (0, 1]; P(skip = j) = (1 - p)^j p.
            let u = 1.0 - rng.gen::<f64>();
            let skip = (u.ln() / log_q).floor();
            if skip >= (m - next) as f64 {
                break;
            }
            next += skip as u64;
            push(next, out)?;
            next += 1;
            if next >= m {
                break;
            }
        }
        Ok(())
    }
}

/// Precomputed decode data of one class.
struct ClassLayout {
    lens: Vec<u32>,
    los: Vec<u32>,
    strides: Vec<u32>,
    delta_id: i64,
}

impl ClassLayout {
    fn new(class: &OffsetClass, params: &ModelParams) -> Self {
        let side = i64::from(params.side());
        let mut lens = Vec::with_capacity(params.d());
        let mut los = Vec::with_capacity(params.d());
        let mut strides = Vec::with_capacity(params.d());
        let mut delta_id = 0i64;
        let mut stride = 1i64;
        for &dj in &class.delta {
            lens.push((side - dj.abs()) as u32);
            los.push(if dj < 0 { (-dj) as u32 } else { 0 });
            strides.push(stride as u32);
            delta_id += dj * stride;
            stride *= side;
        }
        Self {
            lens,
            los,
            strides,
            delta_id,
        }
    }

    #[inline]
    fn pair(&self, mut t: u64) -> (u32, u32) {
        let mut a: u32 = 0;
        for j in 0..self.lens.len() {
            let len = u64::from(self.lens[j]);
            let xj = self.los[j] + (t % len) as u32;
            t /= len;
            a += xj * self.strides[j];
        }
        let b = (i64::from(a) + self.delta_id) as u32;
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

/// Lexicographic stream of every offset class of `params`.
pub struct Offsets {
    params: ModelParams,
    delta: Vec<i64>,
    done: bool,
}

pub fn enumerate_offsets(params: &ModelParams) -> Offsets {
    let n = i64::from(params.n());
    let mut delta = vec![-n; params.d()];
    delta[0] = 0;
    Offsets {
        params: *params,
        delta,
        done: false,
    }
}

impl Offsets {
    fn advance(&mut self) {
        let n = i64::from(self.params.n());
        for j in (0..self.delta.len()).rev() {
            let lo = if j == 0 { 0 } else { -n };
            if self.delta[j] < n {
                self.delta[j] += 1;
                return;
            }
            self.delta[j] = lo;
        }
        self.done = true;
    }
}

impl Iterator for Offsets {
    type Item = OffsetClass;

    fn next(&mut self) -> Option<OffsetClass> {
        while !self.done {
            let delta = &self.delta;
            let positive = delta.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0);
            let dist: u64 = delta.iter().map(|c| c.unsigned_abs()).sum();
            let class = if positive && dist >= 2 {
                let side = i64::from(self.params.side());
                let pair_count = delta.iter().map(|c| (side - c.abs()) as u64).product();
                Some(OffsetClass {
                    delta: delta.clone(),
                    pair_count,
                    prob: long_range_probability(dist, self.params.s(), self.params.beta()),
                })
            } else {
                None
            };
            self.advance();
            if class.is_some() {
                return class;
            }
        }
        None
    }
}
