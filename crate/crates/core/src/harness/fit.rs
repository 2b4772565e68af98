//! Scaling fits over per-N means.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::records::TrialRecord;
use crate::error::{Error, Result};

pub const MIN_DISTINCT_N: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Edges,
    Diameter,
    CornerPath,
    Cuts,
    Isolated,
    Ball2,
    DescentSteps,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::Edges,
        Metric::Diameter,
        Metric::CornerPath,
        Metric::Cuts,
        Metric::Isolated,
        Metric::Ball2,
        Metric::DescentSteps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Edges => "edges",
            Metric::Diameter => "diameter",
            Metric::CornerPath => "corner_path",
            Metric::Cuts => "cuts",
            Metric::Isolated => "isolated",
            Metric::Ball2 => "ball2",
            Metric::DescentSteps => "descent_steps",
        }
    }

    pub fn value(self, r: &TrialRecord) -> Option<f64> {
        match self {
            Metric::Edges => Some(r.edges as f64),
            Metric::Diameter => r.diameter.map(f64::from),
            Metric::CornerPath => r.corner_path.map(f64::from),
            Metric::Cuts => r.cuts.map(|v| v as f64),
            Metric::Isolated => r.isolated.map(|v| v as f64),
            Metric::Ball2 => r.ball2.map(|v| v as f64),
            Metric::DescentSteps => r.descent_steps.map(|v| v as f64),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Fit(format!("unknown metric `{s}`")))
    }
}

/// Position of `s` relative to `d` and `2d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Below,
    SEqualsD,
    Intermediate,
    STwiceD,
    Beyond,
}

impl Regime {
    pub fn classify(d: usize, s: f64) -> Self {
        let d = d as f64;
        if s < d {
            Regime::Below
        } else if s == d {
            Regime::SEqualsD
        } else if s < 2.0 * d {
            Regime::Intermediate
        } else if s == 2.0 * d {
            Regime::STwiceD
        } else {
            Regime::Beyond
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::Below => "s<d",
            Regime::SEqualsD => "s=d",
            Regime::Intermediate => "d<s<2d",
            Regime::STwiceD => "s=2d",
            Regime::Beyond => "s>2d",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitKind {
    /// Slope of `ln mean` against `ln N`.
    PowerLaw,
    /// `mean · ln ln N / ln N`, summarised by its mean and max/min spread.
    LogLogRatio,
    /// Slope of `ln mean` against `ln ln N`.
    LogLogExponent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub regime: Regime,
    pub kind: FitKind,
    pub metric: Metric,
    /// Slope, or the mean ratio for [`FitKind::LogLogRatio`].
    pub estimate: f64,
    pub std_error: f64,
    pub r_squared: Option<f64>,
    /// `max / min` of the ratio series.
    pub spread: Option<f64>,
    pub n_min: u32,
    pub n_max: u32,
    /// `(N, mean)` pairs, or `(N, C(N))` for the ratio.
    pub points: Vec<(u32, f64)>,
}

impl fmt::Display for ScalingFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            FitKind::PowerLaw => "slope",
            FitKind::LogLogRatio => "ratio",
            FitKind::LogLogExponent => "delta",
        };
        writeln!(f, "{name} {}", self.estimate)?;
        writeln!(f, "std_error {}", self.std_error)?;
        if let Some(r2) = self.r_squared {
            writeln!(f, "r_squared {r2}")?;
        }
        if let Some(s) = self.spread {
            writeln!(f, "spread {s}")?;
        }
        writeln!(f, "regime {}", self.regime)?;
        writeln!(f, "metric {}", self.metric.name())?;
        writeln!(f, "n_range {} {}", self.n_min, self.n_max)?;
        for (n, v) in &self.points {
            writeln!(f, "point {n} {v}")?;
        }
        Ok(())
    }
}

/// Mean metric per N, requiring one `(d, s, β)` cell family.
fn means_by_n(records: &[TrialRecord], metric: Metric) -> Result<(Regime, Vec<(u32, f64)>)> {
    let first = records
        .first()
        .ok_or_else(|| Error::Fit("no records".into()))?;
    if records
        .iter()
        .any(|r| r.d != first.d || r.s != first.s || r.beta != first.beta)
    {
        return Err(Error::Fit(
            "records mix several (d, s, beta) cells; fit one family at a time".into(),
        ));
    }
    let mut sums: BTreeMap<u32, (f64, usize)> = BTreeMap::new();
    for r in records {
        if let Some(v) = metric.value(r) {
            let e = sums.entry(r.n).or_default();
            e.0 += v;
            e.1 += 1;
        }
    }
    let points: Vec<(u32, f64)> = sums
        .into_iter()
        .map(|(n, (sum, k))| (n, sum / k as f64))
        .collect();
    Ok((Regime::classify(first.d, first.s), points))
}

fn check_points(points: &mut [(u32, f64)], metric: Metric) -> Result<()> {
    points.sort_by_key(|p| p.0);
    if points.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Fit("repeated N in the point list".into()));
    }
    if points.len() < MIN_DISTINCT_N {
        return Err(Error::Fit(format!(
            "need at least {MIN_DISTINCT_N} distinct N with `{}` values, found {}",
            metric.name(),
            points.len()
        )));
    }
    if let Some(&(n, m)) = points.iter().find(|p| p.1.is_nan() || p.1 <= 0.0) {
        return Err(Error::Fit(format!("mean {} at N={n} is {m}, not positive", metric.name())));
    }
    Ok(())
}

struct Ols {
    slope: f64,
    std_error: f64,
    r_squared: f64,
}

fn ols(xs: &[f64], ys: &[f64]) -> Result<Ols> {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx.is_nan() || sxx <= 0.0 {
        return Err(Error::Fit("zero variance in the regressor".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let sst: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r_squared = if sst > 0.0 { 1.0 - ssr / sst } else { 1.0 };
    let std_error = (ssr / (k - 2.0) / sxx).sqrt();
    Ok(Ols {
        slope,
        std_error,
        r_squared,
    })
}

/// Least-squares slope of `ln(mean metric)` against `ln N`.
pub fn fit_power_law(records: &[TrialRecord], metric: Metric) -> Result<ScalingFit> {
    let (regime, points) = means_by_n(records, metric)?;
    power_law_of_means(points, regime, metric)
}

/// [`fit_power_law`] on precomputed `(N, mean)` points.
pub fn power_law_of_means(
    mut points: Vec<(u32, f64)>,
    regime: Regime,
    metric: Metric,
) -> Result<ScalingFit> {
    check_points(&mut points, metric)?;
    let xs: Vec<f64> = points.iter().map(|p| f64::from(p.0).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let fit = ols(&xs, &ys)?;
    Ok(ScalingFit {
        regime,
        kind: FitKind::PowerLaw,
        metric,
        estimate: fit.slope,
        std_error: fit.std_error,
        r_squared: Some(fit.r_squared),
        spread: None,
        n_min: points[0].0,
        n_max: points[points.len() - 1].0,
        points,
    })
}

/// Diameter version of [`fit_loglog_ratio_of`].
pub fn fit_loglog_ratio(records: &[TrialRecord], regime: Regime) -> Result<ScalingFit> {
    fit_loglog_ratio_of(records, regime, Metric::Diameter)
}

/// For `s = d`, the series `C(N) = mean · ln ln N / ln N`; for `d < s < 2d`,
/// the slope of `ln mean` against `ln ln N`. Every N must be at least 16.
pub fn fit_loglog_ratio_of(
    records: &[TrialRecord],
    regime: Regime,
    metric: Metric,
) -> Result<ScalingFit> {
    let (_, points) = means_by_n(records, metric)?;
    loglog_of_means(points, regime, metric)
}

/// [`fit_loglog_ratio_of`] on precomputed `(N, mean)` points.
pub fn loglog_of_means(
    mut points: Vec<(u32, f64)>,
    regime: Regime,
    metric: Metric,
) -> Result<ScalingFit> {
    check_points(&mut points, metric)?;
    if let Some(&(n, _)) = points.iter().find(|p| p.0 < 16) {
        return Err(Error::Fit(format!("N={n} is too small; log-log fits need N >= 16")));
    }
    let (n_min, n_max) = (points[0].0, points[points.len() - 1].0);
    match regime {
        Regime::SEqualsD => {
            let ratios: Vec<(u32, f64)> = points
                .iter()
                .map(|&(n, m)| {
                    let ln = f64::from(n).ln();
                    (n, m * ln.ln() / ln)
                })
                .collect();
            let vals: Vec<f64> = ratios.iter().map(|r| r.1).collect();
            let k = vals.len() as f64;
            let mean = vals.iter().sum::<f64>() / k;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
            let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
            Ok(ScalingFit {
                regime,
                kind: FitKind::LogLogRatio,
                metric,
                estimate: mean,
                std_error: (var / k).sqrt(),
                r_squared: None,
                spread: Some(max / min),
                n_min,
                n_max,
                points: ratios,
            })
        }
        Regime::Intermediate => {
            let xs: Vec<f64> = points.iter().map(|p| f64::from(p.0).ln().ln()).collect();
            let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
            let fit = ols(&xs, &ys)?;
            Ok(ScalingFit {
                regime,
                kind: FitKind::LogLogExponent,
                metric,
                estimate: fit.slope,
                std_error: fit.std_error,
                r_squared: Some(fit.r_squared),
                spread: None,
                n_min,
                n_max,
                points,
            })
        }
        other => Err(Error::Fit(format!(
            "no log-log fit for regime {other}; use a power-law fit"
        ))),
    }
}
