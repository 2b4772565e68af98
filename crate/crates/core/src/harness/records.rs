//! Per-trial rows and per-cell aggregates, with their CSV forms.

use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Fixed leading columns; `tail_sum_psi<v>` columns and `wall_ms` follow.
pub const BASE_COLUMNS: [&str; 14] = [
    "d",
    "N",
    "s",
    "beta",
    "trial",
    "edges",
    "diameter",
    "diam_mode",
    "corner_path",
    "cuts",
    "isolated",
    "ball2",
    "descent_steps",
    "renorm_valid",
];

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub d: usize,
    pub n: u32,
    pub s: f64,
    pub beta: f64,
    pub trial: u64,
    pub edges: u64,
    pub diameter: Option<u32>,
    /// `exact` or `lower_bound`.
    pub diam_mode: Option<String>,
    pub corner_path: Option<u32>,
    pub cuts: Option<u64>,
    pub isolated: Option<u64>,
    pub ball2: Option<u64>,
    /// Steps until the norm first meets the descent threshold.
    pub descent_steps: Option<u64>,
    pub renorm_valid: Option<bool>,
    /// `(psi, sum)` in config order.
    pub tail_sums: Vec<(f64, u64)>,
    pub wall_ms: Option<f64>,
}

impl TrialRecord {
    pub fn new(d: usize, n: u32, s: f64, beta: f64, trial: u64) -> Self {
        Self {
            d,
            n,
            s,
            beta,
            trial,
            edges: 0,
            diameter: None,
            diam_mode: None,
            corner_path: None,
            cuts: None,
            isolated: None,
            ball2: None,
            descent_steps: None,
            renorm_valid: None,
            tail_sums: Vec::new(),
            wall_ms: None,
        }
    }

    fn same_cell(&self, other: &Self) -> bool {
        self.d == other.d && self.n == other.n && self.s == other.s && self.beta == other.beta
    }

    /// Numeric metric columns, in CSV order.
    fn metrics(&self, psi: &[f64]) -> Vec<Option<f64>> {
        let mut out = vec![
            Some(self.edges as f64),
            self.diameter.map(f64::from),
            self.corner_path.map(f64::from),
            self.cuts.map(|v| v as f64),
            self.isolated.map(|v| v as f64),
            self.ball2.map(|v| v as f64),
            self.descent_steps.map(|v| v as f64),
            self.renorm_valid.map(|v| if v { 1.0 } else { 0.0 }),
        ];
        for &p in psi {
            out.push(
                self.tail_sums
                    .iter()
                    .find(|(q, _)| *q == p)
                    .map(|&(_, v)| v as f64),
            );
        }
        out.push(self.wall_ms);
        out
    }
}

fn psi_column(psi: f64) -> String {
    format!("tail_sum_psi{psi}")
}

pub fn record_header(psi: &[f64]) -> Vec<String> {
    let mut h: Vec<String> = BASE_COLUMNS.iter().map(|s| s.to_string()).collect();
    h.extend(psi.iter().map(|&p| psi_column(p)));
    h.push("wall_ms".into());
    h
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

/// Streams rows under a header fixed by the ψ list.
pub struct RecordWriter<W: Write> {
    inner: csv::Writer<W>,
    psi: Vec<f64>,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(w: W, psi: &[f64]) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(w);
        inner.write_record(record_header(psi))?;
        Ok(Self {
            inner,
            psi: psi.to_vec(),
        })
    }

    pub fn write(&mut self, r: &TrialRecord) -> Result<()> {
        let mut row = vec![
            r.d.to_string(),
            r.n.to_string(),
            r.s.to_string(),
            r.beta.to_string(),
            r.trial.to_string(),
            r.edges.to_string(),
            opt(&r.diameter),
            r.diam_mode.clone().unwrap_or_default(),
            opt(&r.corner_path),
            opt(&r.cuts),
            opt(&r.isolated),
            opt(&r.ball2),
            opt(&r.descent_steps),
            opt(&r.renorm_valid),
        ];
        for &p in &self.psi {
            let v = r.tail_sums.iter().find(|(q, _)| *q == p).map(|&(_, v)| v);
            row.push(opt(&v));
        }
        row.push(opt(&r.wall_ms));
        self.inner.write_record(&row)?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> Result<W> {
        self.inner
            .into_inner()
            .map_err(|e| Error::Io(e.into_error()))
    }
}

pub fn write_records<W: Write>(w: W, psi: &[f64], records: &[TrialRecord]) -> Result<()> {
    let mut out = RecordWriter::new(w, psi)?;
    for r in records {
        out.write(r)?;
    }
    out.flush()
}

fn field<T: std::str::FromStr>(raw: &str, col: &str, row: usize) -> Result<Option<T>> {
    if raw.is_empty() {
        return Ok(None);
    }
    raw.parse().map(Some).map_err(|_| Error::Parse {
        line: row,
        msg: format!("invalid `{col}` value `{raw}`"),
    })
}

fn required<T: std::str::FromStr>(raw: &str, col: &str, row: usize) -> Result<T> {
    field(raw, col, row)?.ok_or_else(|| Error::Parse {
        line: row,
        msg: format!("missing `{col}`"),
    })
}

/// Parses a record CSV; returns the ψ list read from its header.
pub fn read_records<R: Read>(r: R) -> Result<(Vec<f64>, Vec<TrialRecord>)> {
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers()?.clone();
    let col = |name: &str| -> Result<usize> {
        header.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
            line: 1,
            msg: format!("missing column `{name}`"),
        })
    };
    let idx: Vec<usize> = BASE_COLUMNS.iter().map(|c| col(c)).collect::<Result<_>>()?;
    let mut psi = Vec::new();
    for (i, h) in header.iter().enumerate() {
        if let Some(v) = h.strip_prefix("tail_sum_psi") {
            let p: f64 = v.parse().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("bad column `{h}`"),
            })?;
            psi.push((p, i));
        }
    }
    let wall = header.iter().position(|h| h == "wall_ms");

    let mut records = Vec::new();
    for (k, row) in rdr.records().enumerate() {
        let row = row?;
        let line = k + 2;
        let get = |i: usize| row.get(i).unwrap_or("");
        let g = |j: usize| get(idx[j]);
        let mut rec = TrialRecord::new(
            required(g(0), "d", line)?,
            required(g(1), "N", line)?,
            required(g(2), "s", line)?,
            required(g(3), "beta", line)?,
            required(g(4), "trial", line)?,
        );
        rec.edges = required(g(5), "edges", line)?;
        rec.diameter = field(g(6), "diameter", line)?;
        rec.diam_mode = Some(g(7).to_string()).filter(|m| !m.is_empty());
        rec.corner_path = field(g(8), "corner_path", line)?;
        rec.cuts = field(g(9), "cuts", line)?;
        rec.isolated = field(g(10), "isolated", line)?;
        rec.ball2 = field(g(11), "ball2", line)?;
        rec.descent_steps = field(g(12), "descent_steps", line)?;
        rec.renorm_valid = field(g(13), "renorm_valid", line)?;
        for &(p, i) in &psi {
            if let Some(v) = field(get(i), "tail_sum", line)? {
                rec.tail_sums.push((p, v));
            }
        }
        if let Some(i) = wall {
            rec.wall_ms = field(get(i), "wall_ms", line)?;
        }
        records.push(rec);
    }
    Ok((psi.into_iter().map(|(p, _)| p).collect(), records))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let count = values.len();
        let mean = values.iter().sum::<f64>() / count as f64;
        let std = if count > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
            (ss / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(Self {
            count,
            mean,
            std,
            min,
            max,
        })
    }
}

/// Mean, spread and range of every metric over one cell's trials.
#[derive(Debug, Clone, PartialEq)]
pub struct CellAggregate {
    pub d: usize,
    pub n: u32,
    pub s: f64,
    pub beta: f64,
    pub trials: usize,
    /// Aligned with [`metric_names`].
    pub metrics: Vec<Option<Summary>>,
}

pub fn metric_names(psi: &[f64]) -> Vec<String> {
    let mut names: Vec<String> = [
        "edges",
        "diameter",
        "corner_path",
        "cuts",
        "isolated",
        "ball2",
        "descent_steps",
        "renorm_valid",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    names.extend(psi.iter().map(|&p| psi_column(p)));
    names.push("wall_ms".into());
    names
}

impl CellAggregate {
    pub fn get(&self, psi: &[f64], name: &str) -> Option<Summary> {
        let i = metric_names(psi).iter().position(|m| m == name)?;
        self.metrics[i]
    }
}

/// Groups consecutive rows of the same cell.
pub fn aggregate(psi: &[f64], records: &[TrialRecord]) -> Vec<CellAggregate> {
    let mut out = Vec::new();
    for group in records.chunk_by(|a, b| a.same_cell(b)) {
        let first = &group[0];
        let columns: Vec<Vec<Option<f64>>> = group.iter().map(|r| r.metrics(psi)).collect();
        let metrics = (0..columns[0].len())
            .map(|j| {
                let vals: Vec<f64> = columns.iter().filter_map(|c| c[j]).collect();
                Summary::of(&vals)
            })
            .collect();
        out.push(CellAggregate {
            d: first.d,
            n: first.n,
            s: first.s,
            beta: first.beta,
            trials: group.len(),
            metrics,
        });
    }
    out
}

/// Wide CSV: cell keys, then `<metric>_{mean,std,min,max}` per metric.
pub fn write_aggregates<W: Write>(w: W, psi: &[f64], cells: &[CellAggregate]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = ["d", "N", "s", "beta", "trials"].iter().map(|s| s.to_string()).collect();
    for m in metric_names(psi) {
        for stat in ["mean", "std", "min", "max"] {
            header.push(format!("{m}_{stat}"));
        }
    }
    out.write_record(&header)?;
    for c in cells {
        let mut row = vec![
            c.d.to_string(),
            c.n.to_string(),
            c.s.to_string(),
            c.beta.to_string(),
            c.trials.to_string(),
        ];
        for m in &c.metrics {
            match m {
                Some(s) => row.extend([s.mean, s.std, s.min, s.max].iter().map(f64::to_string)),
                None => row.extend(std::iter::repeat_n(String::new(), 4)),
            }
        }
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}
