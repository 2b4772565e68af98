//! Text graph format, version `lrp1`.
//!
//! ```text
//! lrp1 d=1 n=100 s=2 beta=1 seed=7 trial=0 edges=2
//! 3 17
//! 40 96
//! ```
//!
//! One `u v` line per long edge, `u < v`, lines in ascending numeric order.
//! Lattice edges are implied by the header. Reals use Rust's shortest
//! round-trip formatting.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::GridGraph;
use crate::error::{Error, Result};
use crate::model::ModelParams;

const MAGIC: &str = "lrp1";

pub fn write_graph<W: Write>(g: &GridGraph, mut w: W) -> Result<()> {
    let p = g.params();
    writeln!(
        w,
        "{MAGIC} d={} n={} s={} beta={} seed={} trial={} edges={}",
        p.d(),
        p.n(),
        p.s(),
        p.beta(),
        p.seed(),
        g.trial(),
        g.long_edge_count()
    )?;
    for &(u, v) in g.long_edges() {
        writeln!(w, "{u} {v}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_graph_file(g: &GridGraph, path: impl AsRef<Path>) -> Result<()> {
    write_graph(g, BufWriter::new(File::create(path)?))
}

pub fn read_graph_file(path: impl AsRef<Path>) -> Result<GridGraph> {
    read_graph(BufReader::new(File::open(path)?))
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn field<'a>(tok: Option<&'a str>, key: &str) -> Result<&'a str> {
    let tok = tok.ok_or_else(|| parse_err(1, format!("header is missing `{key}=`")))?;
    tok.strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| parse_err(1, format!("expected `{key}=...`, found `{tok}`")))
}

fn num<T: std::str::FromStr>(s: &str, key: &str) -> Result<T> {
    s.parse()
        .map_err(|_| parse_err(1, format!("invalid value `{s}` for `{key}`")))
}

fn parse_header(line: &str) -> Result<(ModelParams, u64, usize)> {
    let mut toks = line.split_ascii_whitespace();
    match toks.next() {
        Some(MAGIC) => {}
        Some(other) => return Err(parse_err(1, format!("unknown format tag `{other}`"))),
        None => return Err(parse_err(1, "empty header")),
    }
    let d: usize = num(field(toks.next(), "d")?, "d")?;
    let n: u32 = num(field(toks.next(), "n")?, "n")?;
    let s: f64 = num(field(toks.next(), "s")?, "s")?;
    let beta: f64 = num(field(toks.next(), "beta")?, "beta")?;
    let seed: u64 = num(field(toks.next(), "seed")?, "seed")?;
    let trial: u64 = num(field(toks.next(), "trial")?, "trial")?;
    let edges: usize = num(field(toks.next(), "edges")?, "edges")?;
    if let Some(extra) = toks.next() {
        return Err(parse_err(1, format!("unexpected header token `{extra}`")));
    }
    let params = ModelParams::new(d, n, s, beta, seed).map_err(|e| parse_err(1, e.to_string()))?;
    Ok((params, trial, edges))
}

pub fn read_graph<R: BufRead>(r: R) -> Result<GridGraph> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| parse_err(1, "empty file"))??;
    let (params, trial, count) = parse_header(&header)?;
    let nodes = params.node_count() as u64;

    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(count);
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_ascii_whitespace();
        let mut next_id = || -> Result<u64> {
            let tok = it
                .next()
                .ok_or_else(|| parse_err(lineno, "expected two node ids"))?;
            tok.parse::<u64>()
                .map_err(|_| parse_err(lineno, format!("invalid node id `{tok}`")))
        };
        let (u, v) = (next_id()?, next_id()?);
        if it.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens after edge"));
        }
        if u == v {
            return Err(parse_err(lineno, format!("self-loop {u} {v}")));
        }
        if u >= nodes || v >= nodes {
            return Err(parse_err(lineno, format!("node id out of range (node count {nodes})")));
        }
        if u > v {
            return Err(parse_err(lineno, format!("edge {u} {v} must list the smaller id first")));
        }
        let (u, v) = (u as u32, v as u32);
        if params.distance_of(u, v) < 2 {
            return Err(parse_err(lineno, format!("{u} {v} is an implied lattice edge")));
        }
        if let Some(&last) = edges.last() {
            if last == (u, v) {
                return Err(parse_err(lineno, format!("duplicate edge {u} {v}")));
            }
            if last > (u, v) {
                return Err(parse_err(lineno, "edges are not sorted"));
            }
        }
        edges.push((u, v));
    }
    if edges.len() != count {
        return Err(parse_err(
            1,
            format!("header declares {count} edges, file has {}", edges.len()),
        ));
    }
    Ok(GridGraph::from_sorted(params, trial, edges))
}
