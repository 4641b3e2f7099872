//! The `sgraph v1` text format and small CSV helpers shared by the CLI.
//!
//! ```text
//! #sgraph 1 <n> <m> <dim> <metric> <side-or-radius>
//! id \t x \t y [\t ...] \t weight      (n lines, weight "-" when absent)
//! u \t v                               (m lines)
//! ```
//! Edge lengths are not stored; they are recomputed from the metric on load.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Metric, SpatialGraph};

pub fn write_sgraph(g: &SpatialGraph, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_sgraph_to(g, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn write_sgraph_to(g: &SpatialGraph, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(
        out,
        "#sgraph 1 {} {} {} {} {}",
        g.n(),
        g.m(),
        g.dim(),
        g.metric().name(),
        g.metric().parameter()
    )?;
    for v in 0..g.n() {
        write!(out, "{v}")?;
        for x in g.pos(v) {
            write!(out, "\t{x}")?;
        }
        match g.weight(v) {
            Some(w) => writeln!(out, "\t{w}")?,
            None => writeln!(out, "\t-")?,
        }
    }
    for e in g.edges() {
        writeln!(out, "{}\t{}", e.u, e.v)?;
    }
    Ok(())
}

pub fn read_sgraph(path: &Path) -> Result<SpatialGraph> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_sgraph_from(BufReader::new(file), path)
}

pub fn read_sgraph_from(reader: impl BufRead, path: &Path) -> Result<SpatialGraph> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file".into()))?;
    let header = header.map_err(|e| Error::io(path, e))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 7 || fields[0] != "#sgraph" || fields[1] != "1" {
        return Err(parse_err(
            1,
            format!("expected `#sgraph 1 <n> <m> <dim> <metric> <param>`, got `{header}`"),
        ));
    }
    let num = |s: &str, what: &str| -> Result<usize> {
        s.parse()
            .map_err(|_| parse_err(1, format!("bad {what} `{s}`")))
    };
    let n = num(fields[2], "node count")?;
    let m = num(fields[3], "edge count")?;
    let dim = num(fields[4], "dimension")?;
    let param: f64 = fields[6]
        .parse()
        .map_err(|_| parse_err(1, format!("bad metric parameter `{}`", fields[6])))?;
    let metric = match fields[5] {
        "torus" => Metric::Torus { side: param },
        "euclidean" => Metric::Euclidean,
        "haversine" => Metric::Haversine { radius_km: param },
        other => return Err(parse_err(1, format!("unknown metric `{other}`"))),
    };

    let mut positions = Vec::with_capacity(n * dim);
    let mut weights = Vec::with_capacity(n);
    let mut any_weight = false;
    for expected in 0..n {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| parse_err(expected + 2, "missing node line".into()))?;
        let line = line.map_err(|e| Error::io(path, e))?;
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != dim + 2 {
            return Err(parse_err(
                idx + 1,
                format!("expected {} columns, got {}", dim + 2, cols.len()),
            ));
        }
        if cols[0].parse::<usize>().ok() != Some(expected) {
            return Err(parse_err(idx + 1, format!("expected node id {expected}")));
        }
        for c in &cols[1..=dim] {
            positions.push(
                c.parse::<f64>()
                    .map_err(|_| parse_err(idx + 1, format!("bad coordinate `{c}`")))?,
            );
        }
        let w = cols[dim + 1];
        if w == "-" {
            weights.push(1.0);
        } else {
            any_weight = true;
            weights.push(
                w.parse::<f64>()
                    .map_err(|_| parse_err(idx + 1, format!("bad weight `{w}`")))?,
            );
        }
    }
    let mut pairs = Vec::with_capacity(m);
    for _ in 0..m {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| parse_err(n + pairs.len() + 2, "missing edge line".into()))?;
        let line = line.map_err(|e| Error::io(path, e))?;
        let mut it = line.split('\t');
        let (a, b) = match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(parse_err(idx + 1, "expected `u\\tv`".into())),
        };
        let a = a
            .parse::<usize>()
            .map_err(|_| parse_err(idx + 1, format!("bad node id `{a}`")))?;
        let b = b
            .parse::<usize>()
            .map_err(|_| parse_err(idx + 1, format!("bad node id `{b}`")))?;
        pairs.push((a, b));
    }
    SpatialGraph::new(dim, metric, positions, any_weight.then_some(weights), pairs)
}

/// Real number with 17 significant digits, the CSV convention of the CLI.
pub fn fmt_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}
