// SPDX-License-Identifier: Apache-2.0

//! Edge-list and METIS readers and writers.
//!
//! Edge list: one `u v [w]` per line, 0-indexed, `#` starts a comment. The
//! writer emits a `# n=<n> m=<m> [weighted] [directed]` header that the
//! reader honors, so isolated vertices survive a round trip.
//!
//! METIS: `%` comment lines, header `n m [fmt]`, then one line per vertex
//! listing 1-indexed neighbors (interleaved with weights when `fmt` is 1).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Node};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    EdgeList,
    Metis,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "edgelist" | "edges" => Ok(Format::EdgeList),
            "metis" | "graph" => Ok(Format::Metis),
            other => Err(Error::param(format!("unknown graph format `{other}`"))),
        }
    }
}

pub fn read_graph(path: impl AsRef<Path>, format: Format) -> Result<Graph> {
    let text = fs::read_to_string(path)?;
    parse_graph(&text, format)
}

pub fn write_graph(g: &Graph, path: impl AsRef<Path>, format: Format) -> Result<()> {
    fs::write(path, format_graph(g, format)?)?;
    Ok(())
}

pub fn parse_graph(text: &str, format: Format) -> Result<Graph> {
    match format {
        Format::EdgeList => parse_edge_list(text),
        Format::Metis => parse_metis(text),
    }
}

pub fn format_graph(g: &Graph, format: Format) -> Result<String> {
    match format {
        Format::EdgeList => Ok(format_edge_list(g)),
        Format::Metis => format_metis(g),
    }
}

fn parse_id(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid vertex id `{tok}`")))
}

fn parse_weight(tok: &str, line: usize) -> Result<f64> {
    match tok.parse::<f64>() {
        Ok(w) if w.is_finite() && w > 0.0 => Ok(w),
        _ => Err(Error::parse(line, format!("invalid edge weight `{tok}`"))),
    }
}

fn at_line(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(line, other.to_string()),
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared_n = 0;
    let mut directed = false;
    let mut weighted = false;
    let mut edges: Vec<(usize, Node, Node, Option<f64>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            let tokens: Vec<&str> = comment.split_whitespace().collect();
            if tokens.iter().any(|t| t.starts_with("n=")) {
                for t in tokens {
                    if let Some(v) = t.strip_prefix("n=") {
                        declared_n = parse_id(v, line)?;
                    } else if t == "directed" {
                        directed = true;
                    } else if t == "weighted" {
                        weighted = true;
                    }
                }
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let tok: Vec<&str> = trimmed.split_whitespace().collect();
        let w = match tok.len() {
            2 => None,
            3 => Some(parse_weight(tok[2], line)?),
            _ => return Err(Error::parse(line, "expected `u v [w]`")),
        };
        weighted |= w.is_some();
        edges.push((line, parse_id(tok[0], line)?, parse_id(tok[1], line)?, w));
    }
    let n = edges
        .iter()
        .map(|&(_, u, v, _)| u.max(v) + 1)
        .max()
        .unwrap_or(0)
        .max(declared_n);
    let mut g = Graph::new(n, directed, weighted);
    for (line, u, v, w) in edges {
        let res = match w {
            Some(w) => g.add_weighted_edge(u, v, w),
            None => g.add_edge(u, v),
        };
        res.map_err(at_line(line))?;
    }
    Ok(g)
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("# n={} m={}", g.node_count(), g.edge_count());
    if g.is_weighted() {
        out.push_str(" weighted");
    }
    if g.is_directed() {
        out.push_str(" directed");
    }
    out.push('\n');
    for e in g.edges() {
        if g.is_weighted() {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, e.weight);
        } else {
            let _ = writeln!(out, "{} {}", e.u, e.v);
        }
    }
    out
}

pub fn parse_metis(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('%'));
    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| Error::parse(1, "missing METIS header"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() < 2 || h.len() > 4 {
        return Err(Error::parse(hline, "METIS header must be `n m [fmt [ncon]]`"));
    }
    let n = parse_id(h[0], hline)?;
    let m = parse_id(h[1], hline)?;
    let weighted = match h.get(2).copied().unwrap_or("0") {
        "0" | "00" | "000" => false,
        "1" | "01" | "001" => true,
        fmt => {
            return Err(Error::parse(
                hline,
                format!("unsupported METIS format `{fmt}` (vertex weights/sizes)"),
            ))
        }
    };

    let mut g = Graph::new(n, false, weighted);
    let mut back_refs: Vec<(usize, Node, Node, f64)> = Vec::new();
    let mut entries = 0usize;
    let mut last_line = hline;
    for u in 0..n {
        let (line, body) = lines
            .next()
            .ok_or_else(|| Error::parse(last_line + 1, format!("expected {n} vertex lines, found {u}")))?;
        last_line = line;
        let tok: Vec<&str> = body.split_whitespace().collect();
        let step = if weighted { 2 } else { 1 };
        if tok.len() % step != 0 {
            return Err(Error::parse(line, "neighbor without weight"));
        }
        for chunk in tok.chunks(step) {
            let v1 = parse_id(chunk[0], line)?;
            if v1 == 0 || v1 > n {
                return Err(Error::parse(line, format!("neighbor {v1} outside 1..={n}")));
            }
            let v = v1 - 1;
            let w = if weighted { parse_weight(chunk[1], line)? } else { 1.0 };
            entries += 1;
            if u < v {
                g.add_weighted_edge(u, v, w).map_err(at_line(line))?;
            } else if u == v {
                return Err(Error::parse(line, format!("self-loop at vertex {v1}")));
            } else {
                back_refs.push((line, u, v, w));
            }
        }
    }
    for (line, body) in lines {
        if !body.is_empty() {
            return Err(Error::parse(line, format!("more than {n} vertex lines")));
        }
    }
    for (line, u, v, w) in back_refs {
        if g.weight(v, u) != Some(w) {
            return Err(Error::parse(
                line,
                format!("vertex {} lists {} but not vice versa", u + 1, v + 1),
            ));
        }
    }
    if g.edge_count() != m || entries != 2 * m {
        return Err(Error::parse(
            hline,
            format!("header declares {m} edges, adjacency lists contain {}", entries as f64 / 2.0),
        ));
    }
    Ok(g)
}

pub fn format_metis(g: &Graph) -> Result<String> {
    if g.is_directed() {
        return Err(Error::Directed("METIS output"));
    }
    let mut out = format!("{} {}", g.node_count(), g.edge_count());
    if g.is_weighted() {
        out.push_str(" 1");
    }
    out.push('\n');
    for u in g.nodes() {
        let mut nbrs: Vec<(Node, f64)> = g.adjacency(u).iter().map(|a| (a.node, a.weight)).collect();
        nbrs.sort_unstable_by_key(|&(v, _)| v);
        let parts: Vec<String> = nbrs
            .iter()
            .map(|&(v, w)| {
                if g.is_weighted() {
                    format!("{} {}", v + 1, w)
                } else {
                    (v + 1).to_string()
                }
            })
            .collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    Ok(out)
}
