//! Edge-list text format and DOT export.
//!
//! An edge list is a header line `n m` followed by `m` lines `u v` with
//! 0-based vertex ids. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::cover::VoltageAssignment;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::refine::Coloring;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_pair(text: &str, line: usize, what: &str) -> Result<(usize, usize)> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    let [a, b] = fields[..] else {
        return Err(parse_err(
            line,
            format!("expected two integers for {what}, found {:?}", text.trim()),
        ));
    };
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| parse_err(line, format!("invalid integer {s:?} in {what}")))
    };
    Ok((num(a)?, num(b)?))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
    let Some((header_line, header)) = lines.next() else {
        return Err(parse_err(1, "missing header \"n m\""));
    };
    let (n, m) = parse_pair(header, header_line, "header")?;
    let mut edges = Vec::with_capacity(m);
    let mut last_line = header_line;
    for (line, text) in lines {
        last_line = line;
        let (u, v) = parse_pair(text, line, "edge")?;
        if u >= n || v >= n {
            return Err(parse_err(
                line,
                format!("vertex {} out of range for {n} vertices", u.max(v)),
            ));
        }
        if u == v {
            return Err(parse_err(line, format!("self-loop at vertex {u}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_err(
            last_line,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edge_list(n, &edges)
}

/// Canonical serialization: edges `u < v` in lexicographic order.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Undirected DOT graph; with a coloring each node is labelled by its color id.
pub fn to_dot(g: &Graph, coloring: Option<&Coloring>) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.vertex_count() {
        match coloring {
            Some(c) => {
                let _ = writeln!(
                    out,
                    "  {v} [label=\"{}\", style=filled, colorscheme=set312, fillcolor={}];",
                    c.get(v),
                    c.get(v) % 12 + 1
                );
            }
            None => {
                let _ = writeln!(out, "  {v};");
            }
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text)
}

/// Reads a voltage file `{"degree": d, "edges": [[u, w], ...], "perms": [[...], ...]}`.
pub fn read_voltage(path: &Path) -> Result<VoltageAssignment> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_voltage(&text)
}

pub fn parse_voltage(text: &str) -> Result<VoltageAssignment> {
    Ok(serde_json::from_str(text)?)
}

pub fn voltage_to_json(va: &VoltageAssignment) -> String {
    serde_json::to_string(va).expect("voltages serialize")
}
