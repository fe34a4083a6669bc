//! Text formats.
//!
//! `.gct` colorings: first line `n ell`, then rows `i = 1..n-1` (1-based)
//! listing `c(i, j)` for `j = i+1..n`, space separated.
//!
//! `.g` patterns: first line `n`, then one `u v` edge per line, 1-based.

use std::fmt::Write as _;

use crate::coloring::{EdgeColoring, SimpleGraph};
use crate::error::{Error, Result};

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse { line, reason: reason.into() }
}

fn numbers(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| parse_err(lineno, format!("not an integer: {t:?}"))))
        .collect()
}

pub fn write_gct(c: &EdgeColoring) -> String {
    let mut out = format!("{} {}\n", c.n(), c.ell());
    for i in 0..c.n().saturating_sub(1) {
        let row: Vec<String> = (i + 1..c.n()).map(|j| c.color(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_gct(text: &str) -> Result<EdgeColoring> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (l0, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let head = numbers(header, l0 + 1)?;
    let [n, ell] = head[..] else {
        return Err(parse_err(l0 + 1, "header must be `n ell`"));
    };
    if n == 0 {
        return Err(parse_err(l0 + 1, "n must be at least 1"));
    }
    let mut entries = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n - 1 {
        let (li, line) = lines.next().ok_or_else(|| parse_err(l0 + 2 + i, format!("missing row {}", i + 1)))?;
        let row = numbers(line, li + 1)?;
        if row.len() != n - 1 - i {
            return Err(parse_err(li + 1, format!("row {} has {} entries, expected {}", i + 1, row.len(), n - 1 - i)));
        }
        for (d, col) in row.into_iter().enumerate() {
            entries.push((i, i + 1 + d, col));
        }
    }
    if let Some((li, _)) = lines.next() {
        return Err(parse_err(li + 1, "trailing data"));
    }
    EdgeColoring::build(n, ell, &entries)
}

pub fn write_graph(g: &SimpleGraph) -> String {
    let mut out = format!("{}\n", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", u + 1, v + 1);
    }
    out
}

pub fn read_graph(text: &str) -> Result<SimpleGraph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (l0, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let head = numbers(header, l0 + 1)?;
    let [n] = head[..] else {
        return Err(parse_err(l0 + 1, "header must be `n`"));
    };
    let mut edges = vec![];
    for (li, line) in lines {
        let e = numbers(line, li + 1)?;
        let [u, v] = e[..] else {
            return Err(parse_err(li + 1, "edge line must be `u v`"));
        };
        if u == 0 || v == 0 || u > n || v > n {
            return Err(parse_err(li + 1, format!("vertex out of range 1..={n}")));
        }
        edges.push((u - 1, v - 1));
    }
    SimpleGraph::from_edges(n, &edges)
}
