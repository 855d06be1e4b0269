//! Plain-text edge lists: a header line `n D` (`D = 0` when the graph has no
//! declared degree) followed by one `u v` line per edge, `u < v`, in
//! ascending lexicographic order.

use std::fmt::Write as _;
use std::path::Path;

use super::{Graph, Vertex};
use crate::error::{Error, Result};

impl Graph {
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edge_count() * 12 + 16);
        writeln!(out, "{} {}", self.n(), self.degree_hint().unwrap_or(0)).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn save_edge_list(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_edge_list()).map_err(|e| Error::io(path, e))
    }
}

pub fn load_edge_list(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, &path.display().to_string())
}

/// Parses the edge-list format; `origin` labels error messages.
pub fn parse_edge_list(text: &str, origin: &str) -> Result<Graph> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.to_string(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| err(1, "empty graph file".into()))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let parse_usize = |s: &str, line: usize| {
        s.parse::<usize>()
            .map_err(|_| err(line, format!("expected a non-negative integer, got {s:?}")))
    };
    if head.len() != 2 {
        return Err(err(1, format!("header must be \"n D\", got {header:?}")));
    }
    let n = parse_usize(head[0], 1)?;
    let d = parse_usize(head[1], 1)?;

    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut degree = vec![0usize; n];
    let mut prev: Option<(Vertex, Vertex)> = None;
    for (line, l) in lines {
        if l.is_empty() {
            continue;
        }
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(err(line, format!("expected \"u v\", got {l:?}")));
        }
        let u = parse_usize(parts[0], line)?;
        let v = parse_usize(parts[1], line)?;
        if u >= n || v >= n {
            return Err(err(line, format!("vertex out of range for n = {n}")));
        }
        if u == v {
            return Err(err(line, format!("self-loop at vertex {u}")));
        }
        if u > v {
            return Err(err(
                line,
                format!("edge ({u}, {v}) is not in canonical (min, max) order"),
            ));
        }
        let e = (u as Vertex, v as Vertex);
        if let Some(p) = prev {
            if e == p {
                return Err(err(line, format!("duplicate edge ({u}, {v})")));
            }
            if e < p {
                return Err(err(line, format!("edge ({u}, {v}) out of ascending order")));
            }
        }
        prev = Some(e);
        degree[u] += 1;
        degree[v] += 1;
        edges.push(e);
    }
    if d > 0 {
        if let Some(u) = (0..n).find(|&u| degree[u] != d) {
            return Err(err(
                1,
                format!("header declares {d}-regular but vertex {u} has degree {}", degree[u]),
            ));
        }
    }
    Graph::from_edges(n, edges, (d > 0).then_some(d))
}
