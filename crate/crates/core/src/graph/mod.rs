//! Regular graphs, tree fixtures and truncated breadth-first queries.
//!
//! A [`Graph`] is immutable once built. Adjacency is stored in compressed
//! row form with each neighbor list sorted ascending, so every traversal
//! order is a pure function of the graph.

mod bfs;
mod fixtures;
mod generate;
mod io;

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bfs::{lane_sum, BallWalker};
pub use fixtures::{build_tree, complete_graph, cycle_graph, petersen};
pub use generate::generate_regular;
pub use io::{load_edge_list, parse_edge_list};

pub type Vertex = u32;

/// Length of the shortest cycle, or `Acyclic` for forests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Girth {
    Cycle(usize),
    Acyclic,
}

impl Girth {
    /// True when every cycle has length at least `g`.
    pub fn at_least(self, g: usize) -> bool {
        match self {
            Girth::Acyclic => true,
            Girth::Cycle(c) => c >= g,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Cycle(c) => write!(f, "{c}"),
            Girth::Acyclic => f.write_str("acyclic"),
        }
    }
}

#[derive(Debug)]
pub struct Graph {
    n: usize,
    degree_hint: Option<usize>,
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
    girth: OnceLock<Girth>,
}

impl Clone for Graph {
    fn clone(&self) -> Self {
        let girth = OnceLock::new();
        if let Some(g) = self.girth.get() {
            let _ = girth.set(*g);
        }
        Graph {
            n: self.n,
            degree_hint: self.degree_hint,
            offsets: self.offsets.clone(),
            targets: self.targets.clone(),
            girth,
        }
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.degree_hint == other.degree_hint
            && self.offsets == other.offsets
            && self.targets == other.targets
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a simple graph from an undirected edge list.
    ///
    /// Rejects out-of-range ids, self-loops and duplicate edges. When
    /// `degree_hint` is given every vertex must have exactly that degree.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
        degree_hint: Option<usize>,
    ) -> Result<Self> {
        if n > Vertex::MAX as usize {
            return Err(Error::SizeLimit {
                what: "vertex count",
                value: n,
                limit: Vertex::MAX as usize,
            });
        }
        let edges: Vec<(Vertex, Vertex)> = edges.into_iter().collect();
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0 as Vertex; offsets[n]];
        for &(u, v) in &edges {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for u in 0..n {
            let row = &mut targets[offsets[u]..offsets[u + 1]];
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!(
                    "duplicate edge ({u}, {})",
                    w[0]
                )));
            }
        }
        if let Some(d) = degree_hint {
            if let Some(u) = (0..n).find(|&u| degree[u] != d) {
                return Err(Error::invalid(format!(
                    "vertex {u} has degree {} but the graph is declared {d}-regular",
                    degree[u]
                )));
            }
        }
        Ok(Graph {
            n,
            degree_hint,
            offsets,
            targets,
            girth: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Common degree when the graph was declared regular.
    pub fn degree_hint(&self) -> Option<usize> {
        self.degree_hint
    }

    #[inline]
    pub fn degree(&self, u: Vertex) -> usize {
        let u = u as usize;
        self.offsets[u + 1] - self.offsets[u]
    }

    #[inline]
    pub fn neighbors(&self, u: Vertex) -> &[Vertex] {
        let u = u as usize;
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Edges as `(min, max)` pairs in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n as Vertex).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v))
        })
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Degree histogram as sorted `(degree, count)` pairs.
    pub fn degree_histogram(&self) -> Vec<(usize, usize)> {
        let mut hist = std::collections::BTreeMap::new();
        for u in 0..self.n as Vertex {
            *hist.entry(self.degree(u)).or_insert(0) += 1;
        }
        hist.into_iter().collect()
    }

    /// Shortest cycle length; computed once and cached.
    pub fn girth(&self) -> Girth {
        *self.girth.get_or_init(|| compute_girth(self))
    }

    pub(crate) fn with_known_girth(self, g: Girth) -> Self {
        let _ = self.girth.set(g);
        self
    }

    /// Vertices at each exact distance `0..=radius` from `center`.
    pub fn shells(&self, center: Vertex, radius: usize) -> DistanceShells {
        let mut walker = BallWalker::new(self.n);
        let mut shells = vec![Vec::new(); radius + 1];
        walker.walk(self, center, radius, |k, v| shells[k].push(v));
        for s in &mut shells {
            s.sort_unstable();
        }
        DistanceShells {
            center,
            radius,
            shells,
        }
    }

    /// Whether the radius-`r` ball around `u` is a tree with the full
    /// `D`-regular branching, `D` being the declared degree (or `deg(u)`).
    ///
    /// Requires both the exact tree ball size and the absence of any edge
    /// inside the ball other than the breadth-first tree edges.
    pub fn is_locally_tree_like(&self, u: Vertex, r: usize) -> Result<bool> {
        let d = self.degree_hint.unwrap_or_else(|| self.degree(u));
        if d < 3 {
            return Err(Error::invalid(format!(
                "tree-likeness needs degree >= 3, got {d}"
            )));
        }
        let expected = tree_ball_size(d, r);
        let mut depth = vec![u32::MAX; self.n];
        let mut parent = vec![Vertex::MAX; self.n];
        let mut order = vec![u];
        depth[u as usize] = 0;
        let mut head = 0;
        while head < order.len() {
            let w = order[head];
            head += 1;
            let dw = depth[w as usize];
            for &y in self.neighbors(w) {
                if y == parent[w as usize] {
                    continue;
                }
                let dy = depth[y as usize];
                if dy != u32::MAX {
                    // non-tree edge inside the ball
                    return Ok(false);
                }
                if (dw as usize) < r {
                    depth[y as usize] = dw + 1;
                    parent[y as usize] = w;
                    order.push(y);
                }
            }
        }
        Ok(order.len() as u128 == expected)
    }
}

/// Exact ball size `1 + D((D-1)^r - 1)/(D-2)` of the infinite `D`-regular tree.
pub fn tree_ball_size(d: usize, r: usize) -> u128 {
    let mut total: u128 = 1;
    let mut shell: u128 = d as u128;
    for _ in 0..r {
        total += shell;
        shell *= (d - 1) as u128;
    }
    total
}

/// Size of shell `k` of the infinite `D`-regular tree: `1` then `D(D-1)^(k-1)`.
pub fn tree_shell_size(d: usize, k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        d as f64 * ((d - 1) as f64).powi(k as i32 - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceShells {
    pub center: Vertex,
    pub radius: usize,
    /// `shells[k]` holds the vertices at distance exactly `k`, ascending.
    pub shells: Vec<Vec<Vertex>>,
}

impl DistanceShells {
    pub fn ball_size(&self) -> usize {
        self.shells.iter().map(Vec::len).sum()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.shells.iter().map(Vec::len).collect()
    }
}

fn compute_girth(g: &Graph) -> Girth {
    let n = g.n();
    let mut best = usize::MAX;
    let mut dist = vec![u32::MAX; n];
    let mut parent = vec![Vertex::MAX; n];
    let mut queue: Vec<Vertex> = Vec::new();
    for s in 0..n as Vertex {
        queue.clear();
        queue.push(s);
        dist[s as usize] = 0;
        let mut head = 0;
        'bfs: while head < queue.len() {
            let w = queue[head];
            head += 1;
            let dw = dist[w as usize] as usize;
            if 2 * dw + 1 >= best {
                break;
            }
            for &y in g.neighbors(w) {
                if y == parent[w as usize] {
                    continue;
                }
                let dy = dist[y as usize];
                if dy == u32::MAX {
                    dist[y as usize] = dw as u32 + 1;
                    parent[y as usize] = w;
                    queue.push(y);
                } else {
                    best = best.min(dw + dy as usize + 1);
                    if best == 3 {
                        break 'bfs;
                    }
                }
            }
        }
        for &v in &queue {
            dist[v as usize] = u32::MAX;
            parent[v as usize] = Vertex::MAX;
        }
        if best == 3 {
            break;
        }
    }
    if best == usize::MAX {
        Girth::Acyclic
    } else {
        Girth::Cycle(best)
    }
}
