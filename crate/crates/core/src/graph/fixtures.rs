use super::{Girth, Graph, Vertex};
use crate::error::{Error, Result};

/// Rooted tree where the root has `degree` children and every internal
/// vertex has `degree - 1` children; leaves sit at distance `depth`.
///
/// Vertices are numbered level by level, so the root is `0` and level `k`
/// occupies a contiguous id range.
pub fn build_tree(degree: usize, depth: usize) -> Result<Graph> {
    if degree < 3 || depth < 1 {
        return Err(Error::invalid(format!(
            "build_tree needs degree >= 3 and depth >= 1, got ({degree}, {depth})"
        )));
    }
    let size = super::tree_ball_size(degree, depth);
    if size > 50_000_000 {
        return Err(Error::SizeLimit {
            what: "tree size",
            value: size.min(usize::MAX as u128) as usize,
            limit: 50_000_000,
        });
    }
    let size = size as usize;
    let mut edges = Vec::with_capacity(size - 1);
    let mut next: Vertex = 1;
    let mut level_start = 0usize;
    let mut level_len = 1usize;
    for level in 0..depth {
        let children = if level == 0 { degree } else { degree - 1 };
        for p in level_start..level_start + level_len {
            for _ in 0..children {
                edges.push((p as Vertex, next));
                next += 1;
            }
        }
        level_start += level_len;
        level_len *= children;
    }
    debug_assert_eq!(next as usize, size);
    Ok(Graph::from_edges(size, edges, None)?.with_known_girth(Girth::Acyclic))
}

pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::invalid(format!("cycle needs n >= 3, got {n}")));
    }
    let edges = (0..n).map(|i| (i as Vertex, ((i + 1) % n) as Vertex));
    Graph::from_edges(n, edges, Some(2))
}

pub fn complete_graph(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u as Vertex, v as Vertex));
        }
    }
    Graph::from_edges(n, edges, Some(n.saturating_sub(1))).expect("complete graph is simple")
}

/// The Petersen graph: outer 5-cycle, inner pentagram, five spokes.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5u32 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, edges, Some(3)).expect("petersen graph is simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_sizes() {
        assert_eq!(build_tree(3, 1).unwrap().n(), 4);
        assert_eq!(build_tree(3, 2).unwrap().n(), 10);
        assert_eq!(build_tree(4, 3).unwrap().n(), 53);
        let t = build_tree(4, 3).unwrap();
        assert_eq!(t.degree(0), 4);
        assert_eq!(t.degree(1), 4);
        assert_eq!(t.degree(52), 1);
        assert!(build_tree(2, 3).is_err());
    }

    #[test]
    fn standard_fixtures() {
        let c = cycle_graph(4).unwrap();
        assert_eq!(c.edge_count(), 4);
        assert!(cycle_graph(2).is_err());
        let k = complete_graph(4);
        assert_eq!(k.edge_count(), 6);
        assert_eq!(k.degree_histogram(), vec![(3, 4)]);
        let p = petersen();
        assert_eq!(p.edge_count(), 15);
        assert_eq!(p.degree_histogram(), vec![(3, 10)]);
        assert_eq!(p.girth(), Girth::Cycle(5));
    }
}
