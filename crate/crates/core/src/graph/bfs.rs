use super::{Graph, Vertex};

/// Reusable scratch space for truncated breadth-first walks.
///
/// One walker per worker thread. The visited set is a bitset (small enough
/// to stay cache resident for graphs of a few hundred thousand vertices)
/// cleared through the list of touched vertices, so a walk costs time
/// proportional to the ball, not to `n`.
#[derive(Debug, Clone)]
pub struct BallWalker {
    seen: Vec<u64>,
    /// All shells of the current walk, concatenated.
    order: Vec<Vertex>,
    /// `order[bounds[k]..bounds[k + 1]]` is shell `k`.
    bounds: Vec<usize>,
    n: usize,
}

impl BallWalker {
    pub fn new(n: usize) -> Self {
        BallWalker {
            seen: vec![0; n.div_ceil(64)],
            order: Vec::new(),
            bounds: Vec::new(),
            n,
        }
    }

    /// Fills `order`/`bounds` with the shells `0..=radius` around `center`.
    ///
    /// Within a shell, vertices come in discovery order: parents in their own
    /// discovery order, each parent's neighbors ascending.
    fn expand(&mut self, g: &Graph, center: Vertex, radius: usize) {
        assert_eq!(self.n, g.n(), "walker sized for a different graph");
        let seen = &mut self.seen;
        let order = &mut self.order;
        order.clear();
        order.push(center);
        seen[(center >> 6) as usize] |= 1 << (center & 63);
        self.bounds.clear();
        self.bounds.push(0);
        self.bounds.push(1);
        for _ in 0..radius {
            let (lo, hi) = (self.bounds[self.bounds.len() - 2], order.len());
            if lo == hi {
                break;
            }
            let room: usize = order[lo..hi].iter().map(|&w| g.degree(w)).sum();
            order.resize(hi + room, 0);
            let mut len = hi;
            for i in lo..hi {
                let w = order[i];
                for &y in g.neighbors(w) {
                    let (word, bit) = ((y >> 6) as usize, 1u64 << (y & 63));
                    let old = seen[word];
                    seen[word] = old | bit;
                    // branch-free append: the slot is overwritten unless fresh
                    order[len] = y;
                    len += (old & bit == 0) as usize;
                }
            }
            order.truncate(len);
            self.bounds.push(len);
        }
        for &v in order.iter() {
            seen[(v >> 6) as usize] = 0;
        }
        // an exhausted ball leaves empty trailing shells
        while self.bounds.len() < radius + 2 {
            self.bounds.push(order.len());
        }
    }

    fn shell(&self, k: usize) -> &[Vertex] {
        &self.order[self.bounds[k]..self.bounds[k + 1]]
    }

    /// Calls `visit(k, v)` once for every vertex `v` at distance `k <= radius`
    /// from `center`, shell by shell.
    pub fn walk<F: FnMut(usize, Vertex)>(
        &mut self,
        g: &Graph,
        center: Vertex,
        radius: usize,
        mut visit: F,
    ) {
        self.expand(g, center, radius);
        for k in 0..=radius {
            for &v in self.shell(k) {
                visit(k, v);
            }
        }
    }

    /// Sums `values` over each shell `0..sums.len()` around `center`.
    ///
    /// Within a shell the sum runs over discovery order with four
    /// interleaved partial accumulators, a fixed order that depends only on
    /// the graph.
    pub fn shell_sums(&mut self, g: &Graph, center: Vertex, values: &[f64], sums: &mut [f64]) {
        let radius = sums.len() - 1;
        self.expand(g, center, radius);
        for (k, out) in sums.iter_mut().enumerate() {
            *out = lane_sum(values, self.shell(k));
        }
    }
}

/// Sum of `values[v]` over `ids` with four interleaved accumulators.
#[inline]
pub fn lane_sum(values: &[f64], ids: &[Vertex]) -> f64 {
    let mut acc = [0.0f64; 4];
    let mut chunks = ids.chunks_exact(4);
    for c in &mut chunks {
        acc[0] += values[c[0] as usize];
        acc[1] += values[c[1] as usize];
        acc[2] += values[c[2] as usize];
        acc[3] += values[c[3] as usize];
    }
    for (i, &v) in chunks.remainder().iter().enumerate() {
        acc[i] += values[v as usize];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3])
}
