//! Random `D`-regular graphs with a girth floor.
//!
//! Half-edges are paired uniformly at random (configuration model). Loops,
//! parallel edges and cycles shorter than `min_girth` are then removed by
//! double-edge switches: a defective edge `ab` and a random edge `cd` are
//! replaced by `ac` and `bd`, and the switch is kept only if neither new edge
//! lies on a cycle shorter than `min_girth`. Accepted switches never create
//! a short cycle, so the number of short cycles strictly drops.
//!
//! Plain rejection of defective pairings is hopeless beyond tiny `D`: the
//! probability of a simple pairing decays like `exp(-(D^2-1)/4)`, and every
//! short-cycle count is Poisson with an `n`-independent mean `(D-1)^k/(2k)`.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Graph, Vertex};
use crate::error::{Error, Result};
use crate::rng::{chacha, derive_seed, Stream};

/// Samples a simple `degree`-regular graph on `n` vertices with girth at
/// least `min_girth`. Deterministic in `(n, degree, seed, min_girth)`.
///
/// Each attempt re-pairs from a seed derived from `(seed, attempt)` and gets
/// a bounded switch budget; exhausting `max_attempts` usually means the girth
/// floor is infeasible (or nearly so) for this `n` and `degree`.
pub fn generate_regular(
    n: usize,
    degree: usize,
    seed: u64,
    min_girth: usize,
    max_attempts: usize,
) -> Result<Graph> {
    if degree < 3 {
        return Err(Error::invalid(format!(
            "generate_regular needs D >= 3, got {degree}"
        )));
    }
    if n * degree % 2 != 0 {
        return Err(Error::Parity { n, degree });
    }
    if n <= degree {
        return Err(Error::invalid(format!("need n > D, got n = {n}, D = {degree}")));
    }
    if min_girth < 3 {
        return Err(Error::invalid(format!("min_girth must be >= 3, got {min_girth}")));
    }
    if n >= Vertex::MAX as usize {
        return Err(Error::SizeLimit {
            what: "vertex count",
            value: n,
            limit: Vertex::MAX as usize - 1,
        });
    }
    let m = n * degree / 2;
    for attempt in 0..max_attempts {
        let mut rng = chacha(derive_seed(seed, Stream::Attempt, attempt as u64));
        let mut stubs: Vec<Vertex> = (0..n * degree).map(|i| (i / degree) as Vertex).collect();
        stubs.shuffle(&mut rng);
        let edges: Vec<[Vertex; 2]> = stubs.chunks_exact(2).map(|p| [p[0], p[1]]).collect();
        let mut repair = Switcher::new(n, edges, min_girth);
        let budget = 20 * m + 10_000;
        if !repair.run(&mut rng, budget) {
            continue;
        }
        let g = Graph::from_edges(n, repair.edges.iter().map(|e| (e[0], e[1])), Some(degree))?;
        if g.girth().at_least(min_girth) {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailed {
        n,
        degree,
        min_girth,
        attempts: max_attempts,
    })
}

struct Switcher {
    min_girth: usize,
    edges: Vec<[Vertex; 2]>,
    adj: Vec<Vec<Vertex>>,
    stamp_a: Vec<u32>,
    dist_a: Vec<u8>,
    stamp_b: Vec<u32>,
    epoch: u32,
    frontier: Vec<Vertex>,
    next: Vec<Vertex>,
}

impl Switcher {
    fn new(n: usize, edges: Vec<[Vertex; 2]>, min_girth: usize) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &[a, b] in &edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        Switcher {
            min_girth,
            edges,
            adj,
            stamp_a: vec![0; n],
            dist_a: vec![0; n],
            stamp_b: vec![0; n],
            epoch: 0,
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    fn add(&mut self, a: Vertex, b: Vertex) {
        self.adj[a as usize].push(b);
        self.adj[b as usize].push(a);
    }

    fn remove(&mut self, a: Vertex, b: Vertex) {
        let row = &mut self.adj[a as usize];
        let i = row.iter().position(|&y| y == b).expect("edge present");
        row.swap_remove(i);
        let row = &mut self.adj[b as usize];
        let i = row.iter().position(|&y| y == a).expect("edge present");
        row.swap_remove(i);
    }

    /// Whether the edge `ab` lies on a cycle of length `< min_girth`
    /// (loops and parallel edges included).
    fn is_bad(&mut self, a: Vertex, b: Vertex) -> bool {
        if a == b {
            return true;
        }
        // a cycle through ab of length L is an a-b path of length L-1 avoiding ab
        let limit = self.min_girth - 2;
        let ra = limit / 2;
        let rb = limit - ra;
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp_a.fill(0);
            self.stamp_b.fill(0);
            self.epoch = 1;
        }
        let epoch = self.epoch;

        self.stamp_a[a as usize] = epoch;
        self.dist_a[a as usize] = 0;
        self.frontier.clear();
        self.frontier.push(a);
        for depth in 1..=ra {
            self.next.clear();
            for fi in 0..self.frontier.len() {
                let w = self.frontier[fi];
                let mut skip = w == a;
                for &y in &self.adj[w as usize] {
                    if skip && y == b {
                        skip = false;
                        continue;
                    }
                    if self.stamp_a[y as usize] != epoch {
                        self.stamp_a[y as usize] = epoch;
                        self.dist_a[y as usize] = depth as u8;
                        self.next.push(y);
                    }
                }
            }
            std::mem::swap(&mut self.frontier, &mut self.next);
        }

        let hit = |s: &Self, w: Vertex, db: usize| {
            s.stamp_a[w as usize] == epoch && s.dist_a[w as usize] as usize + db <= limit
        };
        if hit(self, b, 0) {
            return true;
        }
        self.stamp_b[b as usize] = epoch;
        self.frontier.clear();
        self.frontier.push(b);
        for depth in 1..=rb {
            self.next.clear();
            for fi in 0..self.frontier.len() {
                let w = self.frontier[fi];
                let mut skip = w == b;
                for &y in &self.adj[w as usize] {
                    if skip && y == a {
                        skip = false;
                        continue;
                    }
                    if self.stamp_b[y as usize] != epoch {
                        self.stamp_b[y as usize] = epoch;
                        if hit(self, y, depth) {
                            return true;
                        }
                        self.next.push(y);
                    }
                }
            }
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
        false
    }

    /// Removes every defect, spending at most `budget` switch proposals.
    fn run(&mut self, rng: &mut ChaCha8Rng, budget: usize) -> bool {
        let m = self.edges.len();
        let mut pending: Vec<usize> = (0..m)
            .filter(|&i| {
                let [a, b] = self.edges[i];
                self.is_bad(a, b)
            })
            .collect();
        pending.reverse();
        let mut proposals = 0usize;
        while let Some(i) = pending.pop() {
            loop {
                let [a, b] = self.edges[i];
                if !self.is_bad(a, b) {
                    break;
                }
                if proposals >= budget {
                    return false;
                }
                proposals += 1;
                let j = rng.random_range(0..m);
                if j == i {
                    continue;
                }
                let [mut c, mut d] = self.edges[j];
                if rng.random::<bool>() {
                    std::mem::swap(&mut c, &mut d);
                }
                if a == c || b == d {
                    continue;
                }
                self.remove(a, b);
                self.remove(c, d);
                self.add(a, c);
                self.add(b, d);
                if self.is_bad(a, c) || self.is_bad(b, d) {
                    self.remove(a, c);
                    self.remove(b, d);
                    self.add(a, b);
                    self.add(c, d);
                    continue;
                }
                self.edges[i] = [a, c];
                self.edges[j] = [b, d];
                break;
            }
        }
        true
    }
}
