//! Sign rounding, random marking and the one-step flips applied to marked
//! vertices.

use std::fmt::Write as _;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::FieldAssignment;
use crate::graph::{Graph, Vertex};
use crate::rng::{chacha, uniform_at};

/// One part, `+1` or `-1`, per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<i8>,
}

impl Partition {
    pub fn new(parts: Vec<i8>) -> Result<Self> {
        if let Some(i) = parts.iter().position(|&p| p != 1 && p != -1) {
            return Err(Error::invalid(format!("part at {i} is {}, not +-1", parts[i])));
        }
        Ok(Partition { parts })
    }

    pub fn constant(n: usize, sign: i8) -> Self {
        Partition::new(vec![sign; n]).expect("constant sign must be +-1")
    }

    pub fn parts(&self) -> &[i8] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn negated(&self) -> Self {
        Partition {
            parts: self.parts.iter().map(|&p| -p).collect(),
        }
    }

    /// Space-separated `+-1` integers on a single line.
    pub fn to_line(&self) -> String {
        let mut out = String::with_capacity(self.parts.len() * 3);
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{p}").unwrap();
        }
        out.push('\n');
        out
    }

    pub(crate) fn check(&self, g: &Graph) -> Result<()> {
        if self.parts.len() != g.n() {
            return Err(Error::LengthMismatch {
                expected: g.n(),
                actual: self.parts.len(),
            });
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for Partition {
    type Output = i8;
    fn index(&self, i: usize) -> &i8 {
        &self.parts[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkMode {
    /// Each vertex independently with probability epsilon.
    #[default]
    Bernoulli,
    /// A uniformly random subset of exactly `round(epsilon * n)` vertices.
    Exact,
}

impl std::str::FromStr for MarkMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bernoulli" => Ok(MarkMode::Bernoulli),
            "exact" => Ok(MarkMode::Exact),
            other => Err(Error::invalid(format!("unknown mark mode {other:?}"))),
        }
    }
}

/// Marked vertex ids (sorted) together with a membership mask.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkSet {
    ids: Vec<Vertex>,
    mask: Vec<bool>,
    epsilon: f64,
}

impl MarkSet {
    pub fn from_ids(n: usize, mut ids: Vec<Vertex>, epsilon: f64) -> Result<Self> {
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate marked vertex"));
        }
        let mut mask = vec![false; n];
        for &v in &ids {
            *mask
                .get_mut(v as usize)
                .ok_or_else(|| Error::invalid(format!("marked vertex {v} out of range")))? = true;
        }
        Ok(MarkSet { ids, mask, epsilon })
    }

    pub fn none(n: usize) -> Self {
        MarkSet {
            ids: Vec::new(),
            mask: vec![false; n],
            epsilon: 0.0,
        }
    }

    pub fn all(n: usize) -> Self {
        MarkSet {
            ids: (0..n as Vertex).collect(),
            mask: vec![true; n],
            epsilon: 1.0,
        }
    }

    #[inline]
    pub fn is_marked(&self, v: Vertex) -> bool {
        self.mask[v as usize]
    }

    pub fn ids(&self) -> &[Vertex] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn to_line(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.ids.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
        out
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if self.mask.len() != g.n() {
            return Err(Error::LengthMismatch {
                expected: g.n(),
                actual: self.mask.len(),
            });
        }
        Ok(())
    }
}

/// `+1` for positive entries, `-1` for negative ones; exact zeros go to `+1`.
pub fn round_signs(x: &FieldAssignment) -> Partition {
    Partition {
        parts: x
            .values()
            .iter()
            .map(|&v| if v < 0.0 { -1 } else { 1 })
            .collect(),
    }
}

pub fn mark_vertices(n: usize, epsilon: f64, seed: u64, mode: MarkMode) -> Result<MarkSet> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::invalid(format!("epsilon must lie in [0, 1], got {epsilon}")));
    }
    let ids: Vec<Vertex> = match mode {
        MarkMode::Bernoulli => (0..n as Vertex)
            .filter(|&v| uniform_at(seed, v as u64) < epsilon)
            .collect(),
        MarkMode::Exact => {
            let k = ((epsilon * n as f64).round() as usize).min(n);
            let mut rng = chacha(seed);
            index::sample(&mut rng, n, k).into_iter().map(|v| v as Vertex).collect()
        }
    };
    MarkSet::from_ids(n, ids, epsilon)
}

/// Marked vertices take the part opposite to the majority of their
/// neighbors' rounded signs; a tied vote keeps the vertex's own sign.
///
/// All votes read `rounded`, never the partially updated output.
pub fn greedy_flip(g: &Graph, rounded: &Partition, marks: &MarkSet) -> Result<Partition> {
    rounded.check(g)?;
    marks.check(g)?;
    let mut parts = rounded.parts.clone();
    for &u in marks.ids() {
        let m: i64 = g
            .neighbors(u)
            .iter()
            .map(|&v| rounded.parts[v as usize] as i64)
            .sum();
        parts[u as usize] = match m.signum() {
            1 => -1,
            -1 => 1,
            _ => rounded.parts[u as usize],
        };
    }
    Ok(Partition { parts })
}

/// Marked `u` flips when at least `deg(u)/2 + tau*sqrt(deg(u))` neighbors
/// share its part. `tau = +inf` disables flipping.
pub fn threshold_flip(g: &Graph, p: &Partition, marks: &MarkSet, tau: f64) -> Result<Partition> {
    p.check(g)?;
    marks.check(g)?;
    if tau.is_nan() {
        return Err(Error::invalid("tau must not be NaN"));
    }
    let mut parts = p.parts.clone();
    for &u in marks.ids() {
        let own = p.parts[u as usize];
        let agree = g
            .neighbors(u)
            .iter()
            .filter(|&&v| p.parts[v as usize] == own)
            .count() as f64;
        let d = g.degree(u) as f64;
        if agree >= d / 2.0 + tau * d.sqrt() {
            parts[u as usize] = -own;
        }
    }
    Ok(Partition { parts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::{init_gaussian, multi_shell_update, geometric_schedule};
    use crate::graph::{build_tree, complete_graph, generate_regular, Graph};
    use proptest::prelude::*;

    fn field(v: &[f64]) -> FieldAssignment {
        FieldAssignment::new(v.to_vec()).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves as u32).map(|v| (0, v)), None).unwrap()
    }

    fn parts(v: &[i8]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rounding_rule() {
        assert_eq!(round_signs(&field(&[-0.3, 0.7, 2.0])).parts(), &[-1, 1, 1]);
        assert_eq!(round_signs(&field(&[-1.0, -2.0])).parts(), &[-1, -1]);
        assert_eq!(round_signs(&field(&[0.0, -0.0])).parts(), &[1, 1]);
    }

    #[test]
    fn marking_edge_cases() {
        assert!(mark_vertices(100, 0.0, 1, MarkMode::Bernoulli).unwrap().is_empty());
        assert_eq!(mark_vertices(100, 1.0, 1, MarkMode::Bernoulli).unwrap().len(), 100);
        assert!(mark_vertices(100, 0.0, 1, MarkMode::Exact).unwrap().is_empty());
        assert_eq!(mark_vertices(100, 1.0, 1, MarkMode::Exact).unwrap().len(), 100);
        assert_eq!(mark_vertices(1000, 0.25, 3, MarkMode::Exact).unwrap().len(), 250);
        assert!(mark_vertices(10, 1.5, 1, MarkMode::Bernoulli).is_err());
        let m = mark_vertices(10_000, 0.1, 7, MarkMode::Bernoulli).unwrap();
        // Binomial(10^4, 0.1): sd = 30, so 4 sd = 120
        assert!((m.len() as i64 - 1000).abs() <= 120, "{}", m.len());
        assert_eq!(m, mark_vertices(10_000, 0.1, 7, MarkMode::Bernoulli).unwrap());
        assert!(m.ids().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bernoulli_marks_are_nested_in_epsilon() {
        let small = mark_vertices(5000, 0.05, 11, MarkMode::Bernoulli).unwrap();
        let large = mark_vertices(5000, 0.2, 11, MarkMode::Bernoulli).unwrap();
        assert!(small.ids().iter().all(|&v| large.is_marked(v)));
    }

    #[test]
    fn greedy_examples() {
        let all = |n| MarkSet::all(n);
        // center (+) with neighbor signs (+,+,+,+,-): majority + -> flip to -
        let g = star(5);
        let p = parts(&[1, 1, 1, 1, 1, -1]);
        assert_eq!(greedy_flip(&g, &p, &all(6)).unwrap()[0], -1);
        // tie keeps the own sign
        let g = star(4);
        let p = parts(&[1, 1, 1, -1, -1]);
        let only_center = MarkSet::from_ids(5, vec![0], 0.2).unwrap();
        assert_eq!(greedy_flip(&g, &p, &only_center).unwrap()[0], 1);
        // already fully cut: keep
        let p = parts(&[1, -1, -1, -1, -1]);
        assert_eq!(greedy_flip(&g, &p, &only_center).unwrap()[0], 1);
        // unmarked leaves untouched
        let out = greedy_flip(&g, &p, &only_center).unwrap();
        assert_eq!(&out.parts()[1..], &p.parts()[1..]);
    }

    #[test]
    fn greedy_reads_pre_flip_signs() {
        // path 0-1-2 all +: both ends see a + majority and flip, the middle
        // sees two + and flips too; sequential updates would disagree
        let g = Graph::from_edges(3, [(0, 1), (1, 2)], None).unwrap();
        let p = Partition::constant(3, 1);
        assert_eq!(greedy_flip(&g, &p, &MarkSet::all(3)).unwrap().parts(), &[-1, -1, -1]);
    }

    #[test]
    fn threshold_examples() {
        let g = generate_regular(30, 9, 1, 3, 10).unwrap();
        let p = Partition::constant(30, 1);
        let all = MarkSet::all(30);
        assert_eq!(threshold_flip(&g, &p, &all, f64::INFINITY).unwrap(), p);
        assert_eq!(threshold_flip(&g, &p, &all, 0.0).unwrap(), p.negated());
        // D = 9, tau = 0, five agreeing neighbors: 5 >= 4.5 flips; four do not
        let g = star(9);
        let center = MarkSet::from_ids(10, vec![0], 0.1).unwrap();
        let five = parts(&[1, 1, 1, 1, 1, 1, -1, -1, -1, -1]);
        assert_eq!(threshold_flip(&g, &five, &center, 0.0).unwrap()[0], -1);
        let four = parts(&[1, 1, 1, 1, 1, -1, -1, -1, -1, -1]);
        assert_eq!(threshold_flip(&g, &four, &center, 0.0).unwrap()[0], 1);
    }

    #[test]
    fn empty_marks_are_identity() {
        let g = complete_graph(5);
        let p = parts(&[1, -1, 1, 1, -1]);
        assert_eq!(greedy_flip(&g, &p, &MarkSet::none(5)).unwrap(), p);
        assert_eq!(threshold_flip(&g, &p, &MarkSet::none(5), 0.0).unwrap(), p);
    }

    #[test]
    fn dumps() {
        assert_eq!(parts(&[1, -1, 1]).to_line(), "1 -1 1\n");
        assert_eq!(MarkSet::from_ids(9, vec![5, 2, 7], 0.3).unwrap().to_line(), "2 5 7\n");
        assert!(MarkSet::from_ids(3, vec![1, 1], 0.3).is_err());
        assert!(Partition::new(vec![0]).is_err());
    }

    fn cut_edges_at(g: &Graph, u: u32, own: i8, reference: &Partition) -> usize {
        g.neighbors(u).iter().filter(|&&v| reference[v as usize] != own).count()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn positive_scaling_invariance(seed in 0u64..10_000, c in 1e-6f64..1e6) {
            let x = init_gaussian(500, seed);
            let scaled = field(&x.values().iter().map(|v| c * v).collect::<Vec<_>>());
            prop_assert_eq!(round_signs(&scaled), round_signs(&x));
        }

        #[test]
        fn global_sign_symmetry(seed in 0u64..10_000, eps in 0.0f64..1.0) {
            // odd degree rules out tied votes
            let g = generate_regular(200, 5, seed, 3, 10).unwrap();
            let x = multi_shell_update(&g, &init_gaussian(200, seed), &geometric_schedule(5, 2).unwrap()).unwrap();
            let neg = field(&x.values().iter().map(|v| -v).collect::<Vec<_>>());
            let r = round_signs(&x);
            prop_assert_eq!(round_signs(&neg), r.negated());
            let marks = mark_vertices(200, eps, seed, MarkMode::Bernoulli).unwrap();
            prop_assert_eq!(
                greedy_flip(&g, &round_signs(&neg), &marks).unwrap(),
                greedy_flip(&g, &r, &marks).unwrap().negated()
            );
        }

        #[test]
        fn greedy_never_cuts_fewer_incident_edges(seed in 0u64..10_000, d in 3usize..9) {
            let n = if d % 2 == 1 { 100 } else { 101 };
            let g = generate_regular(n, d, seed, 3, 10).unwrap();
            let r = round_signs(&init_gaussian(n, seed));
            let marks = mark_vertices(n, 0.5, seed, MarkMode::Bernoulli).unwrap();
            let out = greedy_flip(&g, &r, &marks).unwrap();
            for &u in marks.ids() {
                let before = cut_edges_at(&g, u, r[u as usize], &r);
                let after = cut_edges_at(&g, u, out[u as usize], &r);
                prop_assert!(after >= before);
            }
        }
    }

    #[test]
    fn tree_fixture_greedy() {
        let t = build_tree(3, 2).unwrap();
        let p = Partition::constant(t.n(), 1);
        let out = greedy_flip(&t, &p, &MarkSet::all(t.n())).unwrap();
        // every vertex has a + majority (leaves: their single neighbor)
        assert_eq!(out, p.negated());
    }
}
