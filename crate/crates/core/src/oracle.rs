//! Independent ground truths: exhaustive MAX-CUT, Monte Carlo sign
//! correlations, and a dense re-implementation of the shell filter.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filter::{CoefficientSchedule, FieldAssignment};
use crate::graph::{build_tree, Graph, Vertex};
use crate::rng::{chacha, derive_seed, normal_at, Stream};
use crate::rounding::Partition;

pub const BRUTE_FORCE_MAX_N: usize = 24;
pub const DENSE_FILTER_MAX_N: usize = 500;

/// Number of cut edges, recounted from scratch.
pub fn cut_edges(g: &Graph, parts: &[i8]) -> usize {
    g.edges()
        .filter(|&(u, v)| parts[u as usize] != parts[v as usize])
        .count()
}

/// Exact maximum cut fraction and one optimal partition.
///
/// Walks all `2^(n-1)` patterns with vertex 0 fixed to `+1` in Gray-code
/// order, updating the cut count by one vertex flip per step.
pub fn brute_force_max_cut(g: &Graph) -> Result<(f64, Partition)> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::SizeLimit {
            what: "brute-force vertex count",
            value: n,
            limit: BRUTE_FORCE_MAX_N,
        });
    }
    if n == 0 || g.edge_count() == 0 {
        return Ok((0.0, Partition::constant(n, 1)));
    }
    let mut parts = vec![1i8; n];
    let mut cut: i64 = 0;
    let mut best = (0i64, 0u64);
    let mut code: u64 = 0;
    for step in 1u64..(1u64 << (n - 1)) {
        let bit = step.trailing_zeros() as usize;
        let v = bit + 1;
        let own = parts[v];
        for &w in g.neighbors(v as Vertex) {
            cut += if parts[w as usize] == own { 1 } else { -1 };
        }
        parts[v] = -own;
        code ^= 1 << bit;
        if cut > best.0 {
            best = (cut, code);
        }
    }
    let witness: Vec<i8> = (0..n)
        .map(|v| if v > 0 && best.1 >> (v - 1) & 1 == 1 { -1 } else { 1 })
        .collect();
    debug_assert_eq!(cut_edges(g, &witness) as i64, best.0);
    Ok((best.0 as f64 / g.edge_count() as f64, Partition::new(witness)?))
}

fn sign(x: f64) -> i64 {
    if x < 0.0 {
        -1
    } else {
        1
    }
}

/// Mean of `sign(X) sign(Y)` over pairs `(X, rho X + sqrt(1 - rho^2) Z)`,
/// with its standard error.
pub fn mc_bivariate_sign_correlation(rho: f64, samples: u64, seed: u64) -> Result<(f64, f64)> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::Domain(rho));
    }
    if samples < 2 {
        return Err(Error::invalid("need at least two samples"));
    }
    let c = (1.0 - rho * rho).sqrt();
    let total: i64 = (0..samples)
        .into_par_iter()
        .map(|i| {
            let x = normal_at(seed, 2 * i);
            let z = normal_at(seed, 2 * i + 1);
            sign(x) * sign(rho * x + c * z)
        })
        .sum();
    let t = samples as f64;
    let mean = total as f64 / t;
    let var = (1.0 - mean * mean) * t / (t - 1.0);
    Ok((mean, (var / t).sqrt()))
}

/// Filter weights of one vertex: `(w, a_{dist(center, w)})` over its ball.
fn ball_weights(g: &Graph, center: Vertex, s: &CoefficientSchedule) -> Vec<(Vertex, f64)> {
    let shells = g.shells(center, s.radius());
    shells
        .shells
        .iter()
        .zip(s.coeffs())
        .flat_map(|(shell, &a)| shell.iter().map(move |&w| (w, a)))
        .collect()
}

/// Monte Carlo estimate of the correlation of the filtered values at two
/// vertices at distance `d` on a finite tree deep enough to look infinite
/// from both balls. Returns `(rho_hat, stderr)` with the Gaussian
/// approximation `(1 - rho^2)/sqrt(T)` for the error.
pub fn tree_mc_correlation(
    degree: usize,
    s: &CoefficientSchedule,
    d: usize,
    trials: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if degree < 3 {
        return Err(Error::invalid(format!("tree needs D >= 3, got {degree}")));
    }
    if trials < 2 {
        return Err(Error::invalid("need at least two trials"));
    }
    let tree = build_tree(degree, s.radius() + d + 1)?;
    let u: Vertex = 0;
    let mut v = u;
    for _ in 0..d {
        v = tree.neighbors(v)[tree.degree(v) - 1];
    }
    // dense local index over the union of both balls
    let wu = ball_weights(&tree, u, s);
    let wv = ball_weights(&tree, v, s);
    let mut slot = std::collections::HashMap::new();
    for &(w, _) in wu.iter().chain(&wv) {
        let next = slot.len();
        slot.entry(w).or_insert(next);
    }
    let wu: Vec<(usize, f64)> = wu.iter().map(|&(w, a)| (slot[&w], a)).collect();
    let wv: Vec<(usize, f64)> = wv.iter().map(|&(w, a)| (slot[&w], a)).collect();
    let m = slot.len();
    let pairs: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map_init(
            || vec![0.0f64; m],
            |x, t| {
                let mut rng = chacha(derive_seed(seed, Stream::Oracle, t));
                for xi in x.iter_mut() {
                    *xi = rng.sample(StandardNormal);
                }
                let fu: f64 = wu.iter().map(|&(i, a)| a * x[i]).sum();
                let fv: f64 = wv.iter().map(|&(i, a)| a * x[i]).sum();
                (fu, fv)
            },
        )
        .collect();
    let (mut suv, mut suu, mut svv) = (0.0, 0.0, 0.0);
    for &(fu, fv) in &pairs {
        suv += fu * fv;
        suu += fu * fu;
        svv += fv * fv;
    }
    let rho = if d == 0 { 1.0 } else { suv / (suu * svv).sqrt() };
    Ok((rho, (1.0 - rho * rho) / (trials as f64).sqrt()))
}

/// Shell filter at `u` from Jacobi relaxation of distances over the edge
/// list, summed in ascending vertex id.
pub fn dense_ball_filter(
    g: &Graph,
    x: &FieldAssignment,
    s: &CoefficientSchedule,
    u: Vertex,
) -> Result<f64> {
    let n = g.n();
    if n > DENSE_FILTER_MAX_N {
        return Err(Error::SizeLimit {
            what: "dense filter vertex count",
            value: n,
            limit: DENSE_FILTER_MAX_N,
        });
    }
    x.check(g)?;
    if u as usize >= n {
        return Err(Error::invalid(format!("vertex {u} out of range")));
    }
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let mut dist = vec![usize::MAX; n];
    dist[u as usize] = 0;
    loop {
        let prev = dist.clone();
        for &(a, b) in &edges {
            let (a, b) = (a as usize, b as usize);
            if prev[a] != usize::MAX {
                dist[b] = dist[b].min(prev[a] + 1);
            }
            if prev[b] != usize::MAX {
                dist[a] = dist[a].min(prev[b] + 1);
            }
        }
        if dist == prev {
            break;
        }
    }
    let a = s.coeffs();
    let mut total = 0.0;
    for w in 0..n {
        if let Some(&ak) = a.get(dist[w]) {
            total += ak * x[w];
        }
    }
    Ok(total)
}
