//! Self-checks run by `wavecut verify`: oracle cross-checks, differential
//! tests of the filter, and pipeline invariants on small instances.

use serde::Serialize;

use crate::error::Result;
use crate::estimator::{finish_trial, linear_stage, trial_artifacts, GraphSpec, RunConfig, ScheduleSpec, Variant};
use crate::filter::{geometric_schedule, init_gaussian, multi_shell_update, one_step_update, CoefficientSchedule};
use crate::graph::{complete_graph, cycle_graph, generate_regular, parse_edge_list, petersen, Graph, Vertex};
use crate::oracle::{brute_force_max_cut, cut_edges, dense_ball_filter, mc_bivariate_sign_correlation, tree_mc_correlation};
use crate::rounding::MarkMode;
use crate::sweep::optimize_schedule;
use crate::theory::{exact_tree_correlation, sheppard};

pub const SUITES: &[&str] = &["sheppard", "brute-force", "dense", "tree", "pipeline", "graph", "optimizer"];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }
}

struct Recorder(Vec<Check>);

impl Recorder {
    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn result<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(name, false, e.to_string());
                None
            }
        }
    }
}

fn sheppard_suite(rec: &mut Recorder) {
    for (i, &rho) in [-0.9, -0.5, 0.0, 0.5, 0.9].iter().enumerate() {
        let name = format!("arcsine rho={rho}");
        if let Some((est, se)) = rec.result(&name, mc_bivariate_sign_correlation(rho, 1_000_000, 100 + i as u64)) {
            let exact = sheppard(rho).expect("rho in range");
            let z = (est - exact) / se;
            rec.check(name, z.abs() < 5.0, format!("mc {est:.5} exact {exact:.5} z {z:.2}"));
        }
    }
}

fn naive_best(g: &Graph) -> usize {
    let n = g.n();
    (0..1u64 << n)
        .map(|mask| {
            let p: Vec<i8> = (0..n).map(|v| if mask >> v & 1 == 1 { -1 } else { 1 }).collect();
            cut_edges(g, &p)
        })
        .max()
        .unwrap_or(0)
}

fn brute_force_suite(rec: &mut Recorder) {
    let fixtures: [(&str, Graph, f64); 3] = [
        ("cycle 5", cycle_graph(5).expect("n >= 3"), 0.8),
        ("K4", complete_graph(4), 4.0 / 6.0),
        ("petersen", petersen(), 0.8),
    ];
    for (name, g, want) in fixtures {
        if let Some((got, _)) = rec.result(name, brute_force_max_cut(&g)) {
            rec.check(name, got == want, format!("{got} vs {want}"));
        }
    }
    let mut bad = 0;
    for i in 0..100u64 {
        let n = 4 + 2 * (i % 8) as usize;
        let Ok(g) = generate_regular(n, 3, i, 3, 50) else { continue };
        if let Ok((frac, w)) = brute_force_max_cut(&g) {
            let best = naive_best(&g);
            let m = g.edge_count();
            if cut_edges(&g, w.parts()) != best || (frac * m as f64).round() as usize != best {
                bad += 1;
            }
        }
    }
    rec.check("gray code vs naive recount", bad == 0, format!("{bad} mismatches in 100"));
}

fn dense_suite(rec: &mut Recorder) {
    let s = geometric_schedule(4, 3).expect("valid");
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let (Ok(g), x) = (generate_regular(100, 4, seed, 3, 50), init_gaussian(100, seed)) else { continue };
        let Ok(y) = multi_shell_update(&g, &x, &s) else { continue };
        for u in (0..100).step_by(7) {
            if let Ok(d) = dense_ball_filter(&g, &x, &s, u as Vertex) {
                worst = worst.max((d - y[u]).abs() / d.abs().max(1.0));
            }
        }
    }
    rec.check("dense ball filter vs shell filter", worst <= 1e-12, format!("max rel err {worst:.2e}"));
    let g = petersen();
    let x = init_gaussian(10, 3);
    let a = -0.4;
    let one = one_step_update(&g, &x, a);
    let multi = multi_shell_update(&g, &x, &CoefficientSchedule::new(vec![1.0, a]).expect("valid"));
    let same = matches!((one, multi), (Ok(p), Ok(q)) if p == q);
    rec.check("one-step equals radius-1 shell filter", same, "bitwise");
}

fn tree_suite(rec: &mut Recorder) {
    for &(d, k) in &[(3usize, 1usize), (3, 2), (5, 2), (9, 1)] {
        let name = format!("tree D={d} K={k}");
        let s = geometric_schedule(d, k).expect("valid");
        let exact = exact_tree_correlation(d, &s, 1).expect("valid").rho;
        if let Some((r, se)) = rec.result(&name, tree_mc_correlation(d, &s, 1, 20_000, d as u64 * 10 + k as u64)) {
            let z = (r - exact) / se;
            rec.check(name, z.abs() < 5.0, format!("mc {r:.4} exact {exact:.4} z {z:.2}"));
        }
    }
}

fn pipeline_suite(rec: &mut Recorder) {
    let mut worse = 0;
    let mut count = 0;
    for i in 0..50u64 {
        let degree = 3 + (i % 2) as usize;
        let n = if degree == 3 { 8 + 2 * (i % 7) as usize } else { 6 + (i % 15) as usize };
        let mut cfg = RunConfig::new(
            GraphSpec::random(n, degree, 3),
            ScheduleSpec::Geometric { radius: 1 + (i % 3) as usize },
            1,
            i,
        );
        cfg.epsilon = (i % 5) as f64 / 4.0;
        cfg.variant = if i % 2 == 0 { Variant::Greedy } else { Variant::Plain };
        cfg.mark_mode = MarkMode::Bernoulli;
        let Ok((g, _, p)) = trial_artifacts(&cfg, 0) else { continue };
        let Ok((best, _)) = brute_force_max_cut(&g) else { continue };
        count += 1;
        let cut = cut_edges(&g, p.parts()) as f64 / g.edge_count() as f64;
        if cut > best {
            worse += 1;
        }
    }
    rec.check("pipeline never beats exhaustive optimum", worse == 0 && count > 0, format!("{count} instances"));
    let cfg = RunConfig::new(GraphSpec::random(500, 5, 5), ScheduleSpec::Geometric { radius: 2 }, 1, 7);
    let g = cfg.graph.build(7, 0).map(std::sync::Arc::new);
    if let Some(g) = rec.result("identity instance", g) {
        let s = geometric_schedule(5, 2).expect("valid");
        let r = linear_stage(g, &cfg, &s, 0).and_then(|st| finish_trial(&st, &cfg));
        if let Some(t) = rec.result("identity", r) {
            rec.check(
                "edge correlation identity",
                (t.edge_corr - (1.0 - 2.0 * t.cut_fraction)).abs() <= 4.0 * f64::EPSILON,
                format!("{} vs {}", t.edge_corr, t.cut_fraction),
            );
        }
    }
}

fn graph_suite(rec: &mut Recorder) {
    if let Some(g) = rec.result("generate", generate_regular(2000, 4, 1, 6, 20)) {
        rec.check("girth floor", g.girth().at_least(6), g.girth().to_string());
        let text = g.to_edge_list();
        let back = parse_edge_list(&text, "memory");
        rec.check("edge list round trip", matches!(back, Ok(ref b) if *b == g), "");
    }
    let bad = parse_edge_list("3 2\n0 1\n1 2\n", "asymmetric");
    rec.check("irregular file rejected", bad.is_err(), bad.err().map(|e| e.to_string()).unwrap_or_default());
}

fn optimizer_suite(rec: &mut Recorder) {
    if let Some(opt) = rec.result("optimize 9/1", optimize_schedule(9, 1)) {
        let a1 = opt.schedule.coeffs()[1];
        rec.check("K=1 optimum", (a1 + 1.0 / 3.0).abs() < 1e-6, format!("a1 = {a1}"));
    }
    if let Some(opt) = rec.result("optimize 16/6", optimize_schedule(16, 6)) {
        rec.check("not worse than geometric", opt.rho <= opt.initial_rho, format!("{} <= {}", opt.rho, opt.initial_rho));
    }
}

/// Runs one named suite.
pub fn run_suite(name: &str) -> Option<SuiteReport> {
    let mut rec = Recorder(Vec::new());
    match name {
        "sheppard" => sheppard_suite(&mut rec),
        "brute-force" => brute_force_suite(&mut rec),
        "dense" => dense_suite(&mut rec),
        "tree" => tree_suite(&mut rec),
        "pipeline" => pipeline_suite(&mut rec),
        "graph" => graph_suite(&mut rec),
        "optimizer" => optimizer_suite(&mut rec),
        _ => return None,
    }
    Some(SuiteReport {
        suite: name.to_string(),
        checks: rec.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for name in SUITES {
            let r = run_suite(name).unwrap();
            assert!(!r.checks.is_empty(), "{name}");
            assert_eq!(r.failed(), 0, "{name}: {:?}", r.checks);
        }
        assert!(run_suite("nope").is_none());
    }
}
