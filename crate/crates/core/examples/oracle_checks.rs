//! Ground truths: exhaustive MAX-CUT against the pipeline on small graphs,
//! the arcsine law by Monte Carlo, and the finite-tree correlation check.
//!
//! ```text
//! cargo run --release --example oracle_checks
//! ```

use wavecut::estimator::{trial_artifacts, GraphSpec, RunConfig, ScheduleSpec, Variant};
use wavecut::filter::geometric_schedule;
use wavecut::oracle::{brute_force_max_cut, cut_edges, mc_bivariate_sign_correlation, tree_mc_correlation};
use wavecut::theory::{exact_tree_correlation, sheppard};

fn main() -> wavecut::Result<()> {
    for n in [10usize, 14, 18] {
        let cfg = RunConfig {
            epsilon: 0.3,
            variant: Variant::Greedy,
            ..RunConfig::new(GraphSpec::random(n, 3, 3), ScheduleSpec::Geometric { radius: 2 }, 1, n as u64)
        };
        let (g, marks, p) = trial_artifacts(&cfg, 0)?;
        let (best, witness) = brute_force_max_cut(&g)?;
        let cut = cut_edges(&g, p.parts()) as f64 / g.edge_count() as f64;
        println!("n={n}: pipeline {cut:.4} ({} marked), optimum {best:.4} with {}", marks.len(), witness.to_line().trim());
    }
    for rho in [-0.8, -0.3, 0.6] {
        let (est, se) = mc_bivariate_sign_correlation(rho, 200_000, 1)?;
        println!("rho {rho:+.1}: E[sign sign] mc {est:+.4} +/- {se:.4}, arcsine {:+.4}", sheppard(rho)?);
    }
    let s = geometric_schedule(4, 2)?;
    for d in 1..=3 {
        let (r, se) = tree_mc_correlation(4, &s, d, 20_000, d as u64)?;
        println!("tree D=4 K=2 distance {d}: mc {r:+.4} +/- {se:.4}, exact {:+.4}", exact_tree_correlation(4, &s, d)?.rho);
    }
    Ok(())
}
