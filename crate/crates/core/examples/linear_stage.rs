//! One trial of the linear stage by hand: Gaussian field, shell filter,
//! sign rounding. The measured cut fraction is compared with the tree
//! prediction.
//!
//! ```text
//! cargo run --release --example linear_stage
//! ```

use wavecut::estimator::{cut_fraction, edge_correlation};
use wavecut::filter::{geometric_schedule, init_gaussian, multi_shell_update};
use wavecut::graph::generate_regular;
use wavecut::rounding::round_signs;
use wavecut::theory::{exact_tree_correlation, predicted_cut_fraction};

fn main() -> wavecut::Result<()> {
    let (n, d, k) = (50_000, 10, 3);
    let g = generate_regular(n, d, 7, 5, 50)?;
    let s = geometric_schedule(d, k)?;
    let x = init_gaussian(n, 1);
    let y = multi_shell_update(&g, &x, &s)?;
    let p = round_signs(&y);

    let rho = exact_tree_correlation(d, &s, 1)?.rho;
    println!("schedule {:?}", s.coeffs());
    println!("measured cut {:.5}, edge corr {:+.5}", cut_fraction(&g, &p)?, edge_correlation(&g, &p)?);
    println!("tree predicts cut {:.5} (field rho {:+.5})", predicted_cut_fraction(rho)?, rho);

    // empirical neighbor correlation of the filtered field itself
    let (mut num, mut den) = (0.0, 0.0);
    for (u, v) in g.edges() {
        num += y[u as usize] * y[v as usize];
    }
    for v in y.values() {
        den += v * v;
    }
    let m = g.edge_count() as f64;
    println!("empirical field rho {:+.5}", (num / m) / (den / n as f64));
    Ok(())
}
