//! Exact infinite-tree predictions for the geometric schedule.
//!
//! For each degree prints the neighbor correlation of the filtered field,
//! its leading-order approximation, and the implied cut fraction and
//! scaled constant `C`.
//!
//! ```text
//! cargo run --release --example tree_predictions
//! ```

use wavecut::filter::geometric_schedule;
use wavecut::theory::{asymptotic_rho, exact_tree_correlation, predicted_cut_fraction, scaled_constant, PARISI, TWO_OVER_PI};

fn main() -> wavecut::Result<()> {
    println!("{:>5} {:>2} {:>10} {:>10} {:>9} {:>7}", "D", "K", "rho", "asym", "cut", "C");
    for d in [3usize, 10, 40, 100, 1000] {
        for k in [1usize, 2, 3, 6] {
            let s = geometric_schedule(d, k)?;
            let rho = exact_tree_correlation(d, &s, 1)?.rho;
            let asym = asymptotic_rho(d, k).map_or("-".to_string(), |r| format!("{r:.6}"));
            let cut = predicted_cut_fraction(rho)?;
            println!(
                "{d:>5} {k:>2} {rho:>10.6} {asym:>10} {cut:>9.6} {:>7.4}",
                scaled_constant(cut, d)
            );
        }
    }
    println!("2/pi = {TWO_OVER_PI:.4}, Parisi = {PARISI}");

    // correlations alternate in sign with distance
    let s = geometric_schedule(16, 4)?;
    for dist in 0..=5 {
        println!("D=16 K=4 distance {dist}: rho {:+.6}", exact_tree_correlation(16, &s, dist)?.rho);
    }
    Ok(())
}
