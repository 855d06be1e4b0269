//! Geometric against optimized coefficient schedules under the exact tree
//! objective.
//!
//! ```text
//! cargo run --release --example schedule_search
//! ```

use wavecut::sweep::optimize_schedule;
use wavecut::theory::{predicted_cut_fraction, scaled_constant};

fn main() -> wavecut::Result<()> {
    for d in [5usize, 16, 100, 1000] {
        println!("D = {d} (limit -2/sqrt(D) = {:.5})", -2.0 / (d as f64).sqrt());
        for k in 1..=6 {
            let opt = optimize_schedule(d, k)?;
            let c = scaled_constant(predicted_cut_fraction(opt.rho)?, d);
            println!(
                "  K={k}: geometric {:+.5}  optimized {:+.5}  C {c:.4}  ({} sweeps)",
                opt.initial_rho, opt.rho, opt.sweeps
            );
        }
    }
    let opt = optimize_schedule(16, 4)?;
    println!("D=16 K=4 schedule {:?}", opt.schedule.coeffs());
    Ok(())
}
