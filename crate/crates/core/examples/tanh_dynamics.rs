//! Smoothed nonlinear dynamics compared with the exact linear filter.
//! As `beta` shrinks, one round approaches the radius-1 filter.
//!
//! ```text
//! cargo run --release --example tanh_dynamics
//! ```

use wavecut::estimator::cut_fraction;
use wavecut::filter::{init_gaussian, one_step_update, tanh_dynamics, TanhRound};
use wavecut::graph::generate_regular;
use wavecut::rounding::round_signs;

fn main() -> wavecut::Result<()> {
    let (n, d) = (20_000, 9);
    let g = generate_regular(n, d, 3, 5, 50)?;
    let x = init_gaussian(n, 4);
    let a = -1.0 / (d as f64).sqrt();
    let linear = round_signs(&one_step_update(&g, &x, a)?);
    println!("linear one-step cut {:.5}", cut_fraction(&g, &linear)?);
    for beta in [0.0, 0.01, 0.5, 2.0] {
        for rounds in [1usize, 2, 4] {
            let r = vec![TanhRound { c_self: 1.0, c_nbr: a, beta }; rounds];
            let p = round_signs(&tanh_dynamics(&g, &x, &r)?);
            let agree = p.parts().iter().zip(linear.parts()).filter(|(x, y)| x == y).count();
            println!(
                "beta {beta:>4} rounds {rounds}: cut {:.5}, agrees with linear on {:.1}% of vertices",
                cut_fraction(&g, &p)?,
                100.0 * agree as f64 / n as f64
            );
        }
    }
    Ok(())
}
