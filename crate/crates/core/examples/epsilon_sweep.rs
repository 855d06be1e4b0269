//! A small grid sweep written to disk as CSV, JSON and SVG, followed by a
//! quadratic fit for the best epsilon.
//!
//! ```text
//! cargo run --release --example epsilon_sweep -- /tmp/wavecut_sweep
//! ```

use std::path::PathBuf;

use wavecut::sweep::{grid_sweep, optimize_epsilon, SweepSpec};

const SPEC: &str = r#"
degrees = [10, 20]
n = [20000]
radii = [2]
families = ["geometric", "optimized"]
epsilons = [0.0, 0.1, 0.2, 0.3]
trials = 4
master_seed = 11
"#;

fn main() -> wavecut::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("wavecut_sweep"));
    let spec = SweepSpec::parse(SPEC)?;
    println!("{} cells, estimated work {:.2e}", spec.cells().len(), spec.estimated_work());
    let report = grid_sweep(&spec)?;
    report.write(&out, true)?;
    print!("{}", report.to_csv());
    println!("written to {}", out.display());

    let (fit, _) = optimize_epsilon(20, 2, 20_000, 4, &[0.0, 0.1, 0.2, 0.3, 0.5], 3)?;
    println!(
        "fit C(eps) = {:.4} + {:.4} eps + {:.4} eps^2, best eps {:.3}{}",
        fit.coefficients[0],
        fit.coefficients[1],
        fit.coefficients[2],
        fit.eps_star,
        if fit.degenerate { " (grid argmax)" } else { "" }
    );
    Ok(())
}
