//! The epsilon-greedy step: cut fraction and stratified edge statistics
//! across an epsilon grid, sharing one linear stage per trial.
//!
//! ```text
//! cargo run --release --example greedy_flip
//! ```

use wavecut::estimator::{pooled_stderr, MetricSummary, run_group, GraphSpec, RunConfig, ScheduleSpec, Variant};

fn main() -> wavecut::Result<()> {
    let base = RunConfig {
        variant: Variant::Greedy,
        ..RunConfig::new(GraphSpec::random(40_000, 20, 3), ScheduleSpec::Geometric { radius: 2 }, 8, 1)
    };
    let eps = [0.0, 0.05, 0.1, 0.2, 0.4, 1.0];
    let cells: Vec<RunConfig> = eps.iter().map(|&e| RunConfig { epsilon: e, ..base.clone() }).collect();
    let reports = run_group(&cells)?.into_iter().collect::<wavecut::Result<Vec<_>>>()?;
    let zero = &reports[0].summary;
    println!("{:>5} {:>16} {:>9} {:>9} {:>9} {:>7}", "eps", "C", "unmarked", "one", "both", "z");
    for (e, r) in eps.iter().zip(&reports) {
        let s = &r.summary;
        let class = |m: &Option<MetricSummary>| m.as_ref().map_or(f64::NAN, |m| m.mean);
        let z = pooled_stderr(&s.scaled_c, &zero.scaled_c).map_or(0.0, |p| (s.scaled_c.mean - zero.scaled_c.mean) / p);
        println!(
            "{e:>5.2} {:>8.5}+/-{:.5} {:>+9.5} {:>+9.5} {:>+9.5} {z:>7.1}",
            s.scaled_c.mean,
            s.scaled_c.stderr.unwrap_or(0.0),
            class(&s.both_unmarked),
            class(&s.one_marked),
            class(&s.both_marked)
        );
    }
    Ok(())
}
