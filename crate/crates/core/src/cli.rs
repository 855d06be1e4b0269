//! Command-line front end. [`run`] returns the process exit code:
//! `0` success, `1` usage or runtime error, `2` verification failure,
//! `3` budget refusal.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::estimator::{
    run_experiment, trial_artifacts, write_metadata, write_outputs, ExperimentReport, GraphSpec, RunConfig,
    ScheduleSpec, Variant,
};
use crate::filter::{CoefficientSchedule, TanhRound};
use crate::rounding::MarkMode;
use crate::sweep::{grid_sweep_with, optimize_schedule, SweepSpec};
use crate::theory::{
    asymptotic_rho, exact_tree_correlation, predicted_cut_fraction, prediction_row, reference_constants,
    scaled_constant,
};
use crate::verify::{run_suite, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "wavecut", version, about = "Local Gaussian-wave MAX-CUT experiments on high-girth regular graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact tree predictions for a schedule.
    Theory(TheoryArgs),
    /// Monte Carlo experiment.
    Run(Box<RunArgs>),
    /// Oracle and differential self-checks.
    Verify(VerifyArgs),
    /// Grid sweep from a TOML file.
    Sweep(SweepArgs),
    /// Schedule minimizing the exact neighbor correlation.
    OptimizeSchedule(OptimizeArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum Format {
    Table,
    Json,
}

#[derive(Args, Debug)]
struct TheoryArgs {
    #[arg(long = "D")]
    degree: usize,
    #[arg(long = "K")]
    radius: Option<usize>,
    /// `geometric`, `optimized`, or comma-separated coefficients `a_0,...,a_K`.
    #[arg(long, default_value = "geometric")]
    schedule: String,
    /// Print only the leading-order correlation `-(2/sqrt D)(K-1)/K`.
    #[arg(long)]
    asymptotic: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum VariantName {
    Plain,
    Greedy,
    Threshold,
    Tanh,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, conflicts_with_all = ["graph_file", "config"])]
    n: Option<usize>,
    #[arg(long = "D", conflicts_with = "config")]
    degree: Option<usize>,
    #[arg(long, default_value_t = 3, conflicts_with = "config")]
    min_girth: usize,
    /// Reuse one graph for every trial instead of drawing a fresh one.
    #[arg(long, conflicts_with = "config")]
    fixed_graph: bool,
    #[arg(long, default_value = "geometric", conflicts_with = "config")]
    schedule: String,
    #[arg(long = "K", default_value_t = 3, conflicts_with = "config")]
    radius: usize,
    #[arg(long, value_enum, default_value = "plain", conflicts_with = "config")]
    variant: VariantName,
    /// Threshold offset for `--variant threshold`.
    #[arg(long, default_value_t = 0.0, conflicts_with = "config")]
    tau: f64,
    /// Rounds of `tanh(beta (x_u + a sum_v x_v))` for `--variant tanh`,
    /// with `a = -1/sqrt(D)`.
    #[arg(long, default_value_t = 2, conflicts_with = "config")]
    tanh_rounds: usize,
    #[arg(long, default_value_t = 1.0, conflicts_with = "config")]
    beta: f64,
    #[arg(long, default_value_t = 0.0, conflicts_with = "config")]
    epsilon: f64,
    #[arg(long, value_enum, default_value = "bernoulli", conflicts_with = "config")]
    mark_mode: MarkModeArg,
    #[arg(long, default_value_t = 10, conflicts_with = "config")]
    trials: usize,
    #[arg(long, default_value_t = 0, conflicts_with = "config")]
    seed: u64,
    #[arg(long, conflicts_with = "config")]
    graph_file: Option<PathBuf>,
    /// TOML or JSON config; a `summary.json` from an earlier run works too.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for `summary.json`, `trials.csv` and `meta.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    per_trial: bool,
    #[arg(long)]
    workers: Option<usize>,
    /// Write the final partition of trial `--dump-trial` to this file.
    #[arg(long)]
    dump_partition: Option<PathBuf>,
    #[arg(long)]
    dump_marks: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    dump_trial: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum MarkModeArg {
    Bernoulli,
    Exact,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run a single suite; default is all of them.
    #[arg(long)]
    suite: Option<String>,
    /// Check that an edge-list file loads.
    #[arg(long)]
    graph_file: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    config: PathBuf,
    /// Output directory; overrides `output` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: bool,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[arg(long = "D")]
    degree: usize,
    #[arg(long = "K")]
    radius: usize,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

fn parse_schedule(text: &str, radius: Option<usize>) -> Result<ScheduleSpec> {
    let need = |r: Option<usize>| r.ok_or_else(|| Error::invalid("--K is required for this schedule"));
    match text {
        "geometric" => Ok(ScheduleSpec::Geometric { radius: need(radius)? }),
        "optimized" => Ok(ScheduleSpec::Optimized { radius: need(radius)? }),
        list => {
            let coeffs = list
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::invalid(format!("bad schedule '{list}'")))?;
            Ok(ScheduleSpec::Explicit {
                coeffs: CoefficientSchedule::new(coeffs)?,
            })
        }
    }
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::invalid("--workers must be >= 1")),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::invalid(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn theory(a: &TheoryArgs, out: &mut dyn Write) -> Result<()> {
    if a.asymptotic {
        let r = a.radius.ok_or_else(|| Error::invalid("--asymptotic needs --K"))?;
        let rho = asymptotic_rho(a.degree, r)?;
        match a.format {
            Format::Table => writeln!(out, "{rho}"),
            Format::Json => writeln!(out, "{}", json!({"degree": a.degree, "radius": r, "asymptotic_rho": rho})),
        }
        .map_err(|e| Error::io("stdout", e))?;
        return Ok(());
    }
    let spec = parse_schedule(&a.schedule, a.radius)?;
    let radii: Vec<ScheduleSpec> = match &spec {
        ScheduleSpec::Geometric { radius } => (1..=*radius).map(|k| ScheduleSpec::Geometric { radius: k }).collect(),
        ScheduleSpec::Optimized { radius } => (1..=*radius).map(|k| ScheduleSpec::Optimized { radius: k }).collect(),
        other => vec![other.clone()],
    };
    let mut rows = Vec::new();
    for s in &radii {
        rows.push(prediction_row(a.degree, &s.resolve(a.degree)?)?);
    }
    let refs = reference_constants();
    let text = match a.format {
        Format::Json => format!("{:#}\n", json!({"rows": rows, "reference": refs})),
        Format::Table => {
            let mut t = format!(
                "{:>4} {:>3} {:>12} {:>12} {:>10} {:>8}\n",
                "D", "K", "exact_rho", "asym_rho", "cut", "C"
            );
            for r in &rows {
                let asym = r.asymptotic_rho.map_or("-".to_string(), |v| format!("{v:.6}"));
                t += &format!(
                    "{:>4} {:>3} {:>12.6} {:>12} {:>10.6} {:>8.4}\n",
                    r.degree, r.radius, r.exact_rho, asym, r.predicted_cut, r.predicted_c
                );
            }
            t += &format!("reference: 2/pi = {:.4}, Parisi = {:.3}\n", refs.two_over_pi, refs.parisi);
            t
        }
    };
    out.write_all(text.as_bytes()).map_err(|e| Error::io("stdout", e))
}

fn build_run_config(a: &RunArgs) -> Result<RunConfig> {
    if let Some(path) = &a.config {
        return RunConfig::load(path);
    }
    let graph = match (&a.graph_file, a.n, a.degree) {
        (Some(p), _, _) => GraphSpec::File { path: p.clone() },
        (None, Some(n), Some(degree)) => {
            let mut g = GraphSpec::random(n, degree, a.min_girth);
            if let GraphSpec::Random { fresh, .. } = &mut g {
                *fresh = !a.fixed_graph;
            }
            g
        }
        _ => return Err(Error::invalid("run needs --n and --D, --graph-file, or --config")),
    };
    let variant = match a.variant {
        VariantName::Plain => Variant::Plain,
        VariantName::Greedy => Variant::Greedy,
        VariantName::Threshold => Variant::Threshold { tau: a.tau },
        VariantName::Tanh => {
            let d = a
                .degree
                .ok_or_else(|| Error::invalid("--variant tanh needs --D"))? as f64;
            let round = TanhRound {
                c_self: 1.0,
                c_nbr: -1.0 / d.sqrt(),
                beta: a.beta,
            };
            Variant::Tanh {
                rounds: vec![round; a.tanh_rounds],
            }
        }
    };
    let mut cfg = RunConfig::new(graph, parse_schedule(&a.schedule, Some(a.radius))?, a.trials, a.seed);
    cfg.epsilon = a.epsilon;
    cfg.mark_mode = match a.mark_mode {
        MarkModeArg::Bernoulli => MarkMode::Bernoulli,
        MarkModeArg::Exact => MarkMode::Exact,
    };
    cfg.variant = variant;
    cfg.validate()?;
    Ok(cfg)
}

fn fmt_metric(mean: f64, se: Option<f64>) -> String {
    match se {
        Some(s) => format!("{mean:.6} +/- {s:.6}"),
        None => format!("{mean:.6}"),
    }
}

fn print_summary(r: &ExperimentReport, out: &mut dyn Write) -> std::io::Result<()> {
    let s = &r.summary;
    writeln!(out, "trials        {}", s.trials)?;
    writeln!(out, "cut fraction  {}", fmt_metric(s.cut_fraction.mean, s.cut_fraction.stderr))?;
    if let Some(p) = &r.prediction {
        writeln!(out, "predicted     {:.6} (tree rho {:.6})", p.cut_fraction, p.exact_rho)?;
    }
    writeln!(out, "C             {}", fmt_metric(s.scaled_c.mean, s.scaled_c.stderr))?;
    let refs = reference_constants();
    writeln!(out, "reference     2/pi = {:.4}, Parisi = {:.3}", refs.two_over_pi, refs.parisi)?;
    for (name, m) in [
        ("both unmarked", &s.both_unmarked),
        ("one marked   ", &s.one_marked),
        ("both marked  ", &s.both_marked),
    ] {
        if let Some(m) = m {
            writeln!(out, "{name} {}", fmt_metric(m.mean, m.stderr))?;
        }
    }
    writeln!(out, "flip rate     {:.6}", s.flip_rate.mean)?;
    writeln!(out, "tree-like     {:.4}", s.tree_like_fraction.mean)
}

fn run_cmd(a: &RunArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = build_run_config(a)?;
    let report = with_workers(a.workers, || run_experiment(&cfg))??;
    if let Some(dir) = &a.out {
        write_outputs(&report, dir, a.per_trial)?;
        write_metadata(dir, a.workers.unwrap_or_else(rayon::current_num_threads))?;
    }
    if a.dump_partition.is_some() || a.dump_marks.is_some() {
        let (_, marks, p) = with_workers(a.workers, || trial_artifacts(&cfg, a.dump_trial))??;
        if let Some(path) = &a.dump_partition {
            std::fs::write(path, p.to_line()).map_err(|e| Error::io(path, e))?;
        }
        if let Some(path) = &a.dump_marks {
            std::fs::write(path, marks.to_line()).map_err(|e| Error::io(path, e))?;
        }
    }
    print_summary(&report, out).map_err(|e| Error::io("stdout", e))
}

fn verify_cmd(a: &VerifyArgs, out: &mut dyn Write) -> Result<bool> {
    let io = |e| Error::io("stdout", e);
    let mut ok = true;
    if let Some(path) = &a.graph_file {
        match crate::graph::load_edge_list(path) {
            Ok(g) => writeln!(out, "graph-file: ok (n = {}, m = {}, girth {})", g.n(), g.edge_count(), g.girth()).map_err(io)?,
            Err(e) => {
                writeln!(out, "graph-file: FAILED: {e}").map_err(io)?;
                ok = false;
            }
        }
        if a.suite.is_none() {
            return Ok(ok);
        }
    }
    let names: Vec<&str> = match a.suite.as_deref() {
        None | Some("all") => SUITES.to_vec(),
        Some(s) => vec![s],
    };
    for name in names {
        let report = with_workers(a.workers, || run_suite(name))?
            .ok_or_else(|| Error::invalid(format!("unknown suite '{name}'; known: {}", SUITES.join(", "))))?;
        for c in report.checks.iter().filter(|c| !c.passed) {
            writeln!(out, "  FAILED {}: {}", c.name, c.detail).map_err(io)?;
        }
        writeln!(out, "{}: {} passed, {} failed", report.suite, report.passed(), report.failed()).map_err(io)?;
        ok &= report.failed() == 0;
    }
    Ok(ok)
}

fn sweep_cmd(a: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let spec = SweepSpec::load(&a.config)?;
    let dir = a
        .out
        .clone()
        .or_else(|| spec.output.clone())
        .unwrap_or_else(|| PathBuf::from("sweep_out"));
    let total = spec.cells().len();
    let mut done = 0;
    let report = with_workers(a.workers, || {
        grid_sweep_with(&spec, |k| {
            done += k;
            eprintln!("sweep: {done}/{total} cells");
        })
    })??;
    report.write(&dir, a.svg)?;
    let io = |e| Error::io("stdout", e);
    let failed = report.rows.iter().filter(|r| r.result.is_err()).count();
    writeln!(out, "{} cells ({failed} failed) written to {}", report.rows.len(), dir.display()).map_err(io)?;
    if let Some(b) = report.best {
        let row = &report.rows[b];
        if let Ok(r) = &row.result {
            writeln!(
                out,
                "best: D={} n={} epsilon={} C={}",
                row.cell.degree,
                row.cell.n,
                row.cell.epsilon,
                fmt_metric(r.c_mean, r.c_stderr)
            )
            .map_err(io)?;
        }
    }
    Ok(())
}

fn optimize_cmd(a: &OptimizeArgs, out: &mut dyn Write) -> Result<()> {
    let opt = optimize_schedule(a.degree, a.radius)?;
    let rho = exact_tree_correlation(a.degree, &opt.schedule, 1)?.rho;
    let cut = predicted_cut_fraction(rho)?;
    let c = scaled_constant(cut, a.degree);
    let text = match a.format {
        Format::Json => format!(
            "{:#}\n",
            json!({"degree": a.degree, "radius": a.radius, "schedule": opt.schedule,
                   "rho": rho, "geometric_rho": opt.initial_rho, "cut_fraction": cut, "scaled_c": c,
                   "sweeps": opt.sweeps})
        ),
        Format::Table => {
            let mut t = String::new();
            for (k, a) in opt.schedule.coeffs().iter().enumerate() {
                t += &format!("a_{k} = {a:.9}\n");
            }
            t += &format!("rho = {rho:.9} (geometric {:.9})\ncut = {cut:.9}\nC = {c:.6}\n", opt.initial_rho);
            t
        }
    };
    out.write_all(text.as_bytes()).map_err(|e| Error::io("stdout", e))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Theory(a) => theory(a, out).map(|_| EXIT_OK),
        Command::Run(a) => run_cmd(a, out).map(|_| EXIT_OK),
        Command::Verify(a) => verify_cmd(a, out).map(|ok| if ok { EXIT_OK } else { EXIT_VERIFY }),
        Command::Sweep(a) => sweep_cmd(a, out).map(|_| EXIT_OK),
        Command::OptimizeSchedule(a) => optimize_cmd(a, out).map(|_| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
