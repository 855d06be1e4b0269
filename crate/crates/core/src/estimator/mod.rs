//! The assembled pipeline and its Monte Carlo statistics.
//!
//! A trial draws a graph (or reuses a fixed one), a Gaussian field, applies
//! the shell filter, rounds to signs, marks vertices and optionally flips
//! marked vertices. Every random choice is derived from
//! `(master_seed, trial)`, so trials can run in any order on any number of
//! threads.

mod config;
mod output;
mod stats;

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{GraphSpec, RunConfig, ScheduleSpec, Variant};
pub use output::{write_metadata, write_outputs};
pub use stats::{pooled_stderr, EstimateSummary, MetricSummary};

use crate::error::{Error, Result};
use crate::filter::{init_gaussian, multi_shell_update_capped, tanh_dynamics, CoefficientSchedule};
use crate::graph::{Graph, Vertex};
use crate::rng::{derive_seed, Stream};
use crate::rounding::{greedy_flip, mark_vertices, round_signs, threshold_flip, MarkSet, Partition};
use crate::theory::{exact_tree_correlation, predicted_cut_fraction};

/// Vertices sampled per trial for the local tree-likeness report.
const TREE_LIKE_SAMPLES: usize = 32;

fn check_partition(g: &Graph, p: &Partition) -> Result<()> {
    if p.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            actual: p.len(),
        });
    }
    Ok(())
}

fn cut_count(g: &Graph, p: &Partition) -> usize {
    let parts = p.parts();
    g.edges()
        .filter(|&(u, v)| parts[u as usize] != parts[v as usize])
        .count()
}

fn product_sum(g: &Graph, p: &Partition) -> i64 {
    let parts = p.parts();
    g.edges()
        .map(|(u, v)| (parts[u as usize] * parts[v as usize]) as i64)
        .sum()
}

/// Fraction of edges whose endpoints lie in different parts.
pub fn cut_fraction(g: &Graph, p: &Partition) -> Result<f64> {
    check_partition(g, p)?;
    Ok(cut_count(g, p) as f64 / g.edge_count().max(1) as f64)
}

/// Mean of `p_u p_v` over edges.
pub fn edge_correlation(g: &Graph, p: &Partition) -> Result<f64> {
    check_partition(g, p)?;
    Ok(product_sum(g, p) as f64 / g.edge_count().max(1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClassStat {
    pub edges: usize,
    pub sum: i64,
    /// `None` for an empty class.
    pub mean: Option<f64>,
}

/// Edge statistics split by how many endpoints are marked.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Stratified {
    pub both_unmarked: ClassStat,
    pub one_marked: ClassStat,
    pub both_marked: ClassStat,
}

pub fn stratified_edge_stats(g: &Graph, p: &Partition, marks: &MarkSet) -> Result<Stratified> {
    check_partition(g, p)?;
    if marks.len() > g.n() || marks.ids().last().is_some_and(|&v| v as usize >= g.n()) {
        return Err(Error::invalid("mark set does not match graph"));
    }
    let parts = p.parts();
    let mut acc = [(0usize, 0i64); 3];
    for (u, v) in g.edges() {
        let class = marks.is_marked(u) as usize + marks.is_marked(v) as usize;
        acc[class].0 += 1;
        acc[class].1 += (parts[u as usize] * parts[v as usize]) as i64;
    }
    let stat = |(edges, sum): (usize, i64)| ClassStat {
        edges,
        sum,
        mean: (edges > 0).then(|| sum as f64 / edges as f64),
    };
    Ok(Stratified {
        both_unmarked: stat(acc[0]),
        one_marked: stat(acc[1]),
        both_marked: stat(acc[2]),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: u64,
    pub n: usize,
    pub edges: usize,
    pub cut_edges: usize,
    pub cut_fraction: f64,
    pub edge_corr: f64,
    pub stratified: Stratified,
    pub marked: usize,
    /// Marked vertices whose part changed.
    pub flips: usize,
    /// Share of sampled vertices whose filter ball is an exact tree.
    pub tree_like_fraction: f64,
}

/// Rounded linear-stage output of one trial, reusable by every config with
/// the same [`RunConfig::linear_key`].
#[derive(Debug, Clone)]
pub struct LinearStage {
    pub trial: u64,
    pub graph: Arc<Graph>,
    pub rounded: Partition,
    pub tree_like_fraction: f64,
}

fn tree_like_fraction(g: &Graph, radius: usize) -> f64 {
    let n = g.n();
    let k = TREE_LIKE_SAMPLES.min(n);
    if k == 0 {
        return 0.0;
    }
    let hits = (0..k)
        .filter(|&i| {
            let u = (i * n / k) as Vertex;
            g.is_locally_tree_like(u, radius).unwrap_or(false)
        })
        .count();
    hits as f64 / k as f64
}

/// Graph degree for the scaled constant and the schedule.
pub fn graph_degree(g: &Graph) -> Result<usize> {
    if let Some(d) = g.degree_hint() {
        return Ok(d);
    }
    match g.degree_histogram().as_slice() {
        [(d, _)] => Ok(*d),
        _ => Err(Error::invalid("graph is not regular; its degree is undefined")),
    }
}

pub fn linear_stage(
    graph: Arc<Graph>,
    cfg: &RunConfig,
    schedule: &CoefficientSchedule,
    trial: u64,
) -> Result<LinearStage> {
    let g = graph.as_ref();
    let x = init_gaussian(g.n(), derive_seed(cfg.master_seed, Stream::Field, trial));
    let (y, radius) = match &cfg.variant {
        Variant::Tanh { rounds } => (tanh_dynamics(g, &x, rounds)?, rounds.len()),
        _ => (multi_shell_update_capped(g, &x, schedule, cfg.max_radius)?, schedule.radius()),
    };
    Ok(LinearStage {
        trial,
        tree_like_fraction: tree_like_fraction(g, radius),
        rounded: round_signs(&y),
        graph,
    })
}

/// Marks and the final partition on top of a linear stage.
pub fn apply_marks(stage: &LinearStage, cfg: &RunConfig) -> Result<(MarkSet, Partition)> {
    let g = stage.graph.as_ref();
    let marks = mark_vertices(
        g.n(),
        cfg.epsilon,
        derive_seed(cfg.master_seed, Stream::Marks, stage.trial),
        cfg.mark_mode,
    )?;
    let rounded = &stage.rounded;
    let p = match &cfg.variant {
        Variant::Greedy => greedy_flip(g, rounded, &marks)?,
        Variant::Threshold { tau } => threshold_flip(g, rounded, &marks, *tau)?,
        Variant::Plain | Variant::Tanh { .. } => rounded.clone(),
    };
    Ok((marks, p))
}

/// Marks, optional flips and metrics on top of a linear stage.
pub fn finish_trial(stage: &LinearStage, cfg: &RunConfig) -> Result<TrialResult> {
    let g = stage.graph.as_ref();
    let trial = stage.trial;
    let rounded = &stage.rounded;
    let (marks, final_p) = apply_marks(stage, cfg)?;
    let flips = marks
        .ids()
        .iter()
        .filter(|&&v| final_p[v as usize] != rounded[v as usize])
        .count();
    let m = g.edge_count();
    let cut = cut_count(g, &final_p);
    let products = product_sum(g, &final_p);
    assert_eq!(products, m as i64 - 2 * cut as i64, "edge correlation identity");
    let cut_fraction = cut_fraction(g, &final_p)?;
    let edge_corr = edge_correlation(g, &final_p)?;
    assert!(
        (edge_corr - (1.0 - 2.0 * cut_fraction)).abs() <= 4.0 * f64::EPSILON,
        "edge correlation identity"
    );
    let stratified = stratified_edge_stats(g, &final_p, &marks)?;
    assert_eq!(
        stratified.both_unmarked.edges + stratified.one_marked.edges + stratified.both_marked.edges,
        m
    );
    Ok(TrialResult {
        trial,
        n: g.n(),
        edges: m,
        cut_edges: cut,
        cut_fraction,
        edge_corr,
        stratified,
        marked: marks.len(),
        flips,
        tree_like_fraction: stage.tree_like_fraction,
    })
}

/// One full trial on a given graph.
pub fn run_trial(g: &Graph, cfg: &RunConfig, trial_index: u64) -> Result<TrialResult> {
    cfg.validate()?;
    let degree = graph_degree(g)?;
    let schedule = cfg.schedule.resolve(degree)?;
    let stage = linear_stage(Arc::new(g.clone()), cfg, &schedule, trial_index)?;
    finish_trial(&stage, cfg)
}

/// Graph, marks and final partition of one trial of `cfg`.
pub fn trial_artifacts(cfg: &RunConfig, trial: u64) -> Result<(Arc<Graph>, MarkSet, Partition)> {
    cfg.validate()?;
    let graph = Arc::new(cfg.graph.build(cfg.master_seed, trial)?);
    let schedule = cfg.schedule.resolve(graph_degree(&graph)?)?;
    let stage = linear_stage(graph.clone(), cfg, &schedule, trial)?;
    let (marks, p) = apply_marks(&stage, cfg)?;
    Ok((graph, marks, p))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub exact_rho: f64,
    pub cut_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: RunConfig,
    pub degree: usize,
    pub schedule: CoefficientSchedule,
    /// Tree prediction for the rounded linear stage; absent for `tanh`.
    pub prediction: Option<Prediction>,
    pub summary: EstimateSummary,
    pub trials: Vec<TrialResult>,
}

fn spec_degree(spec: &GraphSpec, fixed: Option<&Graph>) -> Result<usize> {
    match (spec, fixed) {
        (GraphSpec::Random { degree, .. }, _) => Ok(*degree),
        (_, Some(g)) => graph_degree(g),
        (_, None) => unreachable!("file graphs are loaded up front"),
    }
}

/// Runs several configs that share one linear stage per trial.
///
/// All configs must agree on [`RunConfig::linear_key`] and `trials`. The
/// outer error covers failures common to the group; per-config failures
/// are returned in place.
pub fn run_group(cfgs: &[RunConfig]) -> Result<Vec<Result<ExperimentReport>>> {
    let Some(first) = cfgs.first() else {
        return Ok(Vec::new());
    };
    for c in cfgs {
        c.validate()?;
        if c.linear_key() != first.linear_key() || c.trials != first.trials {
            return Err(Error::invalid("grouped configs must share the linear stage and trial count"));
        }
    }
    let fixed = if first.graph.is_fixed() {
        Some(Arc::new(first.graph.build(first.master_seed, 0)?))
    } else {
        None
    };
    let degree = spec_degree(&first.graph, fixed.as_deref())?;
    let schedule = first.schedule.resolve(degree)?;
    let per_trial: Vec<Result<Vec<Result<TrialResult>>>> = (0..first.trials as u64)
        .into_par_iter()
        .map(|t| {
            let graph = match &fixed {
                Some(g) => g.clone(),
                None => Arc::new(first.graph.build(first.master_seed, t)?),
            };
            let stage = linear_stage(graph, first, &schedule, t)?;
            Ok(cfgs.iter().map(|c| finish_trial(&stage, c)).collect())
        })
        .collect();
    let mut rows: Vec<Vec<Result<TrialResult>>> = Vec::with_capacity(per_trial.len());
    for r in per_trial {
        rows.push(r?);
    }
    let mut columns: Vec<Vec<Result<TrialResult>>> = cfgs.iter().map(|_| Vec::new()).collect();
    for row in rows {
        for (col, r) in columns.iter_mut().zip(row) {
            col.push(r);
        }
    }
    let prediction = match first.variant {
        Variant::Tanh { .. } => None,
        _ => {
            let rho = exact_tree_correlation(degree, &schedule, 1)?.rho;
            Some(Prediction {
                exact_rho: rho,
                cut_fraction: predicted_cut_fraction(rho)?,
            })
        }
    };
    Ok(cfgs
        .iter()
        .zip(columns)
        .map(|(cfg, col)| {
            let trials = col.into_iter().collect::<Result<Vec<_>>>()?;
            let summary = EstimateSummary::from_trials(&trials, degree)
                .ok_or_else(|| Error::invalid("no trials"))?;
            Ok(ExperimentReport {
                config: cfg.clone(),
                degree,
                schedule: schedule.clone(),
                prediction: prediction.clone(),
                summary,
                trials,
            })
        })
        .collect())
}

/// Runs `cfg.trials` trials and aggregates them in ascending trial order.
pub fn run_experiment(cfg: &RunConfig) -> Result<ExperimentReport> {
    run_group(std::slice::from_ref(cfg))?
        .pop()
        .expect("one config in, one report out")
}
