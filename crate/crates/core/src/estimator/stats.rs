use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::theory::scaled_constant;

/// Mean, standard error and 95% Student-t interval of per-trial values.
/// With a single value the error fields are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mean: f64,
    pub stderr: Option<f64>,
    pub trials: usize,
    pub ci95: Option<(f64, f64)>,
}

fn t_quantile(df: usize) -> f64 {
    StudentsT::new(0.0, 1.0, df as f64)
        .expect("df >= 1")
        .inverse_cdf(0.975)
}

impl MetricSummary {
    /// Summary in ascending input order. Returns `None` for empty input.
    pub fn from_values(values: &[f64]) -> Option<Self> {
        let t = values.len();
        if t == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / t as f64;
        if t == 1 {
            return Some(MetricSummary {
                mean,
                stderr: None,
                trials: 1,
                ci95: None,
            });
        }
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (t - 1) as f64;
        let se = (var / t as f64).sqrt();
        let h = t_quantile(t - 1) * se;
        Some(MetricSummary {
            mean,
            stderr: Some(se),
            trials: t,
            ci95: Some((mean - h, mean + h)),
        })
    }

    /// Image under the increasing affine map `x -> offset + scale * x`.
    pub fn affine(&self, offset: f64, scale: f64) -> Self {
        MetricSummary {
            mean: offset + scale * self.mean,
            stderr: self.stderr.map(|s| s * scale),
            trials: self.trials,
            ci95: self.ci95.map(|(lo, hi)| (offset + scale * lo, offset + scale * hi)),
        }
    }
}

/// `sqrt(se_a^2 + se_b^2)` when both errors exist.
pub fn pooled_stderr(a: &MetricSummary, b: &MetricSummary) -> Option<f64> {
    Some((a.stderr?.powi(2) + b.stderr?.powi(2)).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateSummary {
    pub trials: usize,
    pub degree: usize,
    pub cut_fraction: MetricSummary,
    pub edge_corr: MetricSummary,
    /// Class means over the trials in which the class is nonempty.
    pub both_unmarked: Option<MetricSummary>,
    pub one_marked: Option<MetricSummary>,
    pub both_marked: Option<MetricSummary>,
    pub flip_rate: MetricSummary,
    pub tree_like_fraction: MetricSummary,
    /// `C = (cut_fraction - 1/2) sqrt(D)` with the propagated error.
    pub scaled_c: MetricSummary,
}

impl EstimateSummary {
    pub fn from_trials(trials: &[super::TrialResult], degree: usize) -> Option<Self> {
        let col = |f: &dyn Fn(&super::TrialResult) -> Option<f64>| -> Option<MetricSummary> {
            let v: Vec<f64> = trials.iter().filter_map(f).collect();
            MetricSummary::from_values(&v)
        };
        let cut_fraction = col(&|t| Some(t.cut_fraction))?;
        let sqrt_d = (degree as f64).sqrt();
        let mut scaled_c = cut_fraction.affine(-0.5 * sqrt_d, sqrt_d);
        scaled_c.mean = scaled_constant(cut_fraction.mean, degree);
        Some(EstimateSummary {
            trials: trials.len(),
            degree,
            edge_corr: col(&|t| Some(t.edge_corr))?,
            both_unmarked: col(&|t| t.stratified.both_unmarked.mean),
            one_marked: col(&|t| t.stratified.one_marked.mean),
            both_marked: col(&|t| t.stratified.both_marked.mean),
            flip_rate: col(&|t| Some(t.flips as f64 / t.n as f64))?,
            tree_like_fraction: col(&|t| Some(t.tree_like_fraction))?,
            scaled_c,
            cut_fraction,
        })
    }
}
