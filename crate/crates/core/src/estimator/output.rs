use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::json;

use super::{ExperimentReport, MetricSummary, TrialResult};
use crate::error::{Error, Result};

const TRIAL_HEADER: &str = "trial,cut_fraction,edge_corr,both_unmarked_mean,both_unmarked_edges,\
one_marked_mean,one_marked_edges,both_marked_mean,both_marked_edges,marked,flips,tree_like_fraction";

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn trial_row(t: &TrialResult) -> String {
    let s = &t.stratified;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        t.trial,
        t.cut_fraction,
        t.edge_corr,
        opt(s.both_unmarked.mean),
        s.both_unmarked.edges,
        opt(s.one_marked.mean),
        s.one_marked.edges,
        opt(s.both_marked.mean),
        s.both_marked.edges,
        t.marked,
        t.flips,
        t.tree_like_fraction
    )
}

fn mean(m: &Option<MetricSummary>) -> String {
    opt(m.as_ref().map(|m| m.mean))
}

impl ExperimentReport {
    /// Pretty JSON with the resolved config embedded; stable bytes for a
    /// fixed config.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Per-trial rows (optional) followed by a summary row whose `trial`
    /// column reads `summary`. The row after it carries standard errors.
    pub fn to_csv(&self, per_trial: bool) -> String {
        let mut out = String::new();
        writeln!(out, "{TRIAL_HEADER},scaled_c").unwrap();
        if per_trial {
            for t in &self.trials {
                writeln!(out, "{},", trial_row(t)).unwrap();
            }
        }
        let s = &self.summary;
        let avg = |f: fn(&TrialResult) -> usize| {
            self.trials.iter().map(|t| f(t) as f64).sum::<f64>() / self.trials.len() as f64
        };
        writeln!(
            out,
            "summary,{},{},{},{},{},{},{},{},{},{},{},{}",
            s.cut_fraction.mean,
            s.edge_corr.mean,
            mean(&s.both_unmarked),
            avg(|t| t.stratified.both_unmarked.edges),
            mean(&s.one_marked),
            avg(|t| t.stratified.one_marked.edges),
            mean(&s.both_marked),
            avg(|t| t.stratified.both_marked.edges),
            avg(|t| t.marked),
            avg(|t| t.flips),
            s.tree_like_fraction.mean,
            s.scaled_c.mean
        )
        .unwrap();
        let se = |m: &MetricSummary| opt(m.stderr);
        let se_opt = |m: &Option<MetricSummary>| opt(m.as_ref().and_then(|m| m.stderr));
        writeln!(
            out,
            "stderr,{},{},{},,{},,{},,,,{},{}",
            se(&s.cut_fraction),
            se(&s.edge_corr),
            se_opt(&s.both_unmarked),
            se_opt(&s.one_marked),
            se_opt(&s.both_marked),
            se(&s.tree_like_fraction),
            se(&s.scaled_c)
        )
        .unwrap();
        out
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `summary.json` and `trials.csv` into `dir`, creating it if needed.
pub fn write_outputs(report: &ExperimentReport, dir: &Path, per_trial: bool) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write(&dir.join("summary.json"), &report.to_json())?;
    write(&dir.join("trials.csv"), &report.to_csv(per_trial))
}

/// Run metadata that is allowed to vary between identical runs.
pub fn write_metadata(dir: &Path, workers: usize) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let now = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = json!({
        "created_unix": now,
        "workers": workers,
        "version": env!("CARGO_PKG_VERSION"),
    });
    write(&dir.join("meta.json"), &format!("{meta:#}\n"))
}
