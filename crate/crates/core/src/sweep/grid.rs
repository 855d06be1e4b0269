use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{run_group, ExperimentReport, GraphSpec, RunConfig, ScheduleSpec, Variant};
use crate::filter::{CoefficientSchedule, DEFAULT_MAX_RADIUS};
use crate::rounding::MarkMode;
use crate::theory::{PARISI, TWO_OVER_PI};

use super::optimize::{fit_quadratic_optimum, EpsilonFit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Geometric,
    Optimized,
}

fn default_families() -> Vec<Family> {
    vec![Family::Geometric]
}

fn default_girth() -> usize {
    3
}

fn default_variant() -> Variant {
    Variant::Greedy
}

fn default_budget() -> f64 {
    1e13
}

fn default_attempts() -> usize {
    100
}

/// Grid of experiments. Cells are the product
/// `degrees x n x (families x radii + explicit) x epsilons`, in that
/// nesting order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub degrees: Vec<usize>,
    pub n: Vec<usize>,
    #[serde(default)]
    pub radii: Vec<usize>,
    #[serde(default = "default_families")]
    pub families: Vec<Family>,
    /// Fixed schedules added to every `(D, n)` block.
    #[serde(default)]
    pub explicit: Vec<CoefficientSchedule>,
    pub epsilons: Vec<f64>,
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_girth")]
    pub min_girth: usize,
    #[serde(default = "default_variant")]
    pub variant: Variant,
    #[serde(default)]
    pub mark_mode: MarkMode,
    #[serde(default = "default_attempts")]
    pub max_attempts: usize,
    /// Cap on `sum over cells of n * D^K * trials`.
    #[serde(default = "default_budget")]
    pub budget: f64,
    /// Output directory used by the command-line front end.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub degree: usize,
    pub n: usize,
    pub schedule: ScheduleSpec,
    pub epsilon: f64,
}

impl SweepSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let spec: SweepSpec = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.degrees.is_empty() || self.n.is_empty() || self.epsilons.is_empty() {
            return Err(Error::invalid("degrees, n and epsilons must be nonempty"));
        }
        if self.explicit.is_empty() && (self.radii.is_empty() || self.families.is_empty()) {
            return Err(Error::invalid("need radii and families, or explicit schedules"));
        }
        if self.trials < 1 {
            return Err(Error::invalid("trials must be >= 1"));
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(0.0..=1.0).contains(*e)) {
            return Err(Error::invalid(format!("epsilon {e} outside [0, 1]")));
        }
        if !(self.budget > 0.0) {
            return Err(Error::invalid("budget must be positive"));
        }
        Ok(())
    }

    fn schedules(&self) -> Vec<ScheduleSpec> {
        let mut out = Vec::new();
        for f in &self.families {
            for &radius in &self.radii {
                out.push(match f {
                    Family::Geometric => ScheduleSpec::Geometric { radius },
                    Family::Optimized => ScheduleSpec::Optimized { radius },
                });
            }
        }
        out.extend(self.explicit.iter().map(|c| ScheduleSpec::Explicit { coeffs: c.clone() }));
        out
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &degree in &self.degrees {
            for &n in &self.n {
                for schedule in self.schedules() {
                    for &epsilon in &self.epsilons {
                        out.push(Cell {
                            degree,
                            n,
                            schedule: schedule.clone(),
                            epsilon,
                        });
                    }
                }
            }
        }
        out
    }

    /// `sum over cells of n * D^K * trials`.
    pub fn estimated_work(&self) -> f64 {
        self.cells()
            .iter()
            .map(|c| c.n as f64 * (c.degree as f64).powi(c.schedule.radius() as i32) * self.trials as f64)
            .sum()
    }

    pub fn config(&self, cell: &Cell) -> RunConfig {
        RunConfig {
            graph: GraphSpec::Random {
                n: cell.n,
                degree: cell.degree,
                min_girth: self.min_girth,
                fresh: true,
                max_attempts: self.max_attempts,
            },
            schedule: cell.schedule.clone(),
            epsilon: cell.epsilon,
            mark_mode: self.mark_mode,
            variant: self.variant.clone(),
            trials: self.trials,
            master_seed: self.master_seed,
            max_radius: DEFAULT_MAX_RADIUS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub cell: Cell,
    pub result: std::result::Result<CellResult, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub c_mean: f64,
    pub c_stderr: Option<f64>,
    pub cut_fraction: f64,
    pub cut_stderr: Option<f64>,
    pub predicted_cut: Option<f64>,
    pub flip_rate: f64,
    pub both_unmarked: Option<f64>,
    pub one_marked: Option<f64>,
    pub both_marked: Option<f64>,
    pub tree_like_fraction: f64,
}

impl CellResult {
    fn from_report(r: &ExperimentReport) -> Self {
        let s = &r.summary;
        CellResult {
            c_mean: s.scaled_c.mean,
            c_stderr: s.scaled_c.stderr,
            cut_fraction: s.cut_fraction.mean,
            cut_stderr: s.cut_fraction.stderr,
            predicted_cut: r.prediction.as_ref().map(|p| p.cut_fraction),
            flip_rate: s.flip_rate.mean,
            both_unmarked: s.both_unmarked.as_ref().map(|m| m.mean),
            one_marked: s.one_marked.as_ref().map(|m| m.mean),
            both_marked: s.both_marked.as_ref().map(|m| m.mean),
            tree_like_fraction: s.tree_like_fraction.mean,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
    /// Row index with the largest `c_mean` among successful cells.
    pub best: Option<usize>,
}

/// Runs every cell. Cells that share graph, schedule and seeds are run
/// together so their linear stage is computed once per trial. A failing
/// cell is recorded in its row and does not stop the sweep.
pub fn grid_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    grid_sweep_with(spec, |_| {})
}

/// [`grid_sweep`] with a callback invoked after each group of cells.
pub fn grid_sweep_with(spec: &SweepSpec, mut progress: impl FnMut(usize)) -> Result<SweepReport> {
    spec.validate()?;
    let work = spec.estimated_work();
    if work > spec.budget {
        return Err(Error::Budget {
            work,
            budget: spec.budget,
        });
    }
    let cells = spec.cells();
    let cfgs: Vec<RunConfig> = cells.iter().map(|c| spec.config(c)).collect();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut leader: Vec<(String, usize)> = Vec::new();
    for (i, c) in cfgs.iter().enumerate() {
        let key = c.linear_key();
        let head = match leader.iter().find(|(k, _)| *k == key) {
            Some(&(_, h)) => h,
            None => {
                leader.push((key, i));
                i
            }
        };
        groups.entry(head).or_default().push(i);
    }
    let mut results: Vec<Option<std::result::Result<CellResult, String>>> = vec![None; cells.len()];
    for members in groups.values() {
        let group: Vec<RunConfig> = members.iter().map(|&i| cfgs[i].clone()).collect();
        match run_group(&group) {
            Ok(reports) => {
                for (&i, r) in members.iter().zip(reports) {
                    results[i] = Some(r.map(|r| CellResult::from_report(&r)).map_err(|e| e.to_string()));
                }
            }
            Err(e) => {
                for &i in members {
                    results[i] = Some(Err(e.to_string()));
                }
            }
        }
        progress(members.len());
    }
    let rows: Vec<SweepRow> = cells
        .into_iter()
        .zip(results)
        .map(|(cell, r)| SweepRow {
            cell,
            result: r.expect("every cell belongs to a group"),
        })
        .collect();
    let mut best: Option<usize> = None;
    for (i, row) in rows.iter().enumerate() {
        if let Ok(r) = &row.result {
            if best.is_none_or(|b| rows[b].result.as_ref().is_ok_and(|br| r.c_mean > br.c_mean)) {
                best = Some(i);
            }
        }
    }
    Ok(SweepReport {
        spec: spec.clone(),
        rows,
        best,
    })
}

fn schedule_label(s: &ScheduleSpec) -> String {
    match s {
        ScheduleSpec::Geometric { radius } => format!("geometric:{radius}"),
        ScheduleSpec::Optimized { radius } => format!("optimized:{radius}"),
        ScheduleSpec::Explicit { coeffs } => {
            let parts: Vec<String> = coeffs.coeffs().iter().map(|a| a.to_string()).collect();
            format!("explicit:{}", parts.join(" "))
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

impl SweepReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "degree,n,schedule,epsilon,c_mean,c_stderr,cut_fraction,cut_stderr,predicted_cut,\
flip_rate,both_unmarked,one_marked,both_marked,tree_like_fraction,best,error\n",
        );
        for (i, row) in self.rows.iter().enumerate() {
            let c = &row.cell;
            let head = format!("{},{},{},{}", c.degree, c.n, schedule_label(&c.schedule), c.epsilon);
            let best = self.best == Some(i);
            match &row.result {
                Ok(r) => writeln!(
                    out,
                    "{head},{},{},{},{},{},{},{},{},{},{},{best},",
                    r.c_mean,
                    opt(r.c_stderr),
                    r.cut_fraction,
                    opt(r.cut_stderr),
                    opt(r.predicted_cut),
                    r.flip_rate,
                    opt(r.both_unmarked),
                    opt(r.one_marked),
                    opt(r.both_marked),
                    r.tree_like_fraction
                ),
                Err(e) => writeln!(out, "{head},,,,,,,,,,,{best},\"{}\"", e.replace('"', "'")),
            }
            .unwrap();
        }
        out
    }

    /// Epsilon against C with error bars, one series per `(D, n, schedule)`
    /// block, and dashed reference lines at `2/pi` and the Parisi value.
    pub fn to_svg(&self) -> String {
        let (w, h, pad) = (640.0, 420.0, 50.0);
        let mut series: Vec<(String, Vec<(f64, f64, f64)>)> = Vec::new();
        for row in &self.rows {
            let Ok(r) = &row.result else { continue };
            let c = &row.cell;
            let label = format!("D={} n={} {}", c.degree, c.n, schedule_label(&c.schedule));
            let point = (c.epsilon, r.c_mean, r.c_stderr.unwrap_or(0.0));
            match series.iter_mut().find(|(l, _)| *l == label) {
                Some((_, pts)) => pts.push(point),
                None => series.push((label, vec![point])),
            }
        }
        let pts = series.iter().flat_map(|(_, p)| p.iter());
        let (mut ymin, mut ymax) = (TWO_OVER_PI.min(PARISI), TWO_OVER_PI.max(PARISI));
        let mut xmax: f64 = 0.0;
        for &(x, y, e) in pts {
            ymin = ymin.min(y - e);
            ymax = ymax.max(y + e);
            xmax = xmax.max(x);
        }
        if xmax == 0.0 {
            xmax = 1.0;
        }
        let margin = 0.05 * (ymax - ymin).max(1e-3);
        let (ymin, ymax) = (ymin - margin, ymax + margin);
        let sx = |x: f64| pad + x / xmax * (w - 2.0 * pad);
        let sy = |y: f64| h - pad - (y - ymin) / (ymax - ymin) * (h - 2.0 * pad);
        let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
        let mut s = String::new();
        writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="11">"#).unwrap();
        writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
        writeln!(
            s,
            r#"<line x1="{pad}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/><line x1="{pad}" y1="{pad}" x2="{pad}" y2="{0}" stroke="black"/>"#,
            h - pad,
            w - pad
        )
        .unwrap();
        writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">epsilon</text>"#, w / 2.0, h - 12.0).unwrap();
        writeln!(s, r#"<text x="14" y="{}" transform="rotate(-90 14 {})" text-anchor="middle">C</text>"#, h / 2.0, h / 2.0).unwrap();
        for frac in [0.0, 0.5, 1.0] {
            let x = frac * xmax;
            let y = ymin + frac * (ymax - ymin);
            writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">{x:.3}</text>"#, sx(x), h - pad + 14.0).unwrap();
            writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">{y:.3}</text>"#, pad - 4.0, sy(y) + 4.0).unwrap();
        }
        for (name, value) in [("2/pi", TWO_OVER_PI), ("Parisi", PARISI)] {
            let y = sy(value);
            writeln!(
                s,
                r##"<line x1="{pad}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="#888" stroke-dasharray="5,4"/><text x="{}" y="{:.1}" fill="#555">{name}</text>"##,
                w - pad,
                w - pad - 40.0,
                y - 3.0
            )
            .unwrap();
        }
        for (k, (label, pts)) in series.iter().enumerate() {
            let col = colors[k % colors.len()];
            let path: Vec<String> = pts.iter().map(|&(x, y, _)| format!("{:.1},{:.1}", sx(x), sy(y))).collect();
            writeln!(s, r#"<polyline fill="none" stroke="{col}" points="{}"/>"#, path.join(" ")).unwrap();
            for &(x, y, e) in pts {
                writeln!(
                    s,
                    r#"<line x1="{0:.1}" y1="{1:.1}" x2="{0:.1}" y2="{2:.1}" stroke="{col}"/><circle cx="{0:.1}" cy="{3:.1}" r="3" fill="{col}"/>"#,
                    sx(x),
                    sy(y - e),
                    sy(y + e),
                    sy(y)
                )
                .unwrap();
            }
            writeln!(s, r#"<text x="{}" y="{}" fill="{col}">{label}</text>"#, pad + 10.0, pad + 14.0 * (k as f64 + 1.0)).unwrap();
        }
        s.push_str("</svg>\n");
        s
    }

    /// Writes `sweep.csv`, `sweep.json` and optionally `sweep.svg` into `dir`.
    pub fn write(&self, dir: &Path, svg: bool) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let put = |name: &str, text: String| {
            let p = dir.join(name);
            std::fs::write(&p, text).map_err(|e| Error::io(p, e))
        };
        put("sweep.csv", self.to_csv())?;
        put("sweep.json", self.to_json())?;
        if svg {
            put("sweep.svg", self.to_svg())?;
        }
        Ok(())
    }
}

/// Measures C over an epsilon grid with the greedy variant and the
/// geometric schedule, then fits a quadratic to locate the best epsilon.
pub fn optimize_epsilon(
    degree: usize,
    radius: usize,
    n: usize,
    trials: usize,
    eps_grid: &[f64],
    master_seed: u64,
) -> Result<(EpsilonFit, SweepReport)> {
    if eps_grid.len() < 3 || !eps_grid.contains(&0.0) {
        return Err(Error::invalid("epsilon grid needs at least 3 points including 0"));
    }
    let spec = SweepSpec {
        degrees: vec![degree],
        n: vec![n],
        radii: vec![radius],
        families: vec![Family::Geometric],
        explicit: Vec::new(),
        epsilons: eps_grid.to_vec(),
        trials,
        master_seed,
        min_girth: default_girth(),
        variant: Variant::Greedy,
        mark_mode: MarkMode::default(),
        max_attempts: default_attempts(),
        budget: f64::INFINITY,
        output: None,
    };
    let report = grid_sweep(&spec)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for row in &report.rows {
        match &row.result {
            Ok(r) => {
                xs.push(row.cell.epsilon);
                ys.push(r.c_mean);
            }
            Err(e) => return Err(Error::invalid(format!("cell epsilon={} failed: {e}", row.cell.epsilon))),
        }
    }
    Ok((fit_quadratic_optimum(&xs, &ys)?, report))
}
