use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::{CoefficientSchedule, TanhRound, DEFAULT_MAX_RADIUS};
use crate::graph::{generate_regular, load_edge_list, Graph};
use crate::rng::{derive_seed, Stream};
use crate::rounding::MarkMode;
use crate::sweep::optimize_schedule;

fn yes() -> bool {
    true
}

fn default_attempts() -> usize {
    100
}

fn default_max_radius() -> usize {
    DEFAULT_MAX_RADIUS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    /// Random `degree`-regular graph with girth at least `min_girth`. With
    /// `fresh = true` every trial draws its own graph.
    Random {
        n: usize,
        degree: usize,
        min_girth: usize,
        #[serde(default = "yes")]
        fresh: bool,
        #[serde(default = "default_attempts")]
        max_attempts: usize,
    },
    /// Fixed graph read from an edge-list file.
    File { path: PathBuf },
}

impl GraphSpec {
    pub fn random(n: usize, degree: usize, min_girth: usize) -> Self {
        GraphSpec::Random {
            n,
            degree,
            min_girth,
            fresh: true,
            max_attempts: default_attempts(),
        }
    }

    /// Graph used by `trial`. File graphs ignore the trial index.
    pub fn build(&self, master_seed: u64, trial: u64) -> Result<Graph> {
        match *self {
            GraphSpec::Random {
                n,
                degree,
                min_girth,
                fresh,
                max_attempts,
            } => {
                let index = if fresh { trial } else { 0 };
                let seed = derive_seed(master_seed, Stream::Graph, index);
                generate_regular(n, degree, seed, min_girth, max_attempts)
            }
            GraphSpec::File { ref path } => load_edge_list(path),
        }
    }

    /// Whether every trial sees the same graph.
    pub fn is_fixed(&self) -> bool {
        !matches!(self, GraphSpec::Random { fresh: true, .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleSpec {
    Geometric { radius: usize },
    Explicit { coeffs: CoefficientSchedule },
    /// Coordinate-descent optimum of the exact tree correlation.
    Optimized { radius: usize },
}

impl ScheduleSpec {
    pub fn resolve(&self, degree: usize) -> Result<CoefficientSchedule> {
        match self {
            ScheduleSpec::Geometric { radius } => CoefficientSchedule::geometric(degree, *radius),
            ScheduleSpec::Explicit { coeffs } => Ok(coeffs.clone()),
            ScheduleSpec::Optimized { radius } => Ok(optimize_schedule(degree, *radius)?.schedule),
        }
    }

    pub fn radius(&self) -> usize {
        match self {
            ScheduleSpec::Geometric { radius } | ScheduleSpec::Optimized { radius } => *radius,
            ScheduleSpec::Explicit { coeffs } => coeffs.radius(),
        }
    }
}

/// What happens after sign rounding.
///
/// `Tanh` replaces the linear filter by the smoothed dynamics and rounds
/// the result; marks are still drawn so the stratified statistics exist,
/// but nothing is flipped.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Variant {
    #[default]
    Plain,
    Greedy,
    Threshold {
        tau: f64,
    },
    Tanh {
        rounds: Vec<TanhRound>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub graph: GraphSpec,
    pub schedule: ScheduleSpec,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default)]
    pub mark_mode: MarkMode,
    #[serde(default)]
    pub variant: Variant,
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_max_radius")]
    pub max_radius: usize,
}

impl RunConfig {
    pub fn new(graph: GraphSpec, schedule: ScheduleSpec, trials: usize, master_seed: u64) -> Self {
        RunConfig {
            graph,
            schedule,
            epsilon: 0.0,
            mark_mode: MarkMode::default(),
            variant: Variant::Plain,
            trials,
            master_seed,
            max_radius: DEFAULT_MAX_RADIUS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::invalid("trials must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::invalid(format!("epsilon must lie in [0, 1], got {}", self.epsilon)));
        }
        let radius = self.schedule.radius();
        if radius > self.max_radius {
            return Err(Error::RadiusCap {
                radius,
                cap: self.max_radius,
            });
        }
        if let Variant::Threshold { tau } = self.variant {
            if tau.is_nan() {
                return Err(Error::invalid("tau must not be NaN"));
            }
        }
        if let Variant::Tanh { rounds } = &self.variant {
            if rounds.is_empty() {
                return Err(Error::invalid("tanh variant needs at least one round"));
            }
        }
        Ok(())
    }

    /// Reads a config from TOML or JSON. A JSON summary written by a
    /// previous run is accepted too; its embedded `config` is used.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path.extension().and_then(|e| e.to_str()) == Some("json"))
    }

    pub fn parse(text: &str, json: bool) -> Result<Self> {
        let cfg: RunConfig = if json {
            let value: serde_json::Value = serde_json::from_str(text)?;
            match value.get("config") {
                Some(inner) => serde_json::from_value(inner.clone())?,
                None => serde_json::from_value(value)?,
            }
        } else {
            toml::from_str(text)?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Settings that determine the rounded linear-stage partition. Configs
    /// with equal keys share graph, field and rounding in every trial.
    pub fn linear_key(&self) -> String {
        let tanh = match &self.variant {
            Variant::Tanh { rounds } => Some(rounds),
            _ => None,
        };
        serde_json::to_string(&(&self.graph, &self.schedule, tanh, self.master_seed, self.max_radius))
            .expect("config serializes")
    }
}
