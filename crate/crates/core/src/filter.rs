//! Gaussian initialization and the linear shell filter.
//!
//! The filter maps a field `x` to `x'_u = sum_k a_k * sum_{dist(u,v)=k} x_v`.
//! Every output reads only the input field, so the update is simultaneous
//! and per-vertex work can run on any number of threads with bitwise
//! identical results.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{lane_sum, BallWalker, Graph, Vertex};
use crate::rng::normal_at;

/// Largest filter radius accepted by default.
pub const DEFAULT_MAX_RADIUS: usize = 6;

/// Coefficients `a_0..=a_K` applied to the shell sums at distance `0..=K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CoefficientSchedule {
    coeffs: Vec<f64>,
}

impl CoefficientSchedule {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("schedule needs at least a_0"));
        }
        if coeffs.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("schedule coefficients must be finite"));
        }
        if coeffs.iter().all(|&a| a == 0.0) {
            return Err(Error::invalid("schedule must have a nonzero coefficient"));
        }
        Ok(CoefficientSchedule { coeffs })
    }

    /// `a_k = (-1/sqrt(D))^k` for `k = 0..=K`, unnormalized.
    pub fn geometric(degree: usize, radius: usize) -> Result<Self> {
        if degree < 3 || radius < 1 {
            return Err(Error::invalid(format!(
                "geometric schedule needs D >= 3 and K >= 1, got ({degree}, {radius})"
            )));
        }
        let r = -1.0 / (degree as f64).sqrt();
        Self::new((0..=radius).map(|k| r.powi(k as i32)).collect())
    }

    /// `a_k (-1)^k`: the schedule with every odd coefficient negated.
    pub fn alternated(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &a)| if k % 2 == 1 { -a } else { a })
            .collect();
        CoefficientSchedule { coeffs }
    }

    pub fn radius(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

impl TryFrom<Vec<f64>> for CoefficientSchedule {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<CoefficientSchedule> for Vec<f64> {
    fn from(s: CoefficientSchedule) -> Self {
        s.coeffs
    }
}

pub fn geometric_schedule(degree: usize, radius: usize) -> Result<CoefficientSchedule> {
    CoefficientSchedule::geometric(degree, radius)
}

/// One real value per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldAssignment {
    values: Vec<f64>,
}

impl FieldAssignment {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("field value at {i} is not finite")));
        }
        Ok(FieldAssignment { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub(crate) fn check(&self, g: &Graph) -> Result<()> {
        if self.values.len() != g.n() {
            return Err(Error::LengthMismatch {
                expected: g.n(),
                actual: self.values.len(),
            });
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for FieldAssignment {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// I.i.d. standard normals; entry `i` depends only on `(seed, i)`.
pub fn init_gaussian(n: usize, seed: u64) -> FieldAssignment {
    let values = (0..n as u64)
        .into_par_iter()
        .map(|i| normal_at(seed, i))
        .collect();
    FieldAssignment { values }
}

/// `x'_u = x_u + a * sum_{v ~ u} x_v`.
pub fn one_step_update(g: &Graph, x: &FieldAssignment, a: f64) -> Result<FieldAssignment> {
    x.check(g)?;
    let xs = x.values();
    let values = (0..g.n() as Vertex)
        .into_par_iter()
        .map(|u| {
            xs[u as usize] + a * lane_sum(xs, g.neighbors(u))
        })
        .collect();
    FieldAssignment::new(values)
}

pub fn multi_shell_update(
    g: &Graph,
    x: &FieldAssignment,
    s: &CoefficientSchedule,
) -> Result<FieldAssignment> {
    multi_shell_update_capped(g, x, s, DEFAULT_MAX_RADIUS)
}

/// Shell filter with an explicit radius cap. Cost is `O(n * D^K)`.
pub fn multi_shell_update_capped(
    g: &Graph,
    x: &FieldAssignment,
    s: &CoefficientSchedule,
    max_radius: usize,
) -> Result<FieldAssignment> {
    x.check(g)?;
    let radius = s.radius();
    if radius > max_radius {
        return Err(Error::RadiusCap {
            radius,
            cap: max_radius,
        });
    }
    let xs = x.values();
    let a = s.coeffs();
    let values = (0..g.n() as Vertex)
        .into_par_iter()
        .map_init(
            || (BallWalker::new(g.n()), vec![0.0f64; radius + 1]),
            |(walker, sums), u| {
                walker.shell_sums(g, u, xs, sums);
                a.iter().zip(sums.iter()).map(|(ak, sk)| ak * sk).sum::<f64>()
            },
        )
        .collect();
    FieldAssignment::new(values)
}

/// One round of the smoothed dynamics: a linear step then `tanh(beta * y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TanhRound {
    pub c_self: f64,
    pub c_nbr: f64,
    pub beta: f64,
}

/// Runs the rounds in order. A round with `beta = 0` leaves the linear step
/// unsquashed, so small-`beta` behavior can be compared with the exact
/// linear filter.
pub fn tanh_dynamics(
    g: &Graph,
    x: &FieldAssignment,
    rounds: &[TanhRound],
) -> Result<FieldAssignment> {
    x.check(g)?;
    if rounds.is_empty() {
        return Err(Error::invalid("tanh dynamics needs at least one round"));
    }
    if let Some(r) = rounds.iter().find(|r| !(r.beta >= 0.0)) {
        return Err(Error::invalid(format!("beta must be >= 0, got {}", r.beta)));
    }
    let mut cur = x.values().to_vec();
    for r in rounds {
        let prev = cur;
        cur = (0..g.n() as Vertex)
            .into_par_iter()
            .map(|u| {
                let y = r.c_self * prev[u as usize] + r.c_nbr * lane_sum(&prev, g.neighbors(u));
                if r.beta == 0.0 {
                    y
                } else {
                    (r.beta * y).tanh()
                }
            })
            .collect();
    }
    FieldAssignment::new(cur)
}
