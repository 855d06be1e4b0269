use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filter::{CoefficientSchedule, DEFAULT_MAX_RADIUS};
use crate::graph::tree_shell_size;
use crate::theory::shell_pair_multiplicities;

const MAX_SWEEPS: usize = 10_000;
const TOLERANCE: f64 = 1e-10;

/// Neighbor correlation `N(a)/V(a)` on the infinite tree as two quadratic
/// forms in the coefficients.
struct TreeObjective {
    pairs: Vec<((usize, usize), f64)>,
    shells: Vec<f64>,
}

impl TreeObjective {
    fn new(degree: usize, radius: usize) -> Self {
        TreeObjective {
            pairs: shell_pair_multiplicities(degree, 1, radius),
            shells: (0..=radius).map(|k| tree_shell_size(degree, k)).collect(),
        }
    }

    fn parts(&self, a: &[f64]) -> (f64, f64) {
        let num = self.pairs.iter().map(|&((i, j), c)| c * a[i] * a[j]).sum();
        let den = a.iter().zip(&self.shells).map(|(x, s)| x * x * s).sum();
        (num, den)
    }

    fn rho(&self, a: &[f64]) -> f64 {
        let (num, den) = self.parts(a);
        num / den
    }

    /// Exact minimizer of the ratio along coordinate `j`.
    fn line_minimum(&self, a: &mut [f64], j: usize) -> f64 {
        let mut at = |t: f64| {
            a[j] = t;
            self.parts(a)
        };
        let (n0, v0) = at(0.0);
        let (np, vp) = at(1.0);
        let (nm, vm) = at(-1.0);
        let (p2, p1, p0) = ((np + nm) / 2.0 - n0, (np - nm) / 2.0, n0);
        let (q2, q1, q0) = ((vp + vm) / 2.0 - v0, (vp - vm) / 2.0, v0);
        // numerator of d/dt (p/q)
        let c2 = p2 * q1 - p1 * q2;
        let c1 = 2.0 * p2 * q0 - 2.0 * p0 * q2;
        let c0 = p1 * q0 - p0 * q1;
        let mut roots = Vec::with_capacity(2);
        if c2.abs() > 1e-300 {
            let disc = c1 * c1 - 4.0 * c2 * c0;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                let q = -0.5 * (c1 + c1.signum() * sq);
                if q != 0.0 {
                    roots.push(q / c2);
                    roots.push(c0 / q);
                } else {
                    roots.push(0.0);
                }
            }
        } else if c1 != 0.0 {
            roots.push(-c0 / c1);
        }
        roots
            .into_iter()
            .filter(|t| t.is_finite())
            .map(|t| (t, (p2 * t * t + p1 * t + p0) / (q2 * t * t + q1 * t + q0)))
            .fold(None, |best: Option<(f64, f64)>, cand| match best {
                Some(b) if b.1 <= cand.1 => Some(b),
                _ => Some(cand),
            })
            .map_or(f64::NAN, |(t, _)| t)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScheduleOptimum {
    pub schedule: CoefficientSchedule,
    pub rho: f64,
    pub initial_rho: f64,
    pub sweeps: usize,
}

/// Coordinate descent on `a_1..=a_K` (with `a_0 = 1`) minimizing the exact
/// neighbor correlation on the `D`-regular tree, started from the geometric
/// schedule. Each coordinate step moves to the exact line minimum and is
/// kept only if it lowers the objective.
pub fn optimize_schedule(degree: usize, radius: usize) -> Result<ScheduleOptimum> {
    if radius > DEFAULT_MAX_RADIUS {
        return Err(Error::RadiusCap {
            radius,
            cap: DEFAULT_MAX_RADIUS,
        });
    }
    let start = CoefficientSchedule::geometric(degree, radius)?;
    let obj = TreeObjective::new(degree, radius);
    let mut a = start.coeffs().to_vec();
    let initial_rho = obj.rho(&a);
    let mut cur = initial_rho;
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let before = cur;
        for j in 1..=radius {
            let old = a[j];
            let t = obj.line_minimum(&mut a, j);
            a[j] = t;
            let val = if t.is_finite() { obj.rho(&a) } else { f64::INFINITY };
            if val < cur {
                cur = val;
            } else {
                a[j] = old;
            }
        }
        assert!(cur <= before, "coordinate descent regressed");
        if before - cur < TOLERANCE {
            break;
        }
    }
    Ok(ScheduleOptimum {
        schedule: CoefficientSchedule::new(a)?,
        rho: cur,
        initial_rho,
        sweeps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonFit {
    /// `C(eps) ~ c0 + c1 eps + c2 eps^2`.
    pub coefficients: [f64; 3],
    pub residuals: Vec<f64>,
    pub eps_star: f64,
    /// True when the fitted curvature is not negative and the grid argmax
    /// was returned instead of the vertex.
    pub degenerate: bool,
}

/// Least-squares quadratic through `(eps, C)` points; the vertex is clamped
/// to `[0, max eps]`.
pub fn fit_quadratic_optimum(eps: &[f64], values: &[f64]) -> Result<EpsilonFit> {
    if eps.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: eps.len(),
            actual: values.len(),
        });
    }
    if eps.len() < 3 || !eps.contains(&0.0) {
        return Err(Error::invalid("epsilon grid needs at least 3 points including 0"));
    }
    let m = eps.len();
    let x = DMatrix::from_fn(m, 3, |i, j| eps[i].powi(j as i32));
    let y = DVector::from_column_slice(values);
    let sol = x
        .clone()
        .svd(true, true)
        .solve(&y, 1e-12)
        .map_err(|e| Error::invalid(format!("quadratic fit failed: {e}")))?;
    let coefficients = [sol[0], sol[1], sol[2]];
    let residuals = (&y - &x * &sol).iter().copied().collect();
    let hi = eps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
    let degenerate = !(coefficients[2] < -1e-12 * scale);
    let eps_star = if degenerate {
        let mut best = 0;
        for i in 1..m {
            if values[i] > values[best] {
                best = i;
            }
        }
        eps[best]
    } else {
        (-coefficients[1] / (2.0 * coefficients[2])).clamp(0.0, hi)
    };
    Ok(EpsilonFit {
        coefficients,
        residuals,
        eps_star,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{asymptotic_rho, exact_tree_correlation};

    #[test]
    fn single_coefficient_optimum() {
        for d in [3usize, 9, 16, 40] {
            let opt = optimize_schedule(d, 1).unwrap();
            let a1 = opt.schedule.coeffs()[1];
            assert!((a1 + 1.0 / (d as f64).sqrt()).abs() < 1e-6, "D={d}: {a1}");
            assert!((opt.rho + 1.0 / (d as f64).sqrt()).abs() < 1e-9);
        }
        let opt = optimize_schedule(9, 1).unwrap();
        assert!((opt.schedule.coeffs()[1] + 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn never_worse_than_geometric() {
        for d in [3usize, 9, 16, 50] {
            for k in 1..=6 {
                let opt = optimize_schedule(d, k).unwrap();
                let g = exact_tree_correlation(d, &CoefficientSchedule::geometric(d, k).unwrap(), 1)
                    .unwrap()
                    .rho;
                assert!(opt.rho <= g, "D={d} K={k}");
                assert_eq!(opt.initial_rho, g);
                let check = exact_tree_correlation(d, &opt.schedule, 1).unwrap().rho;
                assert!((check - opt.rho).abs() < 1e-12);
                assert_eq!(opt.schedule.coeffs()[0], 1.0);
            }
        }
    }

    #[test]
    fn optimized_rho_trends_toward_the_limit() {
        for d in [25usize, 100, 400] {
            let prev: Vec<f64> = (2..=6).map(|k| optimize_schedule(d, k).unwrap().rho).collect();
            let limit = -2.0 / (d as f64).sqrt();
            for w in prev.windows(2) {
                assert!(w[1] <= w[0] + 1e-12);
            }
            for (k, r) in (2..=6).zip(&prev) {
                assert!(*r > limit, "D={d} K={k}");
                assert!(*r <= asymptotic_rho(d, k).unwrap() * 0.85);
            }
            assert!(prev[4] / limit > 0.8, "D={d}: {}", prev[4] / limit);
        }
    }

    #[test]
    fn deterministic() {
        let a = optimize_schedule(16, 6).unwrap();
        let b = optimize_schedule(16, 6).unwrap();
        assert_eq!(a.schedule, b.schedule);
        assert!(optimize_schedule(16, 7).is_err());
        assert!(optimize_schedule(2, 2).is_err());
    }

    #[test]
    fn exact_quadratic_fit() {
        let eps = [0.0, 0.05, 0.1, 0.2, 0.3];
        let (c0, c1, c2) = (0.6, 0.8, 2.0);
        let vals: Vec<f64> = eps.iter().map(|e| c0 + c1 * e - c2 * e * e).collect();
        let fit = fit_quadratic_optimum(&eps, &vals).unwrap();
        assert!(!fit.degenerate);
        assert!((fit.eps_star - c1 / (2.0 * c2)).abs() < 1e-9);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn degenerate_fit_falls_back_to_argmax() {
        let fit = fit_quadratic_optimum(&[0.0, 0.5, 1.0], &[0.6, 0.6, 0.6]).unwrap();
        assert!(fit.degenerate);
        assert_eq!(fit.eps_star, 0.0);
        let fit = fit_quadratic_optimum(&[0.0, 0.5, 1.0], &[0.1, 0.2, 0.5]).unwrap();
        assert!(fit.degenerate);
        assert_eq!(fit.eps_star, 1.0);
        assert!(fit_quadratic_optimum(&[0.1, 0.5, 1.0], &[0.0; 3]).is_err());
        assert!(fit_quadratic_optimum(&[0.0, 0.5], &[0.0; 2]).is_err());
    }

    #[test]
    fn vertex_is_clamped() {
        let eps = [0.0, 0.1, 0.2];
        let vals: Vec<f64> = eps.iter().map(|e| 1.0 + 10.0 * e - e * e).collect();
        let fit = fit_quadratic_optimum(&eps, &vals).unwrap();
        assert_eq!(fit.eps_star, 0.2);
    }
}
