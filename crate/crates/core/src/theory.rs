//! Closed-form predictions on the infinite `D`-regular tree.
//!
//! For endpoints `u`, `v` at distance `d`, every vertex `w` projects onto a
//! unique vertex `p_t` of the `u`-`v` path (`t` steps from `u`) and sits `h`
//! steps off the path. The number of such `w` is `1` for `h = 0` and
//! `b_t (D-1)^(h-1)` otherwise, where `b_t` counts the branches at `p_t`
//! that leave the path: `D` when `d = 0`, `D - 1` at an endpoint, `D - 2`
//! in the interior. Then `dist(u, w) = t + h` and `dist(v, w) = d - t + h`,
//! which gives the covariance of the filtered values as a finite sum.

use std::f64::consts::FRAC_2_PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::filter::CoefficientSchedule;
use crate::graph::tree_shell_size;

/// Prior provable benchmark for the scaled constant.
pub const TWO_OVER_PI: f64 = FRAC_2_PI;
/// Parisi value of the scaled constant, `0.763...`.
pub const PARISI: f64 = 0.763;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceConstants {
    pub two_over_pi: f64,
    pub parisi: f64,
}

pub fn reference_constants() -> ReferenceConstants {
    ReferenceConstants {
        two_over_pi: TWO_OVER_PI,
        parisi: PARISI,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TreeCorrelation {
    pub rho: f64,
    pub covariance: f64,
    pub variance: f64,
}

/// Number of vertices `w` with `dist(u, w) = i`, `dist(v, w) = j` on the
/// infinite `D`-regular tree, for `dist(u, v) = d`. Returned as a map of
/// `(i, j) -> count` restricted to `i, j <= radius`.
pub fn shell_pair_multiplicities(
    degree: usize,
    d: usize,
    radius: usize,
) -> Vec<((usize, usize), f64)> {
    let mut out = Vec::new();
    for t in 0..=d {
        let branches = if d == 0 {
            degree
        } else if t == 0 || t == d {
            degree - 1
        } else {
            degree - 2
        };
        for h in 0..=radius {
            let (i, j) = (t + h, d - t + h);
            if i > radius || j > radius {
                break;
            }
            let count = if h == 0 {
                1.0
            } else {
                branches as f64 * ((degree - 1) as f64).powi(h as i32 - 1)
            };
            if count > 0.0 {
                out.push(((i, j), count));
            }
        }
    }
    out
}

/// Exact `E[x'_u x'_v]`, `E[x'_u^2]` and their ratio for `dist(u, v) = d`.
pub fn exact_tree_correlation(
    degree: usize,
    schedule: &CoefficientSchedule,
    d: usize,
) -> Result<TreeCorrelation> {
    if degree < 3 {
        return Err(Error::invalid(format!("tree correlation needs D >= 3, got {degree}")));
    }
    let a = schedule.coeffs();
    let radius = schedule.radius();
    let variance: f64 = a
        .iter()
        .enumerate()
        .map(|(k, ak)| ak * ak * tree_shell_size(degree, k))
        .sum();
    let covariance: f64 = if d == 0 {
        variance
    } else {
        shell_pair_multiplicities(degree, d, radius)
            .into_iter()
            .map(|((i, j), c)| c * a[i] * a[j])
            .sum()
    };
    let rho = if d == 0 { 1.0 } else { covariance / variance };
    Ok(TreeCorrelation {
        rho,
        covariance,
        variance,
    })
}

/// `E[sign(X) sign(Y)] = (2/pi) asin(rho)` for a standard bivariate normal.
pub fn sheppard(rho: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::Domain(rho));
    }
    Ok(FRAC_2_PI * rho.asin())
}

/// Expected cut fraction `1/2 - sheppard(rho)/2` after sign rounding.
pub fn predicted_cut_fraction(rho: f64) -> Result<f64> {
    Ok(0.5 - 0.5 * sheppard(rho)?)
}

/// Leading-order neighbor correlation `-(2/sqrt(D)) (K-1)/K` of the
/// geometric schedule.
pub fn asymptotic_rho(degree: usize, radius: usize) -> Result<f64> {
    if degree < 3 || radius < 2 {
        return Err(Error::invalid(format!(
            "asymptotic_rho needs D >= 3 and K >= 2, got ({degree}, {radius})"
        )));
    }
    let k = radius as f64;
    Ok(-(2.0 / (degree as f64).sqrt()) * (k - 1.0) / k)
}

/// `C = (cut_fraction - 1/2) sqrt(D)`.
pub fn scaled_constant(cut_fraction: f64, degree: usize) -> f64 {
    (cut_fraction - 0.5) * (degree as f64).sqrt()
}

/// Cut fraction for a given scaled constant, the inverse of [`scaled_constant`].
pub fn cut_fraction_for_constant(c: f64, degree: usize) -> f64 {
    0.5 + c / (degree as f64).sqrt()
}

/// One row of the prediction table.
#[derive(Debug, Clone, Serialize)]
pub struct PredictionRow {
    pub degree: usize,
    pub radius: usize,
    pub exact_rho: f64,
    pub asymptotic_rho: Option<f64>,
    pub predicted_cut: f64,
    pub predicted_c: f64,
}

pub fn prediction_row(degree: usize, schedule: &CoefficientSchedule) -> Result<PredictionRow> {
    let radius = schedule.radius();
    let exact = exact_tree_correlation(degree, schedule, 1)?;
    let cut = predicted_cut_fraction(exact.rho)?;
    Ok(PredictionRow {
        degree,
        radius,
        exact_rho: exact.rho,
        asymptotic_rho: asymptotic_rho(degree, radius).ok(),
        predicted_cut: cut,
        predicted_c: scaled_constant(cut, degree),
    })
}
