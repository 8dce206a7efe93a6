//! Column approximants, closed-form reference maps, capacity estimates and
//! boundary sampling.

mod laurent;
mod reference;

pub use laurent::{ConformalMap, LaurentMap, MapValue};
pub use reference::{sqrt_series, ReferenceMap};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hessenberg::HessenbergSection;

/// `h_n(z) = d_{n+1,n} z + d_{n,n} + d_{n-1,n}/z + ... + d_{1,n}/z^{n-1}`.
pub fn approximant(d: &HessenbergSection, n: usize) -> Result<LaurentMap> {
    if n == 0 || n >= d.size() {
        return Err(invalid(format!(
            "approximant index {n} outside 1..={}",
            d.size().saturating_sub(1)
        )));
    }
    let cneg = (0..n).map(|k| d.get(n - k, n)).collect();
    Ok(LaurentMap::new(d.get(n + 1, n), cneg))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub value: f64,
    /// Subdiagonal entries averaged, in column order.
    pub trace: Vec<f64>,
    pub window: usize,
}

/// Mean of the last `window` subdiagonal entries `d_{j+1,j}`.
pub fn capacity_estimate(d: &HessenbergSection, window: usize) -> Result<CapacityEstimate> {
    if window == 0 || window >= d.size() {
        return Err(invalid(format!(
            "capacity window {window} must be in 1..{}",
            d.size()
        )));
    }
    let sub = d.subdiagonals();
    let trace = sub[sub.len() - window..].to_vec();
    Ok(CapacityEstimate {
        value: shifted_mean(&trace),
        trace,
        window,
    })
}

/// Mean computed as an offset from the first element; exact for constant input.
pub(crate) fn shifted_mean(xs: &[f64]) -> f64 {
    let first = xs[0];
    let dev: f64 = xs.iter().map(|x| x - first).sum();
    first + dev / xs.len() as f64
}

pub(crate) fn shifted_mean_c64(xs: &[Complex64]) -> Complex64 {
    let first = xs[0];
    let dev: Complex64 = xs.iter().map(|x| x - first).sum();
    first + dev / xs.len() as f64
}

/// Samples `(θ_j, map(radius e^{iθ_j}))` with `θ_j = 2πj / samples`.
pub fn boundary_image<M: ConformalMap + ?Sized>(
    map: &M,
    samples: usize,
    radius: f64,
) -> Result<Vec<(f64, Complex64)>> {
    if samples < 2 {
        return Err(invalid("boundary image needs at least 2 samples"));
    }
    if !(radius >= 1.0) {
        return Err(invalid(format!("boundary radius {radius} below 1")));
    }
    Ok(sample_circle(map, samples, radius))
}

fn sample_circle<M: ConformalMap + ?Sized>(
    map: &M,
    samples: usize,
    radius: f64,
) -> Vec<(f64, Complex64)> {
    (0..samples)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / samples as f64;
            (theta, map.eval(Complex64::from_polar(radius, theta)))
        })
        .collect()
}

/// Image of one circle `|z| = radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct Equipotential {
    pub radius: f64,
    pub points: Vec<(f64, Complex64)>,
}

/// One boundary image per radius, in the given order.
pub fn equipotential_grid<M: ConformalMap + ?Sized>(
    map: &M,
    radii: &[f64],
    samples: usize,
) -> Result<Vec<Equipotential>> {
    if let Some(r) = radii.iter().find(|r| !(**r > 1.0)) {
        return Err(invalid(format!("equipotential radius {r} must exceed 1")));
    }
    radii
        .iter()
        .map(|&radius| {
            Ok(Equipotential {
                radius,
                points: boundary_image(map, samples, radius)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupDifference {
    pub sup: f64,
    pub theta_at_max: f64,
}

/// Sampled maximum of `|a - b|` on `|z| = radius`.
pub fn sup_difference<A, B>(a: &A, b: &B, radius: f64, samples: usize) -> Result<SupDifference>
where
    A: ConformalMap + ?Sized,
    B: ConformalMap + ?Sized,
{
    if samples < 16 {
        return Err(invalid("sup difference needs at least 16 samples"));
    }
    if !(radius >= 1.0) {
        return Err(invalid(format!("sup radius {radius} below 1")));
    }
    let mut best = SupDifference {
        sup: 0.0,
        theta_at_max: 0.0,
    };
    for j in 0..samples {
        let theta = 2.0 * PI * j as f64 / samples as f64;
        let z = Complex64::from_polar(radius, theta);
        let e = (a.eval(z) - b.eval(z)).norm();
        if e > best.sup {
            best = SupDifference {
                sup: e,
                theta_at_max: theta,
            };
        }
    }
    Ok(best)
}

/// Column deviation data entering the a-priori bound on `|h_n - φ|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBound {
    pub theta2: f64,
    pub theta1: f64,
    /// `‖(c_{-k})_{k>=n}‖₂` of the limit symbol.
    pub tail_l2: f64,
    /// `‖(c_{-k})_{k>=n}‖₁` of the limit symbol.
    pub tail_l1: f64,
}

impl ErrorBound {
    /// Bound on `sup_{|z|=r} |h_n(z) - φ(z)|` for column `n`.
    ///
    /// For `r > 1` this is Cauchy–Schwarz on both pieces:
    /// `Θ_n √(r² + Σ_{k<n} r^{-2k}) + tail_l2 r^{-n} r/√(r²-1)`.
    /// At `r = 1` it falls back to `θ_n + tail_l1`.
    pub fn at_radius(&self, r: f64, n: usize) -> f64 {
        if r <= 1.0 {
            return self.theta1 + self.tail_l1;
        }
        let r2 = r * r;
        let head: f64 = r2 + (0..n).map(|k| r.powi(-2 * k as i32)).sum::<f64>();
        let tail = self.tail_l2 * r.powi(-(n as i32)) * r / (r2 - 1.0).sqrt();
        (self.theta2 * head.sqrt() + tail).min(self.theta1 * r + self.tail_l1 * r.powi(-(n as i32)))
    }
}
