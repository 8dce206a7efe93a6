//! Limit Toeplitz matrix of a Hessenberg section and column deviation norms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hessenberg::HessenbergSection;
use crate::riemann::{shifted_mean, shifted_mean_c64, LaurentMap, ReferenceMap};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "provenance", rename_all = "snake_case")]
pub enum LimitProvenance {
    Analytic { reference: ReferenceMap },
    Estimated { window: usize },
}

/// Diagonals of the limit Toeplitz matrix: `d1` on the subdiagonal and
/// `dneg[k]` on the `k`-th superdiagonal (`dneg[0]` is the main diagonal).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalLimits {
    pub d1: f64,
    pub dneg: Vec<Complex64>,
    /// `max - min` of the subdiagonal over the estimation window.
    pub d1_spread: f64,
    /// Diameter of each diagonal's values over the window.
    pub dneg_spread: Vec<f64>,
    pub provenance: LimitProvenance,
}

impl DiagonalLimits {
    /// Limits from a closed-form Laurent series, `len` coefficients `d_0..`.
    pub fn analytic(reference: ReferenceMap, len: usize) -> Result<Self> {
        reference.validate()?;
        if len == 0 {
            return Err(invalid("analytic limits need at least one coefficient"));
        }
        let series = reference.laurent(len - 1);
        Ok(DiagonalLimits {
            d1: series.c1.re,
            dneg: series.cneg,
            d1_spread: 0.0,
            dneg_spread: vec![0.0; len],
            provenance: LimitProvenance::Analytic { reference },
        })
    }
}

/// Per-column deviations of a section from its limit Toeplitz matrix;
/// element `n - 1` of each vector belongs to column `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzDiagnostics {
    /// `Θ_n`, ℓ² norm of column `n` of `D - T` over rows `1..=n+1`.
    pub theta2: Vec<f64>,
    /// `θ_n`, the ℓ¹ norm of the same entries.
    pub theta1: Vec<f64>,
    /// `√(Σ_{k>=n} |d_{-k}|²)` over the available limit coefficients.
    pub tail_l2: Vec<f64>,
    /// `Σ_{k>=n} |d_{-k}|` over the available limit coefficients.
    pub tail_l1: Vec<f64>,
    /// Partial sums `Σ_{k<=K} |d_{-k}|`, `K = 0, 1, ...`.
    pub row_l1: Vec<f64>,
    pub provenance: LimitProvenance,
}

/// `Θ_n` and `θ_n` for columns `1..size`, pairing `d_{n+1,n}` with `d1` and
/// `d_{n-k,n}` with `d_{-k}`.
pub fn theta_norms(d: &HessenbergSection, limits: &DiagonalLimits) -> Result<ToeplitzDiagnostics> {
    let size = d.size();
    let need = size.saturating_sub(1);
    if limits.dneg.len() < need {
        return Err(Error::SizeMismatch {
            what: "limit diagonals for section",
            expected: need,
            got: limits.dneg.len(),
        });
    }
    let mags: Vec<f64> = limits.dneg.iter().map(|c| c.norm()).collect();
    // Suffix sums so tail_l2[n] needs no recomputation.
    let mut suffix_sq = vec![0.0; mags.len() + 1];
    let mut suffix_abs = vec![0.0; mags.len() + 1];
    for k in (0..mags.len()).rev() {
        suffix_sq[k] = suffix_sq[k + 1] + mags[k] * mags[k];
        suffix_abs[k] = suffix_abs[k + 1] + mags[k];
    }

    let mut theta2 = Vec::with_capacity(need);
    let mut theta1 = Vec::with_capacity(need);
    let mut tail_l2 = Vec::with_capacity(need);
    let mut tail_l1 = Vec::with_capacity(need);
    for n in 1..size {
        let mut dev = Vec::with_capacity(n + 1);
        dev.push((d.get(n + 1, n) - Complex64::new(limits.d1, 0.0)).norm());
        for k in 0..n {
            dev.push((d.get(n - k, n) - limits.dneg[k]).norm());
        }
        theta2.push(dev.iter().map(|x| x * x).sum::<f64>().sqrt());
        theta1.push(dev.iter().sum());
        tail_l2.push(suffix_sq[n].sqrt());
        tail_l1.push(suffix_abs[n]);
    }
    let row_l1 = mags
        .iter()
        .scan(0.0, |acc, m| {
            *acc += m;
            Some(*acc)
        })
        .collect();
    Ok(ToeplitzDiagnostics {
        theta2,
        theta1,
        tail_l2,
        tail_l1,
        row_l1,
        provenance: limits.provenance,
    })
}

/// Diagonal means over the last `window` columns `size-window..size-1`.
pub fn estimate_diagonal_limits(d: &HessenbergSection, window: usize) -> Result<DiagonalLimits> {
    let size = d.size();
    if window == 0 || 2 * window >= size {
        return Err(invalid(format!(
            "estimation window {window} must satisfy 1 <= window < {size}/2"
        )));
    }
    let cols: Vec<usize> = (size - window..size).collect();
    let sub: Vec<f64> = cols.iter().map(|&j| d.get(j + 1, j).re).collect();
    let depth = size - window;
    let mut dneg = Vec::with_capacity(depth);
    let mut dneg_spread = Vec::with_capacity(depth);
    for k in 0..depth {
        let vals: Vec<Complex64> = cols.iter().map(|&j| d.get(j - k, j)).collect();
        dneg.push(shifted_mean_c64(&vals));
        dneg_spread.push(diameter(&vals));
    }
    let d1 = shifted_mean(&sub);
    if !(d1 > 0.0) {
        return Err(invalid(format!("estimated subdiagonal limit {d1} is not positive")));
    }
    Ok(DiagonalLimits {
        d1,
        dneg,
        d1_spread: sub.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - sub.iter().cloned().fold(f64::INFINITY, f64::min),
        dneg_spread,
        provenance: LimitProvenance::Estimated { window },
    })
}

fn diameter(vals: &[Complex64]) -> f64 {
    let mut best: f64 = 0.0;
    for (i, a) in vals.iter().enumerate() {
        for b in &vals[i + 1..] {
            best = best.max((a - b).norm());
        }
    }
    best
}

/// `d1 z + d_0 + d_{-1}/z + ... + d_{-truncation}/z^truncation`.
pub fn symbol_from_limits(limits: &DiagonalLimits, truncation: usize) -> Result<LaurentMap> {
    if truncation >= limits.dneg.len() {
        return Err(Error::SizeMismatch {
            what: "limit diagonals for symbol truncation",
            expected: truncation + 1,
            got: limits.dneg.len(),
        });
    }
    Ok(LaurentMap::new(
        Complex64::new(limits.d1, 0.0),
        limits.dneg[..=truncation].to_vec(),
    ))
}
