//! Hermitian moment matrices of monomials and inner products under a
//! discretized measure.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::DiscretizedMeasure;
use crate::precision::{CompensatedCx, Cx, Extended, ExtendedContext, Real};

/// `entry(j, k) = Σ_i w_i z_i^j conj(z_i)^k` for `j, k < order`, with its
/// Cholesky factor `M = L L*`.
#[derive(Debug, Clone)]
pub struct MomentMatrix<R: Real = f64> {
    order: usize,
    ctx: R::Context,
    entries: Vec<Cx<R>>,
    chol: Vec<Cx<R>>,
    condition_estimate: f64,
}

impl<R: Real> MomentMatrix<R> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn context(&self) -> R::Context {
        self.ctx
    }

    /// Entry `(j, k)`, 0-based, in working precision.
    pub fn raw(&self, j: usize, k: usize) -> &Cx<R> {
        &self.entries[j * self.order + k]
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.raw(j, k).to_c64()
    }

    /// Lower-triangular Cholesky factor entry `L[j][k]`, `k <= j`.
    pub fn cholesky(&self, j: usize, k: usize) -> &Cx<R> {
        &self.chol[j * self.order + k]
    }

    /// Ratio of the largest to the smallest Cholesky pivot.
    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    /// Row-major `f64` copy of the entries.
    pub fn to_c64(&self) -> Vec<Vec<Complex64>> {
        (0..self.order)
            .map(|j| (0..self.order).map(|k| self.entry(j, k)).collect())
            .collect()
    }
}

/// Moment matrix in double precision.
pub fn moment_matrix(measure: &DiscretizedMeasure, order: usize) -> Result<MomentMatrix<f64>> {
    moment_matrix_in::<f64>(measure, order, ())
}

/// Moment matrix in software floating point with `digits` decimal digits.
pub fn moment_matrix_extended(
    measure: &DiscretizedMeasure,
    order: usize,
    digits: u32,
) -> Result<MomentMatrix<Extended>> {
    if digits < 15 {
        return Err(Error::InvalidParameter(
            "extended precision needs at least 15 digits".into(),
        ));
    }
    moment_matrix_in::<Extended>(measure, order, ExtendedContext::with_digits(digits))
}

/// Moment matrix over any scalar backend.
pub fn moment_matrix_in<R: Real>(
    measure: &DiscretizedMeasure,
    order: usize,
    ctx: R::Context,
) -> Result<MomentMatrix<R>> {
    if order == 0 {
        return Err(Error::InvalidParameter("moment order must be at least 1".into()));
    }
    if measure.len() < order {
        return Err(Error::SizeMismatch {
            what: "measure nodes for moment order",
            expected: order,
            got: measure.len(),
        });
    }
    let nodes: Vec<Cx<R>> = measure.nodes.iter().map(|z| Cx::from_c64(*z, ctx)).collect();
    let weights: Vec<R> = measure.weights.iter().map(|w| R::from_f64(*w, ctx)).collect();

    // powers[i][p] = z_i^p
    let powers: Vec<Vec<Cx<R>>> = nodes
        .iter()
        .map(|z| {
            let mut row = Vec::with_capacity(order);
            let mut p = Cx::from_c64(Complex64::new(1.0, 0.0), ctx);
            for _ in 0..order {
                row.push(p.clone());
                p = p.mul(z);
            }
            row
        })
        .collect();

    let mut entries = vec![Cx::zero(ctx); order * order];
    for j in 0..order {
        for k in j..order {
            let mut acc = CompensatedCx::new(ctx);
            for (row, w) in powers.iter().zip(&weights) {
                acc.add(row[j].mul_conj(&row[k]).scale(w));
            }
            let v = acc.value();
            if !v.to_c64().is_finite() {
                return Err(Error::NonFinite("moment matrix"));
            }
            entries[k * order + j] = v.conj();
            entries[j * order + k] = v;
        }
        // The diagonal is real by construction.
        let d = &mut entries[j * order + j];
        d.im = R::from_f64(0.0, ctx);
    }

    let (chol, condition_estimate) = cholesky(&entries, order, ctx)?;
    Ok(MomentMatrix {
        order,
        ctx,
        entries,
        chol,
        condition_estimate,
    })
}

/// `M = L L*`, failing when a pivot drops below the relative tolerance.
fn cholesky<R: Real>(m: &[Cx<R>], order: usize, ctx: R::Context) -> Result<(Vec<Cx<R>>, f64)> {
    let tol = R::pivot_tolerance(ctx) * m[0].re.to_f64();
    let mut l = vec![Cx::zero(ctx); order * order];
    let mut max_pivot: f64 = 0.0;
    let mut min_pivot = f64::INFINITY;
    for j in 0..order {
        let mut pivot = m[j * order + j].re.clone();
        for k in 0..j {
            pivot = pivot - l[j * order + k].norm_sqr();
        }
        let p = pivot.to_f64();
        max_pivot = max_pivot.max(p);
        min_pivot = min_pivot.min(p);
        if !(p > tol) {
            let condition = if p > 0.0 { max_pivot / p } else { f64::INFINITY };
            return Err(Error::NotPositiveDefinite { pivot: j, condition });
        }
        let ljj = pivot.sqrt();
        l[j * order + j] = Cx::new(ljj.clone(), R::from_f64(0.0, ctx));
        for i in j + 1..order {
            let mut s = m[i * order + j].clone();
            for k in 0..j {
                s = s.sub(&l[i * order + k].mul_conj(&l[j * order + k]));
            }
            l[i * order + j] = s.div_real(&ljj);
        }
    }
    Ok((l, max_pivot / min_pivot))
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// `⟨Q, R⟩ = Σ_i w_i Q(z_i) conj(R(z_i))` for monomial coefficient sequences
/// (constant term first).
pub fn inner_product(
    measure: &DiscretizedMeasure,
    q: &[Complex64],
    r: &[Complex64],
) -> Result<Complex64> {
    if q.is_empty() || r.is_empty() {
        return Err(Error::InvalidParameter(
            "coefficient sequences must be nonempty".into(),
        ));
    }
    let v = crate::precision::compensated_sum_c64(
        measure
            .nodes
            .iter()
            .zip(&measure.weights)
            .map(|(z, w)| horner(q, *z) * horner(r, *z).conj() * *w),
    );
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("inner product"))
    }
}
