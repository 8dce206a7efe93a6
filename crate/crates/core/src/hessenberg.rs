//! Finite sections of the Hessenberg matrix of multiplication by `z` in the
//! orthonormal polynomial basis.
//!
//! Column `j` of `D` holds the expansion `z P_{j-1} = Σ_k d_{k,j} P_{k-1}`.
//! Accessors use 1-based `(i, j)` indices; storage is row-major 0-based.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::DiscretizedMeasure;
use crate::moments::MomentMatrix;
use crate::precision::{Cx, Real};

/// How a section was produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Source {
    Arnoldi,
    /// Cholesky of the moment matrix; `digits` is `None` in double precision.
    Moments { digits: Option<u32> },
    ClosedFormArc { a: f64 },
    Jacobi { a: f64, b: f64, mode: JacobiMode },
    Shift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JacobiMode {
    /// Constant recurrence coefficients `(b-a)/4`, `(a+b)/2`.
    Limit,
    /// Exact recurrence of the normalized uniform measure on `[a, b]`.
    Legendre,
}

/// `n × n` upper Hessenberg section.
#[derive(Debug, Clone, PartialEq)]
pub struct HessenbergSection {
    size: usize,
    entries: Vec<Complex64>,
    source: Source,
}

impl HessenbergSection {
    fn zeros(size: usize, source: Source) -> Self {
        HessenbergSection {
            size,
            entries: vec![Complex64::new(0.0, 0.0); size * size],
            source,
        }
    }

    /// Builds a section from a dense row-major matrix, zeroing everything below
    /// the first subdiagonal.
    pub fn from_rows(rows: &[Vec<Complex64>], source: Source) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(invalid("empty section"));
        }
        let mut s = Self::zeros(n, source);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::SizeMismatch {
                    what: "section row length",
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, v) in row.iter().enumerate() {
                if i <= j + 1 {
                    s.entries[i * n + j] = *v;
                }
            }
        }
        Ok(s)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn source(&self) -> Source {
        self.source
    }

    /// `d_{i,j}`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        assert!(
            (1..=self.size).contains(&i) && (1..=self.size).contains(&j),
            "index ({i},{j}) outside {0}x{0} section",
            self.size
        );
        self.entries[(i - 1) * self.size + (j - 1)]
    }

    fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[(i - 1) * self.size + (j - 1)] = v;
    }

    /// Subdiagonal entry `d_{j+1,j}` (real part), `1 <= j < size`.
    pub fn subdiagonal(&self, j: usize) -> f64 {
        self.get(j + 1, j).re
    }

    /// All subdiagonal entries `d_{2,1}, ..., d_{n,n-1}`.
    pub fn subdiagonals(&self) -> Vec<f64> {
        (1..self.size).map(|j| self.subdiagonal(j)).collect()
    }

    /// Leading `m × m` block.
    pub fn leading(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.size {
            return Err(invalid(format!("leading block {m} of size {}", self.size)));
        }
        let mut s = Self::zeros(m, self.source);
        for i in 1..=m {
            for j in 1..=m {
                s.set(i, j, self.get(i, j));
            }
        }
        Ok(s)
    }

    /// Row-major dense copy.
    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    /// Largest entrywise distance to another section of the same size.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.size != other.size {
            return Err(Error::SizeMismatch {
                what: "section size",
                expected: self.size,
                got: other.size,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Values `√w_i P_k(z_i)` of the orthonormal polynomials at the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeBasis {
    pub vectors: Vec<Vec<Complex64>>,
}

/// Monomial coefficients of `P_0, ..., P_degree` (row `k`, constant term first)
/// and their leading coefficients `γ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis {
    pub degree: usize,
    pub coeffs: Vec<Vec<Complex64>>,
    pub leading: Vec<f64>,
}

impl OrthonormalBasis {
    /// Coefficients of the monic polynomial `P_k / γ_k`.
    pub fn monic(&self, k: usize) -> Vec<Complex64> {
        let g = self.leading[k];
        self.coeffs[k][..=k].iter().map(|c| c / g).collect()
    }
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    // conj(u) . v
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

const BREAKDOWN: f64 = 1e-14;

/// Arnoldi on the diagonal operator `v -> (z_i v_i)` started from `(√w_i)`,
/// keeping the node basis.
pub fn arnoldi(measure: &DiscretizedMeasure, n: usize) -> Result<(HessenbergSection, NodeBasis)> {
    if n == 0 {
        return Err(invalid("section size must be at least 1"));
    }
    if measure.len() < n + 1 {
        return Err(Error::SizeMismatch {
            what: "measure nodes (need section size + 1)",
            expected: n + 1,
            got: measure.len(),
        });
    }
    let mut d = HessenbergSection::zeros(n, Source::Arnoldi);
    let start: Vec<Complex64> = measure
        .weights
        .iter()
        .map(|w| Complex64::new(w.sqrt(), 0.0))
        .collect();
    let initial = norm(&start);
    let mut basis: Vec<Vec<Complex64>> = vec![start.iter().map(|v| v / initial).collect()];

    for j in 0..n {
        let mut w: Vec<Complex64> = measure
            .nodes
            .iter()
            .zip(&basis[j])
            .map(|(z, v)| z * v)
            .collect();
        let mut h = vec![Complex64::new(0.0, 0.0); j + 1];
        // Modified Gram-Schmidt, then one full reorthogonalization pass.
        for _pass in 0..2 {
            for (k, v) in basis.iter().enumerate() {
                let c = dot(v, &w);
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= c * vi;
                }
                h[k] += c;
            }
        }
        for (k, c) in h.into_iter().enumerate() {
            d.set(k + 1, j + 1, c);
        }
        if j + 1 == n {
            break;
        }
        let beta = norm(&w);
        if beta < BREAKDOWN * initial {
            return Err(Error::Breakdown {
                step: j + 1,
                residual: beta,
            });
        }
        d.set(j + 2, j + 1, Complex64::new(beta, 0.0));
        basis.push(w.into_iter().map(|x| x / beta).collect());
    }
    Ok((d, NodeBasis { vectors: basis }))
}

/// Section of size `n` by Arnoldi with reorthogonalization.
pub fn hessenberg_arnoldi(measure: &DiscretizedMeasure, n: usize) -> Result<HessenbergSection> {
    arnoldi(measure, n).map(|(d, _)| d)
}

/// Solves `L X = B` for lower-triangular `L` (leading `n × n` block of the
/// moment Cholesky factor), `B` given column by column.
fn forward_solve<R: Real>(m: &MomentMatrix<R>, n: usize, b: &mut [Vec<Cx<R>>]) {
    for col in b.iter_mut() {
        for i in 0..n {
            let mut s = col[i].clone();
            for k in 0..i {
                s = s.sub(&m.cholesky(i, k).mul(&col[k]));
            }
            col[i] = s.div_real(&m.cholesky(i, i).re);
        }
    }
}

/// Inverse of the leading `n × n` Cholesky block, row-major.
fn cholesky_inverse<R: Real>(m: &MomentMatrix<R>, n: usize) -> Vec<Vec<Cx<R>>> {
    let ctx = m.context();
    let mut cols: Vec<Vec<Cx<R>>> = (0..n)
        .map(|c| {
            (0..n)
                .map(|r| {
                    let v = if r == c { 1.0 } else { 0.0 };
                    Cx::from_c64(Complex64::new(v, 0.0), ctx)
                })
                .collect()
        })
        .collect();
    forward_solve(m, n, &mut cols);
    (0..n)
        .map(|r| (0..n).map(|c| cols[c][r].clone()).collect())
        .collect()
}

/// Orthonormal polynomials `P_0..P_degree` from the Cholesky factor: row `k`
/// of `L^{-1}` holds the monomial coefficients of `P_k`.
pub fn orthonormal_basis<R: Real>(m: &MomentMatrix<R>, degree: usize) -> Result<OrthonormalBasis> {
    if degree + 1 > m.order() {
        return Err(Error::SizeMismatch {
            what: "moment order for basis degree",
            expected: degree + 1,
            got: m.order(),
        });
    }
    let linv = cholesky_inverse(m, degree + 1);
    let coeffs: Vec<Vec<Complex64>> = linv
        .iter()
        .map(|row| row.iter().map(Cx::to_c64).collect())
        .collect();
    let leading = (0..=degree).map(|k| linv[k][k].re.to_f64()).collect();
    Ok(OrthonormalBasis {
        degree,
        coeffs,
        leading,
    })
}

/// Section of size `n` from the moment matrix: with `M = L L*` and the
/// shifted block `S[a][b] = ⟨z^{a+1}, z^b⟩`, `d_{k+1,j+1} = (L⁻¹ S L⁻*)[j][k]`.
pub fn hessenberg_from_moments<R: Real>(
    m: &MomentMatrix<R>,
    n: usize,
    digits: Option<u32>,
) -> Result<HessenbergSection> {
    if n == 0 {
        return Err(invalid("section size must be at least 1"));
    }
    if m.order() < n + 1 {
        return Err(Error::SizeMismatch {
            what: "moment order (need section size + 1)",
            expected: n + 1,
            got: m.order(),
        });
    }
    // Columns of S: S[.][b] = m[a+1][b].
    let mut x: Vec<Vec<Cx<R>>> = (0..n)
        .map(|b| (0..n).map(|a| m.raw(a + 1, b).clone()).collect())
        .collect();
    forward_solve(m, n, &mut x); // x = L⁻¹ S, column-major
    // y = L⁻¹ (L⁻¹ S)^H, so that G = y^H.
    let mut y: Vec<Vec<Cx<R>>> = (0..n)
        .map(|c| (0..n).map(|r| x[r][c].conj()).collect())
        .collect();
    forward_solve(m, n, &mut y);
    // D = G^T = conj(y): d_{r+1,c+1} = conj(y[c][r]) (y stored column-major).
    let mut d = HessenbergSection::zeros(n, Source::Moments { digits });
    for r in 0..n {
        for c in 0..n {
            if r <= c + 1 {
                let v = y[c][r].conj().to_c64();
                if !v.is_finite() {
                    return Err(Error::NonFinite("moment-route section"));
                }
                d.set(r + 1, c + 1, v);
            }
        }
    }
    Ok(d)
}

/// Unitary Hessenberg matrix whose diagonals are constant from the second
/// column on (measure on an arc of the unit circle with `Ψ_n(0) = 1/a`).
pub fn closed_form_arc_hessenberg(a: f64, n: usize) -> Result<HessenbergSection> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(invalid("closed-form arc requires a > 1"));
    }
    if n == 0 {
        return Err(invalid("section size must be at least 1"));
    }
    let rho = (a * a - 1.0).sqrt() / a;
    let mut d = HessenbergSection::zeros(n, Source::ClosedFormArc { a });
    let re = |v: f64| Complex64::new(v, 0.0);
    d.set(1, 1, re(-1.0 / a));
    for k in 2..=n {
        d.set(1, k, re(-rho.powi(k as i32 - 1) / a));
    }
    for j in 2..=n {
        for k in j..=n {
            d.set(j, k, re(-rho.powi((k - j) as i32) / (a * a)));
        }
    }
    for j in 1..n {
        d.set(j + 1, j, re(rho));
    }
    Ok(d)
}

/// Symmetric tridiagonal section for an interval `[a, b]`.
pub fn jacobi_interval(a: f64, b: f64, n: usize, mode: JacobiMode) -> Result<HessenbergSection> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(invalid("interval requires a < b"));
    }
    if n == 0 {
        return Err(invalid("section size must be at least 1"));
    }
    let mut d = HessenbergSection::zeros(n, Source::Jacobi { a, b, mode });
    let center = Complex64::new(0.5 * (a + b), 0.0);
    for j in 1..=n {
        d.set(j, j, center);
    }
    for k in 1..n {
        let off = match mode {
            JacobiMode::Limit => 0.25 * (b - a),
            JacobiMode::Legendre => {
                let kf = k as f64;
                0.5 * (b - a) * kf / (4.0 * kf * kf - 1.0).sqrt()
            }
        };
        d.set(k + 1, k, Complex64::new(off, 0.0));
        d.set(k, k + 1, Complex64::new(off, 0.0));
    }
    Ok(d)
}

/// Forward shift section: the Hessenberg matrix of normalized arc length on
/// the unit circle.
pub fn shift_matrix(n: usize) -> HessenbergSection {
    let mut d = HessenbergSection::zeros(n, Source::Shift);
    for j in 1..n {
        d.set(j + 1, j, Complex64::new(1.0, 0.0));
    }
    d
}

/// Largest weighted ℓ² residual of `z P_j - Σ_{k ≤ j+1} d_{k+1,j+1} P_k` over
/// columns `1..n-1`, with `P_k` evaluated at the nodes from the measure itself.
pub fn verify_recurrence(section: &HessenbergSection, measure: &DiscretizedMeasure) -> Result<f64> {
    let n = section.size();
    if measure.len() < n + 1 {
        return Err(Error::SizeMismatch {
            what: "measure nodes for section",
            expected: n + 1,
            got: measure.len(),
        });
    }
    let (_, basis) = arnoldi(measure, n)?;
    let v = &basis.vectors;
    let mut worst: f64 = 0.0;
    for j in 0..n.saturating_sub(1) {
        let mut r: Vec<Complex64> = measure.nodes.iter().zip(&v[j]).map(|(z, p)| z * p).collect();
        for k in 0..=j + 1 {
            let c = section.get(k + 1, j + 1);
            for (ri, pi) in r.iter_mut().zip(&v[k]) {
                *ri -= c * pi;
            }
        }
        worst = worst.max(norm(&r));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_curve, default_nodes_per_segment, discretize_measure};
    use crate::moments::moment_matrix;

    fn measure(s: &str, n: usize) -> DiscretizedMeasure {
        discretize_measure(
            &build_curve(&s.parse().unwrap()).unwrap(),
            default_nodes_per_segment(n),
        )
        .unwrap()
    }

    fn legendre_sub(j: usize) -> f64 {
        let j = j as f64;
        j / (4.0 * j * j - 1.0).sqrt()
    }

    #[test]
    fn circle_gives_shift() {
        let d = hessenberg_arnoldi(&measure("circle", 8), 8).unwrap();
        assert!(d.max_abs_diff(&shift_matrix(8)).unwrap() < 1e-12);
    }

    #[test]
    fn interval_matches_legendre_recurrence() {
        let d = hessenberg_arnoldi(&measure("interval:-1,1", 6), 6).unwrap();
        for i in 1..=6 {
            for j in 1..=6 {
                let e = if i == j + 1 || j == i + 1 {
                    legendre_sub(i.min(j))
                } else {
                    0.0
                };
                assert!((d.get(i, j) - Complex64::new(e, 0.0)).norm() < 1e-12, "({i},{j})");
            }
        }
        assert!((d.get(2, 1).re - 0.5773502691896258).abs() < 1e-15);
    }

    #[test]
    fn moments_route_on_circle_and_interval() {
        let m = moment_matrix(&measure("circle", 6), 7).unwrap();
        let d = hessenberg_from_moments(&m, 6, None).unwrap();
        assert!(d.max_abs_diff(&shift_matrix(6)).unwrap() < 1e-12);

        let meas = measure("interval:-1,1", 6);
        let m = moment_matrix(&meas, 7).unwrap();
        let dm = hessenberg_from_moments(&m, 6, None).unwrap();
        let da = hessenberg_arnoldi(&meas, 6).unwrap();
        assert!(dm.max_abs_diff(&da).unwrap() < 1e-9);
    }

    #[test]
    fn moments_route_needs_order_n_plus_one() {
        let m = moment_matrix(&measure("interval:-1,1", 6), 6).unwrap();
        assert!(matches!(
            hessenberg_from_moments(&m, 6, None),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn subdiagonal_equals_leading_coefficient_ratio() {
        let meas = measure("cross:1,1", 8);
        let m = moment_matrix(&meas, 9).unwrap();
        let basis = orthonormal_basis(&m, 8).unwrap();
        let d = hessenberg_arnoldi(&meas, 8).unwrap();
        for j in 1..8 {
            let ratio = basis.leading[j - 1] / basis.leading[j];
            assert!((d.subdiagonal(j) - ratio).abs() < 1e-10, "j={j}");
        }
        assert!((basis.coeffs[0][0] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn arc_entries_a2() {
        let d = closed_form_arc_hessenberg(2.0, 6).unwrap();
        let s3 = 3f64.sqrt();
        assert_eq!(d.get(1, 1).re, -0.5);
        assert!((d.get(2, 1).re - s3 / 2.0).abs() < 1e-15);
        assert!((d.get(1, 2).re + s3 / 4.0).abs() < 1e-15);
        assert_eq!(d.get(2, 2).re, -0.25);
        assert_eq!(d.get(3, 1), Complex64::new(0.0, 0.0));
        // second row continues the Toeplitz pattern, all negative
        assert!((d.get(2, 3).re + s3 / 8.0).abs() < 1e-15);
        assert!((d.get(4, 5).re + s3 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn arc_columns_orthonormal() {
        let n = 30;
        let d = closed_form_arc_hessenberg(1.7, n).unwrap();
        for p in 1..n {
            for q in 1..n {
                let ip: Complex64 = (1..=n).map(|i| d.get(i, p).conj() * d.get(i, q)).sum();
                let e = if p == q { 1.0 } else { 0.0 };
                assert!((ip - Complex64::new(e, 0.0)).norm() < 1e-12, "({p},{q})");
            }
        }
    }

    #[test]
    fn arc_rejects_a_le_1() {
        assert!(closed_form_arc_hessenberg(1.0, 4).is_err());
        assert!(closed_form_arc_hessenberg(0.5, 4).is_err());
    }

    #[test]
    fn jacobi_modes() {
        let lim = jacobi_interval(-1.0, 1.0, 5, JacobiMode::Limit).unwrap();
        for j in 1..5 {
            assert_eq!(lim.get(j + 1, j).re, 0.5);
            assert_eq!(lim.get(j, j + 1).re, 0.5);
            assert_eq!(lim.get(j, j).re, 0.0);
        }
        let leg = jacobi_interval(-1.0, 1.0, 5, JacobiMode::Legendre).unwrap();
        assert!((leg.get(2, 1).re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let shifted = jacobi_interval(0.0, 4.0, 5, JacobiMode::Limit).unwrap();
        assert_eq!(shifted.get(2, 1).re, 1.0);
        assert_eq!(shifted.get(3, 3).re, 2.0);
        assert!(jacobi_interval(1.0, 1.0, 3, JacobiMode::Limit).is_err());
    }

    #[test]
    fn recurrence_residuals() {
        let circle = measure("circle", 8);
        let d = hessenberg_arnoldi(&circle, 8).unwrap();
        assert!(verify_recurrence(&d, &circle).unwrap() <= 1e-12);
        assert!(verify_recurrence(&shift_matrix(8), &circle).unwrap() <= 1e-12);

        let interval = measure("interval:-1,1", 12);
        let leg = jacobi_interval(-1.0, 1.0, 12, JacobiMode::Legendre).unwrap();
        assert!(verify_recurrence(&leg, &interval).unwrap() <= 1e-10);
        // The limit-mode matrix is not the section of this measure.
        let lim = jacobi_interval(-1.0, 1.0, 12, JacobiMode::Limit).unwrap();
        assert!(verify_recurrence(&lim, &interval).unwrap() > 1e-2);

        let cross = measure("cross:1,1", 9);
        let d = hessenberg_arnoldi(&cross, 9).unwrap();
        assert!(verify_recurrence(&d, &cross).unwrap() <= 1e-9);
    }

    #[test]
    fn breakdown_on_small_support() {
        let pts = DiscretizedMeasure::from_weighted_nodes(
            (0..5).map(|k| Complex64::new(k as f64, 0.0)).collect(),
            vec![1.0; 5],
        )
        .unwrap();
        assert!(hessenberg_arnoldi(&pts, 4).is_ok());
        let dup = DiscretizedMeasure::from_weighted_nodes(
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
            vec![1.0; 4],
        )
        .unwrap();
        assert!(matches!(
            hessenberg_arnoldi(&dup, 3),
            Err(Error::Breakdown { step: 2, .. })
        ));
    }

    #[test]
    fn leading_block_and_from_rows() {
        let d = closed_form_arc_hessenberg(2.0, 6).unwrap();
        let l = d.leading(3).unwrap();
        assert_eq!(l.get(3, 3), d.get(3, 3));
        let rows = d.to_rows();
        let back = HessenbergSection::from_rows(&rows, d.source()).unwrap();
        assert_eq!(back, d);
    }
}
