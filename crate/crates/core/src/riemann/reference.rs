use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::laurent::{ConformalMap, LaurentMap};
use crate::error::{invalid, Result};

/// Exterior maps known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReferenceMap {
    /// Arc of the unit circle, `φ(z) = z (a - √(a²-1) z) / (√(a²-1) - a z)`.
    Arc { a: f64 },
    /// `[-a, a] ∪ [-ib, ib]`, `φ(z) = √(a²(z²+1)² + b²(z²-1)²) / (2z)`.
    Cross { a: f64, b: f64 },
    /// Interval `[a, b]`.
    Joukowski { a: f64, b: f64 },
    IdentityCircle,
}

impl ReferenceMap {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ReferenceMap::Arc { a } if !(a > 1.0) => Err(invalid("arc map requires a > 1")),
            ReferenceMap::Cross { a, b } if !(a > 0.0 && b > 0.0) => {
                Err(invalid("cross map requires a, b > 0"))
            }
            ReferenceMap::Joukowski { a, b } if !(a < b) => {
                Err(invalid("joukowski map requires a < b"))
            }
            _ => Ok(()),
        }
    }

    /// Logarithmic capacity of the support, the coefficient of `z`.
    pub fn capacity(&self) -> f64 {
        match *self {
            ReferenceMap::Arc { a } => (a * a - 1.0).sqrt() / a,
            ReferenceMap::Cross { a, b } => 0.5 * (a * a + b * b).sqrt(),
            ReferenceMap::Joukowski { a, b } => 0.25 * (b - a),
            ReferenceMap::IdentityCircle => 1.0,
        }
    }

    /// Closed-form value.
    pub fn closed_form(&self, z: Complex64) -> Complex64 {
        match *self {
            ReferenceMap::Arc { a } => {
                let c = (a * a - 1.0).sqrt();
                z * (a - c * z) / (c - a * z)
            }
            ReferenceMap::Cross { a, b } => {
                // With u = 1/z², a²(1+u)² + b²(1-u)² = s (1 + 2pu + u²) and the
                // quadratic factors as (1 - u/r)(1 - u/conj r) with |r| = 1, so
                // each principal root stays on its analytic branch for |u| <= 1.
                let s = a * a + b * b;
                let p = (a * a - b * b) / s;
                let r = Complex64::new(-p, (1.0 - p * p).max(0.0).sqrt());
                let u = (z * z).inv();
                let one = Complex64::new(1.0, 0.0);
                let root = (one - u / r).sqrt() * (one - u / r.conj()).sqrt();
                z * root * (0.5 * s.sqrt())
            }
            ReferenceMap::Joukowski { a, b } => {
                (z + z.inv()) * (0.25 * (b - a)) + 0.5 * (a + b)
            }
            ReferenceMap::IdentityCircle => z,
        }
    }

    /// Laurent coefficients `c_1, c_0, ..., c_{-truncation}`.
    pub fn laurent(&self, truncation: usize) -> LaurentMap {
        let zero = Complex64::new(0.0, 0.0);
        let re = |v: f64| Complex64::new(v, 0.0);
        let mut cneg = vec![zero; truncation + 1];
        match *self {
            ReferenceMap::Arc { a } => {
                let rho = (a * a - 1.0).sqrt() / a;
                for (k, c) in cneg.iter_mut().enumerate() {
                    *c = re(-rho.powi(k as i32) / (a * a));
                }
            }
            ReferenceMap::Cross { a, b } => {
                let s = a * a + b * b;
                let p = (a * a - b * b) / s;
                let half = 0.5 * s.sqrt();
                // √(1 + 2pu + u²) = Σ g_m u^m contributes g_m to z^{1-2m}.
                let terms = truncation / 2 + 2;
                let g = sqrt_series(&[1.0, 2.0 * p, 1.0], terms);
                for (m, gm) in g.iter().enumerate().skip(1) {
                    let k = 2 * m - 1;
                    if k <= truncation {
                        cneg[k] = re(half * gm);
                    }
                }
            }
            ReferenceMap::Joukowski { a, b } => {
                cneg[0] = re(0.5 * (a + b));
                if truncation >= 1 {
                    cneg[1] = re(0.25 * (b - a));
                }
            }
            ReferenceMap::IdentityCircle => {}
        }
        LaurentMap::new(re(self.capacity()), cneg)
    }
}

impl ConformalMap for ReferenceMap {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.closed_form(z)
    }
}

/// First `terms` Taylor coefficients of `√f` for a power series `f` with
/// `f[0] = 1`, from `g² = f`.
pub fn sqrt_series(f: &[f64], terms: usize) -> Vec<f64> {
    let mut g = vec![0.0; terms];
    if terms == 0 {
        return g;
    }
    g[0] = 1.0;
    for m in 1..terms {
        let fm = f.get(m).copied().unwrap_or(0.0);
        let conv: f64 = (1..m).map(|i| g[i] * g[m - i]).sum();
        g[m] = 0.5 * (fm - conv);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn binom_half(n: usize) -> f64 {
        (0..n).fold(1.0, |acc, i| acc * (0.5 - i as f64) / (i as f64 + 1.0))
    }

    #[test]
    fn arc_coefficients_a2() {
        let l = ReferenceMap::Arc { a: 2.0 }.laurent(3);
        let s3 = 3f64.sqrt();
        assert!((l.c1.re - s3 / 2.0).abs() < 1e-15);
        assert_eq!(l.cneg[0].re, -0.25);
        assert!((l.cneg[1].re + s3 / 8.0).abs() < 1e-16);
    }

    #[test]
    fn arc_closed_form_at_one() {
        let v = ReferenceMap::Arc { a: 2.0 }.closed_form(c(1.0, 0.0));
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cross_equal_arms_is_binomial_series() {
        let l = ReferenceMap::Cross { a: 1.0, b: 1.0 }.laurent(40);
        assert!((l.c1.re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((l.cneg[3].re - 0.5 * FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((l.cneg[7].re + 0.125 * FRAC_1_SQRT_2).abs() < 1e-16);
        for k in 0..=40 {
            let expected = if k % 4 == 3 {
                FRAC_1_SQRT_2 * binom_half((k + 1) / 4)
            } else {
                0.0
            };
            assert!((l.cneg[k].re - expected).abs() < 1e-16, "k={k}");
        }
    }

    #[test]
    fn cross_unequal_arms_leading_terms() {
        let (a, b) = (1.5_f64, 0.7_f64);
        let s = a * a + b * b;
        let l = ReferenceMap::Cross { a, b }.laurent(5);
        assert!((l.c1.re - s.sqrt() / 2.0).abs() < 1e-15);
        let c1 = (2.0 * a * a - 2.0 * b * b) / (4.0 * s.sqrt());
        assert!((l.cneg[1].re - c1).abs() < 1e-15);
        let q = 2.0 * a * a - 2.0 * b * b;
        let c3 = s.sqrt() * (0.5 - q * q / (8.0 * s * s)) / 2.0;
        assert!((l.cneg[3].re - c3).abs() < 1e-15);
        assert_eq!(l.cneg[0], c(0.0, 0.0));
        assert_eq!(l.cneg[2], c(0.0, 0.0));
    }

    #[test]
    fn cross_closed_form_points() {
        let m = ReferenceMap::Cross { a: 1.0, b: 1.0 };
        // The root vanishes there, so rounding in its argument is amplified to its square root.
        assert!(m.closed_form(Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-7);
        for (z, w) in [(c(1., 0.), c(1., 0.)), (c(0., 1.), c(0., 1.)), (c(-1., 0.), c(-1., 0.)), (c(0., -1.), c(0., -1.))] {
            assert!((m.closed_form(z) - w).norm() < 1e-15, "{z}");
        }
    }

    #[test]
    fn truncations_agree_with_closed_form_within_tail_bound() {
        let maps = [
            ReferenceMap::Arc { a: 2.0 },
            ReferenceMap::Arc { a: 1.3 },
            ReferenceMap::Cross { a: 1.0, b: 1.0 },
            ReferenceMap::Cross { a: 2.0, b: 0.5 },
            ReferenceMap::Joukowski { a: -1.0, b: 3.0 },
            ReferenceMap::IdentityCircle,
        ];
        for map in maps {
            let m = 20;
            let trunc = map.laurent(m);
            let long = map.laurent(400);
            let bound: f64 = (m + 1..=400)
                .map(|k| long.cneg[k].norm() * 2f64.powi(-(k as i32)))
                .sum();
            for j in 0..64 {
                let z = Complex64::from_polar(2.0, 2.0 * PI * j as f64 / 64.0);
                let err = (trunc.eval(z) - map.closed_form(z)).norm();
                assert!(err <= bound + 1e-14, "{map:?}: {err} > {bound}");
            }
        }
    }

    #[test]
    fn joukowski_endpoints() {
        let m = ReferenceMap::Joukowski { a: -1.0, b: 1.0 };
        assert!((m.closed_form(c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((m.closed_form(c(-1.0, 0.0)) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn capacities() {
        assert!((ReferenceMap::Arc { a: 2.0 }.capacity() - 3f64.sqrt() / 2.0).abs() < 1e-16);
        assert!((ReferenceMap::Cross { a: 1.0, b: 1.0 }.capacity() - FRAC_1_SQRT_2).abs() < 1e-16);
        assert_eq!(ReferenceMap::Joukowski { a: 0.0, b: 4.0 }.capacity(), 1.0);
        assert_eq!(ReferenceMap::IdentityCircle.capacity(), 1.0);
        assert!(ReferenceMap::Arc { a: 0.9 }.validate().is_err());
    }

    #[test]
    fn sqrt_series_squares_back() {
        let f = [1.0, 0.6, 1.0];
        let g = sqrt_series(&f, 12);
        for m in 0..12 {
            let sq: f64 = (0..=m).map(|i| g[i] * g[m - i]).sum();
            let fm = f.get(m).copied().unwrap_or(0.0);
            assert!((sq - fm).abs() < 1e-14);
        }
    }
}
