//! Gauss–Legendre rules and a panel-doubling integrator.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::precision::compensated_sum;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// nodes in increasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    let nf = n as f64;
    for i in 0..m {
        // Tricomi's initial guess, then Newton on P_n.
        let k = i as f64 + 1.0;
        let mut x = (PI * (k - 0.25) / (nf + 0.5)).cos()
            * (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf));
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[m - 1] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const PANEL_ORDER: usize = 20;
const MAX_PANELS: usize = 1 << 16;

/// Integrates `f` over `[a, b]` with composite Gauss–Legendre panels, doubling
/// the panel count until two successive estimates agree to `rel_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let (x, w) = gauss_legendre(PANEL_ORDER);
    let composite = |panels: usize| {
        let h = (b - a) / panels as f64;
        compensated_sum((0..panels).flat_map(|p| {
            let lo = a + h * p as f64;
            let f = &f;
            x.iter()
                .zip(&w)
                .map(move |(xi, wi)| 0.5 * h * wi * f(lo + 0.5 * h * (xi + 1.0)))
        }))
    };
    let mut panels = 1;
    let mut prev = composite(panels);
    while panels < MAX_PANELS {
        panels *= 2;
        let next = composite(panels);
        if (next - prev).abs() <= rel_tol * next.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNotConverged { panels })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 64, 333, 1024] {
            let (_, w) = gauss_legendre(n);
            let s = compensated_sum(w.iter().copied());
            assert!((s - 2.0).abs() < 1e-13, "n={n}: {s}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let n = 7;
        let (x, w) = gauss_legendre(n);
        for deg in 0..2 * n {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "deg {deg}: {q} vs {exact}");
        }
    }

    #[test]
    fn nodes_sorted_and_symmetric() {
        let (x, _) = gauss_legendre(41);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        for i in 0..41 {
            assert!((x[i] + x[40 - i]).abs() < 1e-15);
        }
        assert_eq!(x[20], 0.0);
    }

    #[test]
    fn integrate_smooth_function() {
        let v = integrate(|t| t.cos(), 0.0, 3.0, 1e-12).unwrap();
        assert!((v - 3f64.sin()).abs() < 1e-12);
    }
}
