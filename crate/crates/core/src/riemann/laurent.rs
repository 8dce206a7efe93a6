use num_complex::Complex64;

use crate::error::{Error, Result};

/// Anything that can be sampled like a map of the exterior of the unit disk.
pub trait ConformalMap {
    /// Value at `z`; callers guarantee `z != 0`.
    fn eval(&self, z: Complex64) -> Complex64;
}

/// `c1 z + c_0 + c_{-1}/z + ... + c_{-m}/z^m`, intended for `|z| >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentMap {
    pub c1: Complex64,
    /// `cneg[k]` multiplies `z^{-k}`.
    pub cneg: Vec<Complex64>,
}

/// Result of [`LaurentMap::evaluate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapValue {
    pub value: Complex64,
    /// `|z| < 1`: outside the region where the approximation theory applies.
    pub inside_disk: bool,
}

impl LaurentMap {
    pub fn new(c1: Complex64, cneg: Vec<Complex64>) -> Self {
        LaurentMap { c1, cneg }
    }

    pub fn identity() -> Self {
        LaurentMap::new(Complex64::new(1.0, 0.0), Vec::new())
    }

    /// Highest negative power present.
    pub fn truncation(&self) -> usize {
        self.cneg.len().saturating_sub(1)
    }

    pub fn coefficient(&self, k: i64) -> Complex64 {
        match k {
            1 => self.c1,
            k if k <= 0 => self
                .cneg
                .get((-k) as usize)
                .copied()
                .unwrap_or(Complex64::new(0.0, 0.0)),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Horner evaluation in `1/z`.
    pub fn evaluate(&self, z: Complex64) -> Result<MapValue> {
        if z == Complex64::new(0.0, 0.0) {
            return Err(Error::EvaluationAtZero);
        }
        Ok(MapValue {
            value: self.horner(z),
            inside_disk: z.norm() < 1.0,
        })
    }

    fn horner(&self, z: Complex64) -> Complex64 {
        let w = z.inv();
        let tail = self
            .cneg
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c);
        self.c1 * z + tail
    }

    /// `|c1| + Σ k |c_{-k}|`: a Lipschitz constant in θ on the unit circle.
    pub fn modulus_of_continuity(&self) -> f64 {
        self.c1.norm()
            + self
                .cneg
                .iter()
                .enumerate()
                .map(|(k, c)| k as f64 * c.norm())
                .sum::<f64>()
    }

    /// Coefficients with their complex conjugates swapped in; equals the map
    /// `z -> conj(f(conj z))`.
    pub fn conjugate_coefficients(&self) -> Self {
        LaurentMap::new(self.c1.conj(), self.cneg.iter().map(|c| c.conj()).collect())
    }
}

impl ConformalMap for LaurentMap {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.horner(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_matches_direct_sum() {
        let m = LaurentMap::new(
            Complex64::new(0.7, 0.0),
            vec![
                Complex64::new(0.1, 0.2),
                Complex64::new(-0.3, 0.0),
                Complex64::new(0.05, -0.01),
            ],
        );
        let z = Complex64::new(1.3, -0.4);
        let direct = m.c1 * z + m.cneg[0] + m.cneg[1] / z + m.cneg[2] / (z * z);
        assert!((m.evaluate(z).unwrap().value - direct).norm() < 1e-15);
        assert_eq!(m.coefficient(-2), m.cneg[2]);
        assert_eq!(m.coefficient(-9), Complex64::new(0.0, 0.0));
        assert_eq!(m.truncation(), 2);
    }

    #[test]
    fn zero_is_rejected_and_disk_flagged() {
        let m = LaurentMap::identity();
        assert_eq!(m.evaluate(Complex64::new(0.0, 0.0)), Err(Error::EvaluationAtZero));
        assert!(m.evaluate(Complex64::new(0.5, 0.0)).unwrap().inside_disk);
        let v = m.evaluate(Complex64::new(0.0, 1.0)).unwrap();
        assert!(!v.inside_disk);
        assert_eq!(v.value, Complex64::new(0.0, 1.0));
    }
}
