//! Scalar backends for the moment route.
//!
//! Moment matrices of monomials are exponentially ill-conditioned, so the
//! Cholesky route is written once over [`Real`] and instantiated either with
//! `f64` or with [`Extended`], a software float with a configurable number of
//! decimal digits.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Arithmetic requirements of the moment route.
pub trait Real:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Whatever is needed to build a constant (the working precision).
    type Context: Copy + Debug;

    fn from_f64(x: f64, ctx: Self::Context) -> Self;
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    /// Relative pivot tolerance used by the Cholesky factorization.
    fn pivot_tolerance(ctx: Self::Context) -> f64;
}

impl Real for f64 {
    type Context = ();

    fn from_f64(x: f64, _: ()) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn pivot_tolerance(_: ()) -> f64 {
        1e-13
    }
}

/// Working precision of [`Extended`], in bits of mantissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtendedContext {
    pub bits: usize,
    pub digits: u32,
}

impl ExtendedContext {
    pub fn with_digits(digits: u32) -> Self {
        // log2(10) bits per digit, plus guard bits.
        let bits = (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as usize + 16;
        Self { bits, digits }
    }
}

/// Binary software float with round-half-even.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub struct Extended(FBig<HalfEven, 2>);

impl Add for Extended {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Extended(self.0 + rhs.0)
    }
}

impl Sub for Extended {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Extended(self.0 - rhs.0)
    }
}

impl Mul for Extended {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Extended(self.0 * rhs.0)
    }
}

impl Neg for Extended {
    type Output = Self;
    fn neg(self) -> Self {
        Extended(-self.0)
    }
}

impl Real for Extended {
    type Context = ExtendedContext;

    fn from_f64(x: f64, ctx: ExtendedContext) -> Self {
        // f64 -> FBig is exact for every finite value.
        let v = FBig::<HalfEven, 2>::try_from(x).expect("finite f64");
        Extended(v.with_precision(ctx.bits).value())
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }
    fn sqrt(&self) -> Self {
        Extended(self.0.sqrt())
    }
    fn abs(&self) -> Self {
        if self.0 < FBig::<HalfEven, 2>::ZERO {
            Extended(-self.0.clone())
        } else {
            self.clone()
        }
    }
    fn div(&self, rhs: &Self) -> Self {
        Extended(&self.0 / &rhs.0)
    }
    fn pivot_tolerance(ctx: ExtendedContext) -> f64 {
        10f64.powi(-(ctx.digits as i32 - 3))
    }
}

/// Precision selector shared by the configuration layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Precision {
    Double,
    Extended { digits: u32 },
}

impl Default for Precision {
    fn default() -> Self {
        Precision::Double
    }
}

/// Complex number over any [`Real`].
#[derive(Debug, Clone, PartialEq)]
pub struct Cx<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Cx<R> {
    pub fn new(re: R, im: R) -> Self {
        Cx { re, im }
    }

    pub fn zero(ctx: R::Context) -> Self {
        Cx::new(R::from_f64(0.0, ctx), R::from_f64(0.0, ctx))
    }

    pub fn from_c64(z: Complex64, ctx: R::Context) -> Self {
        Cx::new(R::from_f64(z.re, ctx), R::from_f64(z.im, ctx))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn conj(&self) -> Self {
        Cx::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> R {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Cx::new(
            self.re.clone() + rhs.re.clone(),
            self.im.clone() + rhs.im.clone(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Cx::new(
            self.re.clone() - rhs.re.clone(),
            self.im.clone() - rhs.im.clone(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Cx::new(
            self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone(),
            self.re.clone() * rhs.im.clone() + self.im.clone() * rhs.re.clone(),
        )
    }

    /// `self * conj(rhs)`
    pub fn mul_conj(&self, rhs: &Self) -> Self {
        Cx::new(
            self.re.clone() * rhs.re.clone() + self.im.clone() * rhs.im.clone(),
            self.im.clone() * rhs.re.clone() - self.re.clone() * rhs.im.clone(),
        )
    }

    pub fn scale(&self, s: &R) -> Self {
        Cx::new(self.re.clone() * s.clone(), self.im.clone() * s.clone())
    }

    pub fn div_real(&self, s: &R) -> Self {
        Cx::new(self.re.div(s), self.im.div(s))
    }
}

/// Neumaier-compensated accumulator over any [`Real`].
#[derive(Debug, Clone)]
pub struct CompensatedSum<R> {
    sum: R,
    comp: R,
}

impl<R: Real> CompensatedSum<R> {
    pub fn new(ctx: R::Context) -> Self {
        CompensatedSum {
            sum: R::from_f64(0.0, ctx),
            comp: R::from_f64(0.0, ctx),
        }
    }

    pub fn add(&mut self, x: R) {
        let t = self.sum.clone() + x.clone();
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp.clone() + ((self.sum.clone() - t.clone()) + x);
        } else {
            self.comp = self.comp.clone() + ((x - t.clone()) + self.sum.clone());
        }
        self.sum = t;
    }

    pub fn value(&self) -> R {
        self.sum.clone() + self.comp.clone()
    }
}

/// Compensated accumulator for complex values.
#[derive(Debug, Clone)]
pub struct CompensatedCx<R> {
    re: CompensatedSum<R>,
    im: CompensatedSum<R>,
}

impl<R: Real> CompensatedCx<R> {
    pub fn new(ctx: R::Context) -> Self {
        CompensatedCx {
            re: CompensatedSum::new(ctx),
            im: CompensatedSum::new(ctx),
        }
    }

    pub fn add(&mut self, z: Cx<R>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Cx<R> {
        Cx::new(self.re.value(), self.im.value())
    }
}

/// Compensated sum of `f64` values in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::<f64>::new(());
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Compensated sum of complex values in iteration order.
pub fn compensated_sum_c64<I: IntoIterator<Item = Complex64>>(values: I) -> Complex64 {
    let mut acc = CompensatedCx::<f64>::new(());
    for v in values {
        acc.add(Cx::new(v.re, v.im));
    }
    acc.value().to_c64()
}
