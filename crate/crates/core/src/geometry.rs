//! Curves carrying the measure and their quadrature discretization.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::compensated_sum;
use crate::quadrature::{gauss_legendre, integrate};

/// Serializable description of a built-in or user-supplied support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveDescriptor {
    Interval { a: f64, b: f64 },
    Cross { a: f64, b: f64 },
    ArcCircle { a: f64 },
    Drop,
    Spiral,
    Circle,
    Polyline { vertices: Vec<[f64; 2]> },
}

impl CurveDescriptor {
    pub const KINDS: [&'static str; 7] = [
        "interval", "cross", "arc_circle", "drop", "spiral", "circle", "polyline",
    ];

    pub fn kind_name(&self) -> &'static str {
        match self {
            CurveDescriptor::Interval { .. } => "interval",
            CurveDescriptor::Cross { .. } => "cross",
            CurveDescriptor::ArcCircle { .. } => "arc_circle",
            CurveDescriptor::Drop => "drop",
            CurveDescriptor::Spiral => "spiral",
            CurveDescriptor::Circle => "circle",
            CurveDescriptor::Polyline { .. } => "polyline",
        }
    }

    /// Checks parameter ranges without building the curve.
    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match *self {
            CurveDescriptor::Interval { a, b } => {
                if !finite(&[a, b]) || a >= b {
                    return Err(Error::InvalidCurve("interval requires a < b".into()));
                }
            }
            CurveDescriptor::Cross { a, b } => {
                if !finite(&[a, b]) || a <= 0.0 || b <= 0.0 {
                    return Err(Error::InvalidCurve(
                        "cross requires positive arm lengths a, b".into(),
                    ));
                }
            }
            CurveDescriptor::ArcCircle { a } => {
                if !a.is_finite() || a <= 1.0 {
                    return Err(Error::InvalidCurve("arc_circle requires a > 1".into()));
                }
            }
            CurveDescriptor::Polyline { ref vertices } => {
                if vertices.len() < 2 {
                    return Err(Error::InvalidCurve(
                        "polyline requires at least two vertices".into(),
                    ));
                }
                if !vertices.iter().all(|v| finite(v)) {
                    return Err(Error::InvalidCurve("polyline vertices must be finite".into()));
                }
            }
            CurveDescriptor::Drop | CurveDescriptor::Spiral | CurveDescriptor::Circle => {}
        }
        Ok(())
    }
}

/// Compact textual form, e.g. `cross:1,1`, `interval:-1,1`, `arc_circle:2`,
/// `drop`, `polyline:0,0;1,0;1,1`.
impl FromStr for CurveDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = match s.split_once(':') {
            Some((k, a)) => (k.trim(), a.trim()),
            None => (s.trim(), ""),
        };
        let nums = |text: &str| -> Result<Vec<f64>> {
            text.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidCurve(format!("bad number `{t}`")))
                })
                .collect()
        };
        let pair = |text: &str| -> Result<(f64, f64)> {
            match nums(text)?.as_slice() {
                [a, b] => Ok((*a, *b)),
                _ => Err(Error::InvalidCurve(format!("`{kind}` expects two parameters"))),
            }
        };
        let desc = match kind {
            "interval" => {
                let (a, b) = pair(args)?;
                CurveDescriptor::Interval { a, b }
            }
            "cross" => {
                let (a, b) = pair(args)?;
                CurveDescriptor::Cross { a, b }
            }
            "arc_circle" => match nums(args)?.as_slice() {
                [a] => CurveDescriptor::ArcCircle { a: *a },
                _ => return Err(Error::InvalidCurve("`arc_circle` expects one parameter".into())),
            },
            "drop" => CurveDescriptor::Drop,
            "spiral" => CurveDescriptor::Spiral,
            "circle" => CurveDescriptor::Circle,
            "polyline" => {
                let vertices = args
                    .split(';')
                    .map(|v| pair(v).map(|(x, y)| [x, y]))
                    .collect::<Result<Vec<_>>>()?;
                CurveDescriptor::Polyline { vertices }
            }
            other => return Err(Error::UnknownCurveKind(other.to_string())),
        };
        desc.validate()?;
        Ok(desc)
    }
}

impl fmt::Display for CurveDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveDescriptor::Interval { a, b } => write!(f, "interval:{a},{b}"),
            CurveDescriptor::Cross { a, b } => write!(f, "cross:{a},{b}"),
            CurveDescriptor::ArcCircle { a } => write!(f, "arc_circle:{a}"),
            CurveDescriptor::Polyline { vertices } => {
                write!(f, "polyline:")?;
                for (i, v) in vertices.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{},{}", v[0], v[1])?;
                }
                Ok(())
            }
            other => f.write_str(other.kind_name()),
        }
    }
}

/// Shape of a smooth piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Path {
    /// `z(t) = origin + t * direction`
    Line { origin: Complex64, direction: Complex64 },
    /// `z(t) = center + radius * e^{it}`
    Circle { center: Complex64, radius: f64 },
    /// `z(t) = e^{2it} / (1 + 2 e^{it})`
    Drop,
    /// `z(t) = t e^{it} / 6`
    Spiral,
}

/// A smooth parametric piece `t -> z(t)` on `[t0, t1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub path: Path,
    pub t0: f64,
    pub t1: f64,
}

impl Segment {
    pub fn point(&self, t: f64) -> Complex64 {
        match self.path {
            Path::Line { origin, direction } => origin + direction * t,
            Path::Circle { center, radius } => center + Complex64::from_polar(radius, t),
            Path::Drop => {
                let e = Complex64::cis(t);
                e * e / (1.0 + 2.0 * e)
            }
            Path::Spiral => Complex64::cis(t) * (t / 6.0),
        }
    }

    pub fn derivative(&self, t: f64) -> Complex64 {
        let i = Complex64::i();
        match self.path {
            Path::Line { direction, .. } => direction,
            Path::Circle { radius, .. } => i * Complex64::from_polar(radius, t),
            Path::Drop => {
                let e = Complex64::cis(t);
                let den = 1.0 + 2.0 * e;
                i * e * e * (2.0 + 2.0 * e) / (den * den)
            }
            Path::Spiral => Complex64::cis(t) * Complex64::new(1.0, t) / 6.0,
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(self.t0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(self.t1)
    }
}

/// A support Γ: a Jordan arc or a finite union of arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub descriptor: CurveDescriptor,
    pub segments: Vec<Segment>,
}

fn line(origin: Complex64, direction: Complex64, t0: f64, t1: f64) -> Segment {
    Segment {
        path: Path::Line { origin, direction },
        t0,
        t1,
    }
}

/// Builds the parametrized curve for a descriptor.
pub fn build_curve(desc: &CurveDescriptor) -> Result<Curve> {
    desc.validate()?;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    let segments = match *desc {
        CurveDescriptor::Interval { a, b } => vec![line(zero, one, a, b)],
        // Four arms from the centre outwards: +real, +imag, -real, -imag.
        CurveDescriptor::Cross { a, b } => vec![
            line(zero, one, 0.0, a),
            line(zero, i, 0.0, b),
            line(zero, -one, 0.0, a),
            line(zero, -i, 0.0, b),
        ],
        CurveDescriptor::ArcCircle { a } => {
            let half_gap = 2.0 * (1.0 / a).asin();
            vec![Segment {
                path: Path::Circle { center: zero, radius: 1.0 },
                t0: half_gap,
                t1: TAU - half_gap,
            }]
        }
        CurveDescriptor::Drop => vec![Segment { path: Path::Drop, t0: 0.0, t1: PI }],
        CurveDescriptor::Spiral => vec![Segment { path: Path::Spiral, t0: 0.0, t1: TAU }],
        CurveDescriptor::Circle => vec![Segment {
            path: Path::Circle { center: zero, radius: 1.0 },
            t0: 0.0,
            t1: TAU,
        }],
        CurveDescriptor::Polyline { ref vertices } => {
            let mut segs = Vec::with_capacity(vertices.len() - 1);
            for (k, w) in vertices.windows(2).enumerate() {
                let p = Complex64::new(w[0][0], w[0][1]);
                let q = Complex64::new(w[1][0], w[1][1]);
                if p == q {
                    return Err(Error::DegenerateSegment { segment: k });
                }
                segs.push(line(p, q - p, 0.0, 1.0));
            }
            segs
        }
    };
    Ok(Curve {
        descriptor: desc.clone(),
        segments,
    })
}

/// Weighted nodes approximating a probability measure on a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedMeasure {
    pub nodes: Vec<Complex64>,
    pub weights: Vec<f64>,
    pub nodes_per_segment: Vec<usize>,
    pub rule: &'static str,
}

impl DiscretizedMeasure {
    /// Builds a measure from raw positive weights, normalizing them to unit mass.
    pub fn from_weighted_nodes(nodes: Vec<Complex64>, raw: Vec<f64>) -> Result<Self> {
        if nodes.len() != raw.len() {
            return Err(Error::SizeMismatch {
                what: "weights",
                expected: nodes.len(),
                got: raw.len(),
            });
        }
        if raw.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter("weights must be positive and finite".into()));
        }
        let total = compensated_sum(raw.iter().copied());
        if !(total > 0.0) {
            return Err(Error::ZeroMass(total));
        }
        let weights = raw.iter().map(|w| w / total).collect();
        let count = nodes.len();
        Ok(DiscretizedMeasure {
            nodes,
            weights,
            nodes_per_segment: vec![count],
            rule: "user",
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.weights.iter().copied())
    }

    /// `Σ w_i z_i^j conj(z_i)^k`, compensated, in node order.
    pub fn moment(&self, j: u32, k: u32) -> Complex64 {
        crate::precision::compensated_sum_c64(
            self.nodes
                .iter()
                .zip(&self.weights)
                .map(|(z, w)| z.powu(j) * z.conj().powu(k) * *w),
        )
    }
}

/// Default number of quadrature nodes per segment for a section of size `n`.
pub fn default_nodes_per_segment(n: usize) -> usize {
    (8 * n).max(128)
}

/// Gauss–Legendre discretization of the normalized arc-length measure.
pub fn discretize_measure(curve: &Curve, nodes_per_segment: usize) -> Result<DiscretizedMeasure> {
    if nodes_per_segment < 2 {
        return Err(Error::InvalidParameter("nodes_per_segment must be at least 2".into()));
    }
    if let CurveDescriptor::ArcCircle { .. } = curve.descriptor {
        return Err(Error::NoDiscretization("arc_circle"));
    }
    let (x, w) = gauss_legendre(nodes_per_segment);
    let total_nodes = nodes_per_segment * curve.segments.len();
    let mut nodes = Vec::with_capacity(total_nodes);
    let mut raw = Vec::with_capacity(total_nodes);
    for (k, seg) in curve.segments.iter().enumerate() {
        let half = 0.5 * (seg.t1 - seg.t0);
        let mid = 0.5 * (seg.t1 + seg.t0);
        let start = raw.len();
        for (xi, wi) in x.iter().zip(&w) {
            let t = mid + half * xi;
            nodes.push(seg.point(t));
            raw.push(wi * half * seg.derivative(t).norm());
        }
        if raw[start..].iter().all(|&v| v == 0.0) {
            return Err(Error::DegenerateSegment { segment: k });
        }
    }
    let total = compensated_sum(raw.iter().copied());
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::ZeroMass(total));
    }
    // Isolated zero-speed nodes would carry zero weight; the rule never
    // samples endpoints, so every weight stays strictly positive.
    let weights: Vec<f64> = raw.iter().map(|v| v / total).collect();
    if let Some(k) = weights.iter().position(|w| !(*w > 0.0)) {
        return Err(Error::DegenerateSegment {
            segment: k / nodes_per_segment,
        });
    }
    Ok(DiscretizedMeasure {
        nodes,
        weights,
        nodes_per_segment: vec![nodes_per_segment; curve.segments.len()],
        rule: "gauss-legendre",
    })
}

/// Total arc length, segment by segment, to relative accuracy 1e-10 or better.
pub fn arc_length(curve: &Curve) -> Result<f64> {
    let mut parts = Vec::with_capacity(curve.segments.len());
    for seg in &curve.segments {
        let len = match seg.path {
            Path::Line { direction, .. } => direction.norm() * (seg.t1 - seg.t0),
            _ => integrate(|t| seg.derivative(t).norm(), seg.t0, seg.t1, 1e-13)?,
        };
        parts.push(len);
    }
    Ok(compensated_sum(parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(s: &str) -> Curve {
        build_curve(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn interval_is_identity_parametrization() {
        let c = curve("interval:-1,1");
        assert_eq!(c.segments.len(), 1);
        let s = c.segments[0];
        assert_eq!((s.t0, s.t1), (-1.0, 1.0));
        assert_eq!(s.point(0.25), Complex64::new(0.25, 0.0));
    }

    #[test]
    fn cross_has_four_unit_arms() {
        let c = curve("cross:1,1");
        assert_eq!(c.segments.len(), 4);
        for s in &c.segments {
            assert_eq!(s.start(), Complex64::new(0.0, 0.0));
            assert!((s.end().norm() - 1.0).abs() < 1e-15);
        }
        assert!((arc_length(&c).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn spiral_endpoint() {
        let c = curve("spiral");
        let end = c.segments[0].end();
        assert!((end.re - TAU / 6.0).abs() < 1e-14);
        assert!(end.im.abs() < 1e-14);
        assert!((end.re - 1.0471975511965976).abs() < 1e-12);
    }

    #[test]
    fn drop_endpoints() {
        let c = curve("drop");
        let s = c.segments[0];
        assert!((s.start() - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((s.end() - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for name in ["drop", "spiral", "circle", "arc_circle:2", "cross:2,0.5"] {
            let c = curve(name);
            for s in &c.segments {
                for k in 1..10 {
                    let t = s.t0 + (s.t1 - s.t0) * k as f64 / 10.0;
                    let h = 1e-6;
                    let fd = (s.point(t + h) - s.point(t - h)) / (2.0 * h);
                    assert!((fd - s.derivative(t)).norm() < 1e-8, "{name} at t={t}");
                }
            }
        }
    }

    #[test]
    fn arc_circle_endpoints_for_a2() {
        let c = curve("arc_circle:2");
        let s = c.segments[0];
        assert!((s.start() - Complex64::from_polar(1.0, PI / 3.0)).norm() < 1e-14);
        assert!((s.point(PI) + 1.0).norm() < 1e-15);
    }

    #[test]
    fn descriptor_errors() {
        assert!(matches!(
            "interval:1,-1".parse::<CurveDescriptor>(),
            Err(Error::InvalidCurve(m)) if m == "interval requires a < b"
        ));
        assert!(matches!(
            "cross:0,1".parse::<CurveDescriptor>(),
            Err(Error::InvalidCurve(_))
        ));
        assert!(matches!(
            "lemniscate".parse::<CurveDescriptor>(),
            Err(Error::UnknownCurveKind(k)) if k == "lemniscate"
        ));
        assert!(build_curve(&CurveDescriptor::ArcCircle { a: 1.0 }).is_err());
    }

    #[test]
    fn degenerate_polyline_segment() {
        let d = CurveDescriptor::Polyline {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 0.0]],
        };
        assert_eq!(build_curve(&d), Err(Error::DegenerateSegment { segment: 1 }));
    }

    #[test]
    fn descriptor_display_round_trips() {
        for s in ["interval:-1,1", "cross:1,2", "arc_circle:2", "drop", "polyline:0,0;1,0;1,1"] {
            let d: CurveDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
    }

    #[test]
    fn interval_measure_mass_and_mean() {
        let m = discretize_measure(&curve("interval:-1,1"), 64).unwrap();
        assert!((m.total_mass() - 1.0).abs() < 1e-14);
        assert!(m.moment(1, 0).norm() < 1e-14);
        assert!((m.moment(1, 1).re - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn cross_second_moment() {
        let m = discretize_measure(&curve("cross:1,1"), 64).unwrap();
        assert!((m.moment(1, 1) - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn circle_characters_vanish() {
        let m = discretize_measure(&curve("circle"), 128).unwrap();
        for j in 1..=8 {
            assert!(m.moment(j, 0).norm() < 1e-12, "j={j}");
        }
    }

    #[test]
    fn arc_circle_has_no_discretization() {
        let c = curve("arc_circle:2");
        assert_eq!(
            discretize_measure(&c, 64),
            Err(Error::NoDiscretization("arc_circle"))
        );
    }

    #[test]
    fn node_ordering_is_segment_major() {
        let m = discretize_measure(&curve("cross:1,1"), 8).unwrap();
        assert_eq!(m.nodes_per_segment, vec![8; 4]);
        // first arm real positive, increasing
        assert!(m.nodes[..8].iter().all(|z| z.im == 0.0 && z.re > 0.0));
        assert!(m.nodes[..8].windows(2).all(|p| p[0].re < p[1].re));
        // second arm imaginary positive
        assert!(m.nodes[8..16].iter().all(|z| z.re == 0.0 && z.im > 0.0));
    }

    #[test]
    fn drop_arc_length_stable_under_doubling() {
        let c = curve("drop");
        let l = arc_length(&c).unwrap();
        let s = c.segments[0];
        let fixed = |n: usize| {
            let (x, w) = gauss_legendre(n);
            let h = 0.5 * (s.t1 - s.t0);
            compensated_sum(
                x.iter()
                    .zip(&w)
                    .map(|(x, w)| w * h * s.derivative(s.t0 + h * (x + 1.0)).norm()),
            )
        };
        let (coarse, fine) = (fixed(256), fixed(512));
        assert!((coarse - fine).abs() < 1e-8 * fine);
        assert!(l > 0.0 && l.is_finite());
        assert!((l - fine).abs() < 1e-8 * l);
    }

    #[test]
    fn spiral_arc_length_closed_form() {
        let t = TAU;
        let exact = (t * (1.0 + t * t).sqrt() + t.asinh()) / 12.0;
        let l = arc_length(&curve("spiral")).unwrap();
        assert!((l - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn user_weighted_nodes_are_normalized() {
        let m = DiscretizedMeasure::from_weighted_nodes(
            vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
            vec![3.0, 1.0],
        )
        .unwrap();
        assert_eq!(m.weights, vec![0.75, 0.25]);
        assert!(DiscretizedMeasure::from_weighted_nodes(vec![Complex64::new(0.0, 0.0)], vec![0.0]).is_err());
    }
}
