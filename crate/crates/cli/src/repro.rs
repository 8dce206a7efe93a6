//! Named reproduction recipes.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use hessmap::{
    approximant, boundary_image, build_curve, sup_difference, theta_norms, Complex64,
    CurveDescriptor, DiagonalLimits, Precision, ReferenceMap,
};
use serde::Serialize;

use crate::config::{Method, Quadrature, RunConfig, DEFAULT_SAMPLES, DEFAULT_SVG_POINTS};
use crate::emit::{self, num};
use crate::run::build_section;
use crate::tables::{arc_error_constant, cross_section_9, ARC_THRESHOLDS, CROSS_THETA};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recipe {
    ArcTable,
    Cross9x9,
    CrossTheta,
    DropBoundary,
    SpiralBoundary,
}

impl Recipe {
    pub const ALL: [Recipe; 5] = [
        Recipe::ArcTable,
        Recipe::Cross9x9,
        Recipe::CrossTheta,
        Recipe::DropBoundary,
        Recipe::SpiralBoundary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Recipe::ArcTable => "arc-table",
            Recipe::Cross9x9 => "cross-9x9",
            Recipe::CrossTheta => "cross-theta",
            Recipe::DropBoundary => "drop-boundary",
            Recipe::SpiralBoundary => "spiral-boundary",
        }
    }
}

impl FromStr for Recipe {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Recipe::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Recipe::ALL.iter().map(|r| r.name()).collect();
                anyhow!("unknown recipe {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproReport {
    pub recipe: &'static str,
    pub config_hash: String,
    pub files: Vec<PathBuf>,
    pub summary: serde_json::Value,
}

fn config(curve: CurveDescriptor, n: usize, precision: Precision) -> RunConfig {
    RunConfig {
        curve,
        n,
        quadrature: Quadrature::default(),
        precision,
        method: None,
        reference: None,
        window: None,
        samples: DEFAULT_SAMPLES,
        outputs: Vec::new(),
    }
}

/// Runs a recipe; `precision` only affects `cross-theta`.
pub fn run_recipe(recipe: Recipe, out_dir: &Path, precision: Precision) -> Result<ReproReport> {
    match recipe {
        Recipe::ArcTable => arc_table(out_dir),
        Recipe::Cross9x9 => cross_9x9(out_dir),
        Recipe::CrossTheta => cross_theta(out_dir, precision),
        Recipe::DropBoundary => boundaries(recipe, CurveDescriptor::Drop, &[5, 8, 11], out_dir),
        Recipe::SpiralBoundary => boundaries(recipe, CurveDescriptor::Spiral, &[7, 11], out_dir),
    }
}

fn arc_table(out_dir: &Path) -> Result<ReproReport> {
    let a = 2.0;
    let size = 61;
    let cfg = config(CurveDescriptor::ArcCircle { a }, size, Precision::Double);
    let hash = cfg.hash();
    let d = build_section(&cfg)?.d;
    let phi = ReferenceMap::Arc { a };
    let limits = DiagonalLimits::analytic(phi, size)?;
    let t = theta_norms(&d, &limits)?;
    let rho = 3f64.sqrt() / 2.0;

    let mut sups = Vec::with_capacity(size - 1);
    let mut rows = Vec::with_capacity(size - 1);
    for n in 1..size {
        let h = approximant(&d, n)?;
        let s = sup_difference(&h, &phi, 1.0, DEFAULT_SAMPLES)?.sup;
        sups.push(s);
        rows.push(vec![
            n.to_string(),
            num(s),
            num(arc_error_constant() * rho.powi(n as i32)),
            num(t.theta2[n - 1]),
            num(t.theta1[n - 1]),
        ]);
    }
    let table = out_dir.join("arc_table.csv");
    emit::write_file(
        &table,
        &emit::csv_table(&hash, &["n", "sup_error", "bound", "theta2", "theta1"], rows),
    )?;

    let first = |eps: f64| (1..size).find(|&n| sups[n - 1..].iter().all(|s| *s < eps));
    let thresholds: Vec<(f64, usize, Option<usize>)> = ARC_THRESHOLDS
        .iter()
        .map(|&(eps, listed)| (eps, listed, first(eps)))
        .collect();
    let thr = out_dir.join("arc_thresholds.csv");
    emit::write_file(
        &thr,
        &emit::csv_table(
            &hash,
            &["epsilon", "first_n", "listed_n"],
            thresholds.iter().map(|(e, l, f)| {
                vec![num(*e), f.map(|f| f.to_string()).unwrap_or_default(), l.to_string()]
            }),
        ),
    )?;
    let bound_ok = (5..size).all(|n| sups[n - 1] <= arc_error_constant() * rho.powi(n as i32));
    Ok(ReproReport {
        recipe: Recipe::ArcTable.name(),
        config_hash: hash,
        files: vec![table, thr],
        summary: serde_json::json!({
            "bound_holds_5_to_60": bound_ok,
            "thresholds": thresholds
                .iter()
                .map(|(e, l, f)| serde_json::json!({"epsilon": e, "listed_n": l, "first_n": f}))
                .collect::<Vec<_>>(),
        }),
    })
}

fn cross_9x9(out_dir: &Path) -> Result<ReproReport> {
    let cfg = config(CurveDescriptor::Cross { a: 1.0, b: 1.0 }, 9, Precision::Double);
    let hash = cfg.hash();
    let d = build_section(&cfg)?.d;
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    let mut mismatches = Vec::new();
    for i in 1..=9 {
        for j in 1..=9 {
            let v = d.get(i, j);
            let listed = cross_section_9(i, j);
            let diff = (v - listed).norm();
            worst = worst.max(diff);
            if diff > 1e-8 {
                mismatches.push(serde_json::json!({"i": i, "j": j, "computed": v.re, "listed": listed}));
            }
            rows.push(vec![
                i.to_string(),
                j.to_string(),
                num(v.re),
                num(v.im),
                num(listed),
                num(diff),
            ]);
        }
    }
    let path = out_dir.join("cross_9x9.csv");
    emit::write_file(
        &path,
        &emit::csv_table(&hash, &["i", "j", "re", "im", "listed", "abs_diff"], rows),
    )?;
    Ok(ReproReport {
        recipe: Recipe::Cross9x9.name(),
        config_hash: hash,
        files: vec![path],
        summary: serde_json::json!({ "max_abs_diff": worst, "mismatches_over_1e-8": mismatches }),
    })
}

fn cross_theta(out_dir: &Path, precision: Precision) -> Result<ReproReport> {
    let size = CROSS_THETA.last().map(|r| r.0).unwrap_or(0) + 1;
    let mut cfg = config(CurveDescriptor::Cross { a: 1.0, b: 1.0 }, size, precision);
    if matches!(precision, Precision::Extended { .. }) {
        cfg.method = Some(Method::Moments);
    }
    let hash = cfg.hash();
    let d = build_section(&cfg)?.d;
    let limits = DiagonalLimits::analytic(ReferenceMap::Cross { a: 1.0, b: 1.0 }, size)?;
    let t = theta_norms(&d, &limits)?;
    let (mut w2, mut w1): (f64, f64) = (0.0, 0.0);
    let rows: Vec<Vec<String>> = CROSS_THETA
        .iter()
        .map(|&(n, big, small)| {
            let (a, b) = (t.theta2[n - 1], t.theta1[n - 1]);
            w2 = w2.max((a - big).abs());
            w1 = w1.max((b - small).abs());
            vec![
                n.to_string(),
                num(a),
                num(b),
                num(big),
                num(small),
                num((a - big).abs()),
                num((b - small).abs()),
            ]
        })
        .collect();
    let path = out_dir.join("cross_theta.csv");
    emit::write_file(
        &path,
        &emit::csv_table(
            &hash,
            &["n", "theta2", "theta1", "listed_theta2", "listed_theta1", "diff2", "diff1"],
            rows,
        ),
    )?;
    Ok(ReproReport {
        recipe: Recipe::CrossTheta.name(),
        config_hash: hash,
        files: vec![path],
        summary: serde_json::json!({
            "pipeline": cfg.pipeline()?,
            "max_abs_diff_theta2": w2,
            "max_abs_diff_theta1": w1,
        }),
    })
}

/// Curve samples equally spaced in each segment's parameter.
fn curve_points(desc: &CurveDescriptor, per_segment: usize) -> Result<Vec<Complex64>> {
    let curve = build_curve(desc)?;
    Ok(curve
        .segments
        .iter()
        .flat_map(|s| {
            (0..=per_segment).map(move |k| {
                let t = s.t0 + (s.t1 - s.t0) * k as f64 / per_segment as f64;
                s.point(t)
            })
        })
        .collect())
}

fn boundaries(recipe: Recipe, curve: CurveDescriptor, columns: &[usize], out_dir: &Path) -> Result<ReproReport> {
    let size = columns.iter().max().context("no columns")? + 1;
    let cfg = config(curve.clone(), size, Precision::Double);
    let hash = cfg.hash();
    let d = build_section(&cfg)?.d;
    let stem = curve.kind_name();
    let mut files = Vec::new();
    let mut svg_curves = vec![(stem.to_string(), curve_points(&curve, DEFAULT_SVG_POINTS)?)];
    let mut maxima = Vec::new();
    for &n in columns {
        let h = approximant(&d, n)?;
        let pts = boundary_image(&h, DEFAULT_SAMPLES, 1.0)?;
        if pts.iter().any(|(_, z)| !z.is_finite()) {
            bail!("non-finite boundary value for h_{n}");
        }
        let path = out_dir.join(format!("{stem}_boundary_h{n}.csv"));
        emit::write_file(&path, &emit::boundary_csv(&hash, &pts))?;
        files.push(path);
        let svg_pts = boundary_image(&h, DEFAULT_SVG_POINTS, 1.0)?;
        svg_curves.push((format!("h_{n}"), svg_pts.into_iter().map(|p| p.1).collect()));
        maxima.push(serde_json::json!({
            "n": n,
            "max_modulus": pts.iter().map(|p| p.1.norm()).fold(0.0, f64::max),
            "capacity_coefficient": h.c1.re,
        }));
    }
    let curve_csv = out_dir.join(format!("{stem}_curve.csv"));
    emit::write_file(
        &curve_csv,
        &emit::csv_table(
            &hash,
            &["re", "im"],
            svg_curves[0].1.iter().map(|z| vec![num(z.re), num(z.im)]),
        ),
    )?;
    files.push(curve_csv);
    let svg = out_dir.join(format!("{stem}_boundary.svg"));
    emit::write_file(&svg, &emit::svg(&hash, &svg_curves))?;
    files.push(svg);
    Ok(ReproReport {
        recipe: recipe.name(),
        config_hash: hash,
        files,
        summary: serde_json::json!({ "columns": maxima }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recipe_names_round_trip() {
        for r in Recipe::ALL {
            assert_eq!(r.name().parse::<Recipe>().unwrap(), r);
        }
        assert!("figure-9".parse::<Recipe>().is_err());
    }

    #[test]
    fn arc_thresholds_met() {
        let dir = tempfile::tempdir().unwrap();
        let r = run_recipe(Recipe::ArcTable, dir.path(), Precision::Double).unwrap();
        assert_eq!(r.summary["bound_holds_5_to_60"], true);
        for t in r.summary["thresholds"].as_array().unwrap() {
            assert!(t["first_n"].as_u64().unwrap() <= t["listed_n"].as_u64().unwrap(), "{t}");
        }
    }

    #[test]
    fn cross_9x9_flags_single_entry() {
        let dir = tempfile::tempdir().unwrap();
        let r = run_recipe(Recipe::Cross9x9, dir.path(), Precision::Double).unwrap();
        let m = r.summary["mismatches_over_1e-8"].as_array().unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!((m[0]["i"].as_u64(), m[0]["j"].as_u64()), (Some(2), Some(5)));
        let exact = 2.0 * 3f64.sqrt() / 7.0;
        assert!((m[0]["computed"].as_f64().unwrap() - exact).abs() < 1e-12);
    }
}
