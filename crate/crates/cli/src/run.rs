//! Executes a configuration: curve, measure, section, diagnostics, maps and
//! emitted files, in that order.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use hessmap::{
    approximant, boundary_image, build_curve, capacity_estimate, closed_form_arc_hessenberg,
    discretize_measure, equipotential_grid, estimate_diagonal_limits, hessenberg_arnoldi,
    hessenberg_from_moments, moment_matrix, moment_matrix_extended, sup_difference, theta_norms,
    verify_recurrence, DiagonalLimits, DiscretizedMeasure, ErrorBound, HessenbergSection,
    ReferenceMap, ToeplitzDiagnostics,
};
use serde::Serialize;

use crate::config::{Format, OutputKind, Params, Pipeline, RunConfig};
use crate::emit;

/// Analytic limits carry this many coefficients per section column, so the
/// truncated coefficient tail is well resolved.
const ANALYTIC_DEPTH_FACTOR: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub version: &'static str,
    pub config_hash: String,
    pub curve: String,
    pub n: usize,
    pub pipeline: Pipeline,
    pub timings: Vec<StageTiming>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recurrence_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capacity: Option<CapacityRecord>,
    pub sup_differences: Vec<SupRecord>,
    pub outputs: Vec<OutputRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageTiming {
    pub stage: &'static str,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CapacityRecord {
    pub window: usize,
    pub estimate: f64,
    pub trace: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_error: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SupRecord {
    pub column: usize,
    pub radius: f64,
    pub samples: usize,
    pub sup: f64,
    pub theta_at_max: f64,
    /// A-priori bound from the column deviation data, when limits are analytic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    /// Lipschitz constant of the approximant on the unit circle.
    pub modulus_of_continuity: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub kind: &'static str,
    pub path: PathBuf,
    pub rows: usize,
}

struct Stages {
    timings: Vec<StageTiming>,
}

impl Stages {
    fn run<T>(&mut self, stage: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f().with_context(|| format!("stage {stage}"));
        self.timings.push(StageTiming {
            stage,
            seconds: start.elapsed().as_secs_f64(),
        });
        out
    }
}

/// Output of the section stage.
pub struct Section {
    pub d: HessenbergSection,
    pub measure: Option<DiscretizedMeasure>,
    pub condition_estimate: Option<f64>,
}

/// Curve, measure and section for a configuration.
pub fn build_section(config: &RunConfig) -> Result<Section> {
    let mut stages = Stages { timings: Vec::new() };
    section_stages(config, &mut stages)
}

fn section_stages(config: &RunConfig, stages: &mut Stages) -> Result<Section> {
    let n = config.n;
    match config.pipeline()? {
        Pipeline::ClosedFormArc { a } => {
            let d = stages.run("hessenberg", || Ok(closed_form_arc_hessenberg(a, n)?))?;
            Ok(Section {
                d,
                measure: None,
                condition_estimate: None,
            })
        }
        Pipeline::Arnoldi { nodes_per_segment } => {
            let curve = stages.run("curve", || Ok(build_curve(&config.curve)?))?;
            let measure =
                stages.run("measure", || Ok(discretize_measure(&curve, nodes_per_segment)?))?;
            let d = stages.run("hessenberg", || Ok(hessenberg_arnoldi(&measure, n)?))?;
            Ok(Section {
                d,
                measure: Some(measure),
                condition_estimate: None,
            })
        }
        Pipeline::Moments {
            nodes_per_segment,
            digits,
        } => {
            let curve = stages.run("curve", || Ok(build_curve(&config.curve)?))?;
            let measure =
                stages.run("measure", || Ok(discretize_measure(&curve, nodes_per_segment)?))?;
            let (d, cond) = stages.run("hessenberg", || {
                Ok(match digits {
                    None => {
                        let m = moment_matrix(&measure, n + 1)?;
                        (hessenberg_from_moments(&m, n, None)?, m.condition_estimate())
                    }
                    Some(digits) => {
                        let m = moment_matrix_extended(&measure, n + 1, digits)?;
                        (hessenberg_from_moments(&m, n, Some(digits))?, m.condition_estimate())
                    }
                })
            })?;
            Ok(Section {
                d,
                measure: Some(measure),
                condition_estimate: Some(cond),
            })
        }
    }
}

/// Limits for diagnostics: analytic when a reference exists, else estimated.
pub fn limits_for(d: &HessenbergSection, reference: Option<ReferenceMap>, window: usize) -> Result<DiagonalLimits> {
    Ok(match reference {
        Some(r) => DiagonalLimits::analytic(r, ANALYTIC_DEPTH_FACTOR * d.size())?,
        None => estimate_diagonal_limits(d, window)?,
    })
}

fn resolve(out_dir: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        out_dir.join(path)
    }
}

/// Runs every stage and writes the requested outputs below `out_dir`.
pub fn run(config: &RunConfig, out_dir: &Path) -> Result<RunReport> {
    config.validate()?;
    let hash = config.hash();
    let reference = config.reference_map()?;
    let mut stages = Stages { timings: Vec::new() };
    let section = section_stages(config, &mut stages)?;
    let d = &section.d;

    let recurrence_residual = match &section.measure {
        Some(m) => Some(stages.run("recurrence", || Ok(verify_recurrence(d, m)?))?),
        None => None,
    };

    let wants = |k: OutputKind| config.outputs.iter().any(|o| o.kind == k);
    let diagnostics: Option<ToeplitzDiagnostics> =
        if wants(OutputKind::Diagnostics) || reference.is_some() {
            Some(stages.run("diagnostics", || {
                let limits = limits_for(d, reference, config.window())?;
                // Estimated limits only reach depth size - window, which covers
                // the columns of the leading block of that size + 1.
                let covered = (limits.dneg.len() + 1).min(d.size());
                Ok(theta_norms(&d.leading(covered)?, &limits)?)
            })?)
        } else {
            None
        };

    let capacity = if reference.is_some() || wants(OutputKind::Capacity) {
        Some(stages.run("capacity", || {
            let window = config
                .outputs
                .iter()
                .enumerate()
                .find(|(_, o)| o.kind == OutputKind::Capacity)
                .map(|(i, _)| match config.params(i) {
                    Ok(Params::Capacity { window }) => Ok(window),
                    Ok(_) => unreachable!("capacity output has capacity params"),
                    Err(e) => Err(e),
                })
                .transpose()?
                .unwrap_or_else(|| config.window());
            let c = capacity_estimate(d, window)?;
            let exact = reference.map(|r| r.capacity());
            Ok(CapacityRecord {
                window,
                estimate: c.value,
                abs_error: exact.map(|e| (c.value - e).abs()),
                reference: exact,
                trace: c.trace,
            })
        })?)
    } else {
        None
    };

    let mut files: Vec<(OutputKind, PathBuf, String, usize)> = Vec::new();
    let mut sup_differences = Vec::new();
    stages.run("maps", || {
        for (i, out) in config.outputs.iter().enumerate() {
            let path = resolve(out_dir, &out.path);
            let (text, rows) = match config.params(i)? {
                Params::Moments { order } => {
                    let measure = section
                        .measure
                        .as_ref()
                        .context("moments output needs a quadrature measure")?;
                    let text = match config.precision {
                        hessmap::Precision::Double => emit::moments_csv(&hash, &moment_matrix(measure, order)?),
                        hessmap::Precision::Extended { digits } => emit::moments_csv(
                            &hash,
                            &moment_matrix_extended(measure, order, digits)?,
                        ),
                    };
                    (text, order)
                }
                Params::Hessenberg => {
                    let text = emit::hessenberg_csv(&hash, d);
                    let rows = text.lines().count() - 2;
                    (text, rows)
                }
                Params::Diagnostics => {
                    let t = diagnostics.as_ref().expect("diagnostics computed");
                    (emit::diagnostics_csv(&hash, t), t.theta2.len())
                }
                Params::Boundary { n, radius, samples } => {
                    let h = approximant(d, n)?;
                    let pts = boundary_image(&h, samples, radius)?;
                    if let Some(r) = reference {
                        let s = sup_difference(&h, &r, radius, config.samples)?;
                        let bound = diagnostics.as_ref().map(|t| {
                            ErrorBound {
                                theta2: t.theta2[n - 1],
                                theta1: t.theta1[n - 1],
                                tail_l2: t.tail_l2[n - 1],
                                tail_l1: t.tail_l1[n - 1],
                            }
                            .at_radius(radius, n)
                        });
                        sup_differences.push(SupRecord {
                            column: n,
                            radius,
                            samples: config.samples,
                            sup: s.sup,
                            theta_at_max: s.theta_at_max,
                            bound,
                            modulus_of_continuity: h.modulus_of_continuity(),
                        });
                    }
                    let text = match out.format {
                        Format::Csv => emit::boundary_csv(&hash, &pts),
                        Format::Svg => emit::svg(
                            &hash,
                            &[(format!("h_{n} r={radius}"), pts.iter().map(|p| p.1).collect())],
                        ),
                    };
                    (text, pts.len())
                }
                Params::Grid { n, radii, samples } => {
                    let h = approximant(d, n)?;
                    let grid = equipotential_grid(&h, &radii, samples)?;
                    let text = match out.format {
                        Format::Csv => emit::grid_csv(&hash, &grid),
                        Format::Svg => emit::svg(
                            &hash,
                            &grid
                                .iter()
                                .map(|e| {
                                    (format!("h_{n} r={}", e.radius), e.points.iter().map(|p| p.1).collect())
                                })
                                .collect::<Vec<_>>(),
                        ),
                    };
                    (text, grid.len() * samples)
                }
                Params::Capacity { window } => {
                    let c = capacity.as_ref().expect("capacity computed");
                    let estimate = if window == c.window {
                        c.estimate
                    } else {
                        capacity_estimate(d, window)?.value
                    };
                    let text = emit::csv_table(
                        &hash,
                        &["window", "estimate", "reference", "abs_error"],
                        [vec![
                            window.to_string(),
                            emit::num(estimate),
                            c.reference.map(emit::num).unwrap_or_default(),
                            c.reference.map(|r| emit::num((estimate - r).abs())).unwrap_or_default(),
                        ]],
                    );
                    (text, 1)
                }
            };
            files.push((out.kind, path, text, rows));
        }
        Ok(())
    })?;

    let outputs = stages.run("emit", || {
        files
            .into_iter()
            .map(|(kind, path, text, rows)| {
                emit::write_file(&path, &text)?;
                Ok(OutputRecord {
                    kind: kind.name(),
                    path,
                    rows,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;

    Ok(RunReport {
        version: emit::VERSION,
        config_hash: hash,
        curve: config.curve.to_string(),
        n: config.n,
        pipeline: config.pipeline()?,
        timings: stages.timings,
        condition_estimate: section.condition_estimate,
        recurrence_residual,
        reference,
        capacity,
        sup_differences,
        outputs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn cross_hessenberg_csv_row() {
        let dir = tempfile::tempdir().unwrap();
        let c = parse_config(
            r#"{"curve":{"kind":"cross","a":1,"b":1},"n":9,
                "outputs":[{"kind":"hessenberg","path":"d.csv"}]}"#,
        )
        .unwrap();
        let report = run(&c, dir.path()).unwrap();
        let text = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();
        assert!(text.starts_with(&format!("# hessmap {} config={}", emit::VERSION, report.config_hash)));
        let row = text.lines().find(|l| l.starts_with("2,1,")).unwrap();
        let f: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((f[2] - 0.57735027).abs() < 1e-8 && f[3].abs() < 1e-12);
        assert!(report.recurrence_residual.unwrap() < 1e-9);
    }

    #[test]
    fn arc_boundary_report() {
        let dir = tempfile::tempdir().unwrap();
        let c = parse_config(
            r#"{"curve":{"kind":"arc_circle","a":2},"n":40,"reference":"arc",
                "outputs":[{"kind":"boundary","path":"h38.csv","params":{"n":38}}]}"#,
        )
        .unwrap();
        let report = run(&c, dir.path()).unwrap();
        let s = &report.sup_differences[0];
        assert_eq!(s.column, 38);
        assert!(s.sup <= 0.01, "{}", s.sup);
        assert!(s.sup <= s.bound.unwrap());
        assert!(report.capacity.unwrap().abs_error.unwrap() < 1e-15);
        assert!(!report.timings.iter().any(|t| t.stage == "measure"));
    }

    #[test]
    fn capacity_outputs_use_their_own_window() {
        let dir = tempfile::tempdir().unwrap();
        let c = parse_config(
            r#"{"curve":{"kind":"cross","a":1,"b":1},"n":40,"reference":"cross",
                "outputs":[{"kind":"capacity","path":"w5.csv","params":{"window":5}},
                           {"kind":"capacity","path":"w8.csv","params":{"window":8}}]}"#,
        )
        .unwrap();
        run(&c, dir.path()).unwrap();
        let err = |name: &str| -> f64 {
            let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
            let row = text.lines().nth(2).unwrap();
            row.rsplit(',').next().unwrap().parse().unwrap()
        };
        // The cross subdiagonals have period 4; a window of 8 averages it out.
        assert!(err("w8.csv") < err("w5.csv"));
        assert!(err("w8.csv") < 1e-4, "{}", err("w8.csv"));
    }

    #[test]
    fn circle_diagnostics_vanish() {
        let dir = tempfile::tempdir().unwrap();
        let c = parse_config(
            r#"{"curve":{"kind":"circle"},"n":8,"reference":"circle",
                "outputs":[{"kind":"diagnostics","path":"t.csv"}]}"#,
        )
        .unwrap();
        run(&c, dir.path()).unwrap();
        let text = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
        for line in text.lines().skip(2) {
            let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            assert!(f[1] < 1e-12, "{line}");
        }
    }

    #[test]
    fn stage_errors_are_annotated() {
        let dir = tempfile::tempdir().unwrap();
        let c = parse_config(
            r#"{"curve":{"kind":"interval","a":-1,"b":1},"n":40,"method":"moments"}"#,
        )
        .unwrap();
        let e = run(&c, dir.path()).unwrap_err();
        assert!(format!("{e:#}").starts_with("stage hessenberg:"), "{e:#}");
    }

    #[test]
    fn outputs_are_deterministic() {
        let doc = r#"{"curve":{"kind":"drop"},"n":12,"outputs":[
            {"kind":"hessenberg","path":"d.csv"},
            {"kind":"boundary","path":"b.csv","params":{"n":11}},
            {"kind":"grid","path":"g.svg","format":"svg","params":{"n":11}},
            {"kind":"moments","path":"m.csv","params":{"order":6}},
            {"kind":"diagnostics","path":"t.csv"},
            {"kind":"capacity","path":"c.csv"}]}"#;
        let c = parse_config(doc).unwrap();
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        run(&c, a.path()).unwrap();
        run(&c, b.path()).unwrap();
        for f in ["d.csv", "b.csv", "g.svg", "m.csv", "t.csv", "c.csv"] {
            let x = std::fs::read(a.path().join(f)).unwrap();
            let y = std::fs::read(b.path().join(f)).unwrap();
            assert_eq!(x, y, "{f}");
        }
    }
}
