//! Run configuration: parsing, defaults and validation.

use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use hessmap::{default_nodes_per_segment, CurveDescriptor, Precision, ReferenceMap};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const DEFAULT_SAMPLES: usize = 4096;
pub const DEFAULT_SVG_POINTS: usize = 720;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub curve: CurveDescriptor,
    /// Size of the Hessenberg section.
    pub n: usize,
    #[serde(default)]
    pub quadrature: Quadrature,
    #[serde(default)]
    pub precision: Precision,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceSpec>,
    /// Averaging window for capacity and limit estimates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub outputs: Vec<OutputSpec>,
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quadrature {
    /// Defaults to `max(128, 8n)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_per_segment: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Arnoldi,
    Moments,
    ClosedForm,
}

/// Either a short name resolved against the curve, or a full map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReferenceSpec {
    Named(String),
    Map(ReferenceMap),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Moments,
    Hessenberg,
    Diagnostics,
    Boundary,
    Grid,
    Capacity,
}

impl OutputKind {
    pub fn name(self) -> &'static str {
        match self {
            OutputKind::Moments => "moments",
            OutputKind::Hessenberg => "hessenberg",
            OutputKind::Diagnostics => "diagnostics",
            OutputKind::Boundary => "boundary",
            OutputKind::Grid => "grid",
            OutputKind::Capacity => "capacity",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub kind: OutputKind,
    pub path: PathBuf,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub params: serde_json::Value,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentParams {
    /// Defaults to `n + 1`.
    pub order: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityParams {
    pub window: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryParams {
    /// Column of the approximant; defaults to `n - 1`.
    pub n: Option<usize>,
    pub radius: Option<f64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    pub n: Option<usize>,
    pub radii: Option<Vec<f64>>,
    pub samples: Option<usize>,
}

/// Output parameters after per-kind parsing.
#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Moments { order: usize },
    Hessenberg,
    Diagnostics,
    Boundary { n: usize, radius: f64, samples: usize },
    Grid { n: usize, radii: Vec<f64>, samples: usize },
    Capacity { window: usize },
}

/// How the section is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "pipeline", rename_all = "snake_case")]
pub enum Pipeline {
    ClosedFormArc { a: f64 },
    Arnoldi { nodes_per_segment: usize },
    Moments { nodes_per_segment: usize, digits: Option<u32> },
}

fn from_value<T: DeserializeOwned>(value: &serde_json::Value, at: &str) -> Result<T> {
    let v = if value.is_null() {
        serde_json::Value::Object(Default::default())
    } else {
        value.clone()
    };
    serde_path_to_error::deserialize(v).map_err(|e| anyhow!("{at}.{}: {}", e.path(), e.inner()))
}

/// Parses and validates a JSON configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    if let Ok(doc) = serde_json::from_str::<serde_json::Value>(text) {
        if let Some(kind) = doc.pointer("/curve/kind").and_then(|k| k.as_str()) {
            if !CurveDescriptor::KINDS.contains(&kind) {
                return Err(hessmap::Error::UnknownCurveKind(kind.to_string())).context("curve.kind");
            }
        }
    }
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            anyhow!("{inner}")
        } else {
            anyhow!("{path}: {inner}")
        }
    })?;
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.curve.validate().context("curve")?;
        if self.n < 2 {
            bail!("n: section size must be at least 2, got {}", self.n);
        }
        if let Precision::Extended { digits } = self.precision {
            if digits < 15 {
                bail!("precision.digits: extended precision needs at least 15 digits, got {digits}");
            }
        }
        if let Some(k) = self.quadrature.nodes_per_segment {
            if k < 2 {
                bail!("quadrature.nodes_per_segment: need at least 2, got {k}");
            }
        }
        if self.samples < 16 {
            bail!("samples: need at least 16, got {}", self.samples);
        }
        if let Some(w) = self.window {
            if w == 0 || w >= self.n {
                bail!("window: must be in 1..{}, got {w}", self.n);
            }
        }
        self.pipeline()?;
        if let Some(r) = self.reference_map()? {
            r.validate().context("reference")?;
        }
        let mut seen = BTreeSet::new();
        for (i, out) in self.outputs.iter().enumerate() {
            if !seen.insert(out.path.clone()) {
                bail!("outputs[{i}].path: conflicting output path {}", out.path.display());
            }
            if out.format == Format::Svg && !matches!(out.kind, OutputKind::Boundary | OutputKind::Grid) {
                bail!("outputs[{i}].format: svg is only available for boundary and grid");
            }
            self.params(i)?;
        }
        Ok(())
    }

    pub fn nodes_per_segment(&self) -> usize {
        self.quadrature
            .nodes_per_segment
            .unwrap_or_else(|| default_nodes_per_segment(self.n))
    }

    /// Default window `max(5, n/8)`, clipped so that limit estimation stays valid.
    pub fn window(&self) -> usize {
        self.window
            .unwrap_or_else(|| 5.max(self.n / 8).min((self.n - 1) / 2).max(1))
    }

    pub fn pipeline(&self) -> Result<Pipeline> {
        let nodes = self.nodes_per_segment();
        let digits = match self.precision {
            Precision::Double => None,
            Precision::Extended { digits } => Some(digits),
        };
        match (&self.curve, self.method) {
            (CurveDescriptor::ArcCircle { a }, None | Some(Method::ClosedForm)) => {
                Ok(Pipeline::ClosedFormArc { a: *a })
            }
            (CurveDescriptor::ArcCircle { .. }, Some(m)) => {
                bail!("method: arc_circle has no quadrature measure, {m:?} is unavailable")
            }
            (_, Some(Method::ClosedForm)) => {
                bail!("method: closed_form is only available for arc_circle")
            }
            (_, Some(Method::Arnoldi)) => Ok(Pipeline::Arnoldi {
                nodes_per_segment: nodes,
            }),
            (_, Some(Method::Moments)) => Ok(Pipeline::Moments {
                nodes_per_segment: nodes,
                digits,
            }),
            (_, None) => Ok(match digits {
                None => Pipeline::Arnoldi {
                    nodes_per_segment: nodes,
                },
                Some(d) => Pipeline::Moments {
                    nodes_per_segment: nodes,
                    digits: Some(d),
                },
            }),
        }
    }

    /// Resolves the reference, taking parameters for short names from the curve.
    pub fn reference_map(&self) -> Result<Option<ReferenceMap>> {
        let name = match &self.reference {
            None => return Ok(None),
            Some(ReferenceSpec::Map(m)) => return Ok(Some(*m)),
            Some(ReferenceSpec::Named(s)) => s.as_str(),
        };
        let map = match (name, &self.curve) {
            ("arc", CurveDescriptor::ArcCircle { a }) => ReferenceMap::Arc { a: *a },
            ("cross", CurveDescriptor::Cross { a, b }) => ReferenceMap::Cross { a: *a, b: *b },
            ("joukowski", CurveDescriptor::Interval { a, b }) => {
                ReferenceMap::Joukowski { a: *a, b: *b }
            }
            ("circle", CurveDescriptor::Circle) => ReferenceMap::IdentityCircle,
            ("arc" | "cross" | "joukowski" | "circle", c) => {
                bail!("reference: {name} cannot be derived from a {} curve", c.kind_name())
            }
            _ => bail!("reference: unknown reference map {name:?}"),
        };
        Ok(Some(map))
    }

    /// Parameters of output `i` with defaults applied.
    pub fn params(&self, i: usize) -> Result<Params> {
        let out = &self.outputs[i];
        let at = format!("outputs[{i}].params");
        let last = self.n - 1;
        let column = |n: Option<usize>| -> Result<usize> {
            let n = n.unwrap_or(last);
            if n == 0 || n > last {
                bail!("{at}.n: approximant column must be in 1..={last}, got {n}");
            }
            Ok(n)
        };
        Ok(match out.kind {
            OutputKind::Moments => {
                let p: MomentParams = from_value(&out.params, &at)?;
                let order = p.order.unwrap_or(self.n + 1);
                if order == 0 {
                    bail!("{at}.order: must be positive");
                }
                Params::Moments { order }
            }
            OutputKind::Hessenberg => {
                let _: serde_json::Map<String, serde_json::Value> = from_value(&out.params, &at)?;
                Params::Hessenberg
            }
            OutputKind::Diagnostics => {
                let _: serde_json::Map<String, serde_json::Value> = from_value(&out.params, &at)?;
                Params::Diagnostics
            }
            OutputKind::Boundary => {
                let p: BoundaryParams = from_value(&out.params, &at)?;
                let radius = p.radius.unwrap_or(1.0);
                if !(radius >= 1.0) {
                    bail!("{at}.radius: must be at least 1, got {radius}");
                }
                let samples = p.samples.unwrap_or(match out.format {
                    Format::Csv => self.samples,
                    Format::Svg => DEFAULT_SVG_POINTS,
                });
                if samples < 2 {
                    bail!("{at}.samples: need at least 2");
                }
                Params::Boundary {
                    n: column(p.n)?,
                    radius,
                    samples,
                }
            }
            OutputKind::Grid => {
                let p: GridParams = from_value(&out.params, &at)?;
                let radii = p.radii.unwrap_or_else(|| vec![1.1, 1.2, 1.3, 1.4, 1.5]);
                if radii.is_empty() {
                    bail!("{at}.radii: need at least one radius");
                }
                if let Some(r) = radii.iter().find(|r| !(**r > 1.0)) {
                    bail!("{at}.radii: every radius must exceed 1, got {r}");
                }
                let samples = p.samples.unwrap_or(DEFAULT_SVG_POINTS);
                if samples < 2 {
                    bail!("{at}.samples: need at least 2");
                }
                Params::Grid {
                    n: column(p.n)?,
                    radii,
                    samples,
                }
            }
            OutputKind::Capacity => {
                let p: CapacityParams = from_value(&out.params, &at)?;
                let window = p.window.unwrap_or_else(|| self.window());
                if window == 0 || window >= self.n {
                    bail!("{at}.window: must be in 1..{}, got {window}", self.n);
                }
                Params::Capacity { window }
            }
        })
    }

    /// First 12 hex digits of the SHA-256 of the normalized configuration.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
    }
}

/// `double`, `extended` (40 digits) or `extended:<digits>`.
pub fn parse_precision(s: &str) -> Result<Precision> {
    match s.split_once(':') {
        None if s == "double" => Ok(Precision::Double),
        None if s == "extended" => Ok(Precision::Extended { digits: 40 }),
        Some(("extended", d)) => {
            let digits: u32 = d.parse().with_context(|| format!("precision digits {d:?}"))?;
            if digits < 15 {
                bail!("extended precision needs at least 15 digits, got {digits}");
            }
            Ok(Precision::Extended { digits })
        }
        _ => bail!("precision must be double, extended or extended:<digits>, got {s:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_flag() {
        assert_eq!(parse_precision("double").unwrap(), Precision::Double);
        assert_eq!(parse_precision("extended:60").unwrap(), Precision::Extended { digits: 60 });
        assert!(parse_precision("extended:8").is_err());
        assert!(parse_precision("quad").is_err());
    }

    #[test]
    fn minimal_document_gets_defaults() {
        let c = parse_config(r#"{"curve":{"kind":"cross","a":1,"b":1},"n":9}"#).unwrap();
        assert_eq!(c.nodes_per_segment(), 128);
        assert_eq!(c.precision, Precision::Double);
        assert_eq!(c.samples, 4096);
        assert_eq!(c.pipeline().unwrap(), Pipeline::Arnoldi { nodes_per_segment: 128 });
        let big = parse_config(r#"{"curve":{"kind":"drop"},"n":40}"#).unwrap();
        assert_eq!(big.nodes_per_segment(), 320);
    }

    #[test]
    fn interval_order_is_checked() {
        let e = parse_config(r#"{"curve":{"kind":"interval","a":1,"b":-1},"n":9}"#).unwrap_err();
        assert!(format!("{e:#}").contains("interval requires a < b"), "{e:#}");
    }

    #[test]
    fn arc_routes_to_closed_form() {
        let c = parse_config(r#"{"curve":{"kind":"arc_circle","a":2},"n":40,"reference":"arc"}"#)
            .unwrap();
        assert_eq!(c.pipeline().unwrap(), Pipeline::ClosedFormArc { a: 2.0 });
        assert_eq!(c.reference_map().unwrap(), Some(ReferenceMap::Arc { a: 2.0 }));
        let bad = r#"{"curve":{"kind":"arc_circle","a":2},"n":40,"method":"arnoldi"}"#;
        assert!(parse_config(bad).is_err());
    }

    #[test]
    fn unknown_curve_kind() {
        let e = parse_config(r#"{"curve":{"kind":"lemniscate"},"n":9}"#).unwrap_err();
        let msg = format!("{e:#}");
        assert!(msg.contains("curve") && msg.contains("lemniscate"), "{msg}");
    }

    #[test]
    fn schema_errors_carry_paths() {
        let e = parse_config(r#"{"curve":{"kind":"drop"},"n":"nine"}"#).unwrap_err();
        assert!(format!("{e}").starts_with("n:"), "{e}");
        let e = parse_config(
            r#"{"curve":{"kind":"drop"},"n":9,"outputs":[{"kind":"boundary","path":"a.csv","params":{"radius":"x"}}]}"#,
        )
        .unwrap_err();
        assert!(format!("{e}").starts_with("outputs[0].params.radius"), "{e}");
        let e = parse_config(r#"{"curve":{"kind":"drop"},"n":9,"precision":{"mode":"extended","digits":10}}"#)
            .unwrap_err();
        assert!(format!("{e}").contains("precision.digits"), "{e}");
    }

    #[test]
    fn conflicting_paths_rejected() {
        let doc = r#"{"curve":{"kind":"drop"},"n":9,"outputs":[
            {"kind":"hessenberg","path":"x.csv"},{"kind":"moments","path":"x.csv"}]}"#;
        let e = parse_config(doc).unwrap_err();
        assert!(format!("{e}").contains("conflicting output path"), "{e}");
    }

    #[test]
    fn n_lower_bound_and_svg_kinds() {
        assert!(parse_config(r#"{"curve":{"kind":"drop"},"n":1}"#).is_err());
        let doc = r#"{"curve":{"kind":"drop"},"n":9,"outputs":[{"kind":"moments","path":"m.svg","format":"svg"}]}"#;
        assert!(parse_config(doc).is_err());
    }

    #[test]
    fn named_reference_must_fit_curve() {
        assert!(parse_config(r#"{"curve":{"kind":"drop"},"n":9,"reference":"cross"}"#).is_err());
        assert!(parse_config(r#"{"curve":{"kind":"drop"},"n":9,"reference":"ellipse"}"#).is_err());
        let c = parse_config(
            r#"{"curve":{"kind":"drop"},"n":9,"reference":{"kind":"joukowski","a":-1,"b":1}}"#,
        )
        .unwrap();
        assert_eq!(c.reference_map().unwrap(), Some(ReferenceMap::Joukowski { a: -1.0, b: 1.0 }));
    }

    #[test]
    fn extended_precision_selects_moments() {
        let c = parse_config(
            r#"{"curve":{"kind":"interval","a":-1,"b":1},"n":20,"precision":{"mode":"extended","digits":40}}"#,
        )
        .unwrap();
        assert_eq!(
            c.pipeline().unwrap(),
            Pipeline::Moments { nodes_per_segment: 160, digits: Some(40) }
        );
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = parse_config(r#"{"curve":{"kind":"drop"},"n":9}"#).unwrap();
        let b = parse_config(r#"{ "n": 9, "curve": {"kind": "drop"} }"#).unwrap();
        let c = parse_config(r#"{"curve":{"kind":"drop"},"n":10}"#).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 12);
    }
}
