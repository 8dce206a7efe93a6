use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hessmap::Precision;
use hessmap_cli::config::{parse_precision, Format, OutputKind, OutputSpec};
use hessmap_cli::{parse_config, run, run_recipe, Recipe, RunConfig};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hessmap", version, about = "Exterior conformal maps from Hessenberg matrices")]
struct Cli {
    /// Directory for relative output paths.
    #[arg(long, global = true, env = "HESSMAP_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    /// Override the section size.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Override precision: double, extended or extended:<digits>.
    #[arg(long, global = true, value_parser = parse_precision)]
    precision: Option<Precision>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file, relative to the output directory.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every output listed in the configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Moment matrix as CSV.
    Moments {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Hessenberg section as sparse CSV triples.
    Hessenberg {
        #[command(flatten)]
        common: Common,
    },
    /// Column deviation norms against the limit Toeplitz matrix.
    Diagnostics {
        #[command(flatten)]
        common: Common,
    },
    /// Windowed capacity estimate.
    Capacity {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Boundary image of a column approximant.
    Map {
        #[command(flatten)]
        common: Common,
        /// Approximant column; defaults to n - 1.
        #[arg(long)]
        column: Option<usize>,
        /// Circle |w| = radius to map; at least 1.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_parser = ["csv", "svg"], default_value = "csv")]
        format: String,
    },
    /// Equipotential curves of a column approximant.
    Grid {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        column: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        /// Comma-separated radii, each above 1.
        radii: Option<Vec<f64>>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_parser = ["csv", "svg"], default_value = "svg")]
        format: String,
    },
    /// Run a named reproduction recipe.
    Repro {
        /// arc-table, cross-9x9, cross-theta, drop-boundary or spiral-boundary.
        recipe: Recipe,
    },
}

fn load(cli: &Cli, path: &PathBuf) -> Result<RunConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut config = parse_config(&text).with_context(|| format!("config {}", path.display()))?;
    if let Some(n) = cli.n {
        config.n = n;
        config.quadrature.nodes_per_segment = None;
    }
    if let Some(p) = cli.precision {
        config.precision = p;
    }
    config.validate()?;
    Ok(config)
}

fn single(
    cli: &Cli,
    common: &Common,
    kind: OutputKind,
    format: Format,
    params: serde_json::Value,
) -> Result<serde_json::Value> {
    let mut config = load(cli, &common.config)?;
    let ext = match format {
        Format::Csv => "csv",
        Format::Svg => "svg",
    };
    let path = common
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.{ext}", kind.name())));
    config.outputs = vec![OutputSpec { kind, path, format, params }];
    config.validate()?;
    Ok(serde_json::to_value(run(&config, &cli.out_dir)?)?)
}

fn format_of(s: &str) -> Format {
    if s == "svg" {
        Format::Svg
    } else {
        Format::Csv
    }
}

fn strip_nulls(v: serde_json::Value) -> serde_json::Value {
    match v {
        serde_json::Value::Object(m) => m.into_iter().filter(|(_, v)| !v.is_null()).collect(),
        other => other,
    }
}

fn dispatch(cli: &Cli) -> Result<serde_json::Value> {
    match &cli.command {
        Command::Run { config } => {
            let config = load(cli, config)?;
            Ok(serde_json::to_value(run(&config, &cli.out_dir)?)?)
        }
        Command::Moments { common, order } => single(
            cli,
            common,
            OutputKind::Moments,
            Format::Csv,
            strip_nulls(json!({ "order": order })),
        ),
        Command::Hessenberg { common } => {
            single(cli, common, OutputKind::Hessenberg, Format::Csv, json!({}))
        }
        Command::Diagnostics { common } => {
            single(cli, common, OutputKind::Diagnostics, Format::Csv, json!({}))
        }
        Command::Capacity { common, window } => single(
            cli,
            common,
            OutputKind::Capacity,
            Format::Csv,
            strip_nulls(json!({ "window": window })),
        ),
        Command::Map { common, column, radius, samples, format } => single(
            cli,
            common,
            OutputKind::Boundary,
            format_of(format),
            strip_nulls(json!({ "n": column, "radius": radius, "samples": samples })),
        ),
        Command::Grid { common, column, radii, samples, format } => single(
            cli,
            common,
            OutputKind::Grid,
            format_of(format),
            strip_nulls(json!({ "n": column, "radii": radii, "samples": samples })),
        ),
        Command::Repro { recipe } => {
            let precision = cli.precision.unwrap_or_default();
            Ok(serde_json::to_value(run_recipe(*recipe, &cli.out_dir, precision)?)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
