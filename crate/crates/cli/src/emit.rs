//! CSV and SVG writers. Every file starts with a comment line naming the
//! tool version and the configuration hash.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use hessmap::{Complex64, Equipotential, HessenbergSection, MomentMatrix, Real, ToeplitzDiagnostics};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    ryu::Buffer::new().format(x).to_string()
}

fn header(hash: &str) -> String {
    format!("# hessmap {VERSION} config={hash}\n")
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Generic CSV table.
pub fn csv_table(hash: &str, columns: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = header(hash);
    s.push_str(&columns.join(","));
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// One line per matrix row, `re,im` per cell.
pub fn moments_csv<R: Real>(hash: &str, m: &MomentMatrix<R>) -> String {
    let order = m.order();
    let columns: Vec<String> = (0..order)
        .flat_map(|k| [format!("re_{k}"), format!("im_{k}")])
        .collect();
    let columns: Vec<&str> = columns.iter().map(String::as_str).collect();
    let rows = (0..order).map(|j| {
        (0..order)
            .flat_map(|k| {
                let v = m.entry(j, k);
                [num(v.re), num(v.im)]
            })
            .collect()
    });
    csv_table(hash, &columns, rows)
}

/// 1-based `i,j,re,im` triples over the Hessenberg pattern `i <= j + 1`.
pub fn hessenberg_csv(hash: &str, d: &HessenbergSection) -> String {
    let n = d.size();
    let rows = (1..=n).flat_map(|i| {
        (i.saturating_sub(1).max(1)..=n).map(move |j| {
            let v = d.get(i, j);
            vec![i.to_string(), j.to_string(), num(v.re), num(v.im)]
        })
    });
    csv_table(hash, &["i", "j", "re", "im"], rows)
}

pub fn diagnostics_csv(hash: &str, t: &ToeplitzDiagnostics) -> String {
    let rows = (0..t.theta2.len()).map(|k| {
        vec![
            (k + 1).to_string(),
            num(t.theta2[k]),
            num(t.theta1[k]),
            num(t.tail_l2[k]),
        ]
    });
    csv_table(hash, &["n", "theta2", "theta1", "tail_l2"], rows)
}

pub fn boundary_csv(hash: &str, points: &[(f64, Complex64)]) -> String {
    let rows = points
        .iter()
        .map(|(t, z)| vec![num(*t), num(z.re), num(z.im)]);
    csv_table(hash, &["theta", "re", "im"], rows)
}

pub fn grid_csv(hash: &str, grid: &[Equipotential]) -> String {
    let rows = grid.iter().flat_map(|e| {
        e.points
            .iter()
            .map(move |(t, z)| vec![num(e.radius), num(*t), num(z.re), num(z.im)])
    });
    csv_table(hash, &["r", "theta", "re", "im"], rows)
}

/// One closed polyline per curve, in a viewBox fitted to all points with a 5%
/// margin. The y axis is flipped so the picture has the usual orientation.
pub fn svg(hash: &str, curves: &[(String, Vec<Complex64>)]) -> String {
    let pts = curves.iter().flat_map(|(_, c)| c.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in pts {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(-z.im);
        y1 = y1.max(-z.im);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let pad = 0.05 * span;
    let (w, h) = (x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
    let stroke = 0.004 * span;

    let mut s = String::new();
    let _ = writeln!(s, "<!-- hessmap {VERSION} config={hash} -->");
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        num(x0 - pad),
        num(y0 - pad),
        num(w),
        num(h)
    );
    for (label, c) in curves {
        let points: Vec<String> = c.iter().map(|z| format!("{},{}", num(z.re), num(-z.im))).collect();
        let _ = writeln!(
            s,
            r#"<polygon data-label="{label}" fill="none" stroke="black" stroke-width="{}" points="{}"/>"#,
            num(stroke),
            points.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}
