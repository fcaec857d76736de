//! CSV and SVG export of curvature-line traces.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use spacelike_core::lines::{CurvatureTrace, Family};
use spacelike_core::LVector3;

pub const TRACE_CSV_HEADER: &str = "trace_id,family,u,v,x1,x2,x3";

const PANEL: f64 = 400.0;
const MARGIN: f64 = 20.0;

fn color(family: Family) -> &'static str {
    match family {
        Family::First => "#1f5fbf",
        Family::Second => "#c0392b",
    }
}

fn nonempty(traces: &[CurvatureTrace]) -> io::Result<()> {
    if traces.iter().all(|t| t.points.is_empty()) {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "no trace points to export"));
    }
    Ok(())
}

/// One row per point, numbered by trace.
pub fn traces_csv(traces: &[CurvatureTrace]) -> io::Result<String> {
    nonempty(traces)?;
    let mut out = String::from(TRACE_CSV_HEADER);
    out.push('\n');
    for (id, t) in traces.iter().enumerate() {
        for (p, x) in t.points.iter().zip(&t.positions) {
            writeln!(out, "{id},{},{},{},{},{},{}", t.family.label(), p.u, p.v, x.x1, x.x2, x.x3).unwrap();
        }
    }
    Ok(out)
}

/// Isometric view: `x₃` up, the horizontal axes at ±30°.
fn isometric(x: &LVector3) -> (f64, f64) {
    let (c, s) = (30f64.to_radians().cos(), 30f64.to_radians().sin());
    ((x.x1 - x.x2) * c, x.x3 + (x.x1 + x.x2) * s)
}

/// Affine map of a point set's bounding box onto a square panel, y flipped.
struct Fit {
    x0: f64,
    y1: f64,
    scale: f64,
    offset: f64,
}

impl Fit {
    fn new(points: impl Iterator<Item = (f64, f64)>, offset: f64) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-12);
        Self {
            x0,
            y1,
            scale: (PANEL - 2.0 * MARGIN) / span,
            offset,
        }
    }

    fn apply(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (self.offset + MARGIN + (x - self.x0) * self.scale, MARGIN + (self.y1 - y) * self.scale)
    }
}

fn subpath(d: &mut String, points: impl Iterator<Item = (f64, f64)>) {
    for (k, (x, y)) in points.enumerate() {
        let cmd = if k == 0 { 'M' } else { 'L' };
        write!(d, "{}{cmd}{x:.3} {y:.3}", if d.is_empty() { "" } else { " " }).unwrap();
    }
}

/// SVG 1.1 with the parameter plane on the left and the isometric ambient
/// view on the right; each trace is one `<path>` holding both views.
pub fn traces_svg(traces: &[CurvatureTrace]) -> io::Result<String> {
    nonempty(traces)?;
    let param = Fit::new(traces.iter().flat_map(|t| t.points.iter().map(|p| (p.u, p.v))), 0.0);
    let ambient = Fit::new(traces.iter().flat_map(|t| t.positions.iter().map(isometric)), PANEL);
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = 2.0 * PANEL,
        h = PANEL
    )
    .unwrap();
    writeln!(out, r##"<rect x="0" y="0" width="{}" height="{PANEL}" fill="#ffffff"/>"##, 2.0 * PANEL).unwrap();
    for (id, t) in traces.iter().enumerate() {
        if t.points.is_empty() {
            continue;
        }
        let mut d = String::new();
        subpath(&mut d, t.points.iter().map(|p| param.apply((p.u, p.v))));
        subpath(&mut d, t.positions.iter().map(|x| ambient.apply(isometric(x))));
        writeln!(
            out,
            r#"<path id="trace-{id}" class="family-{}" d="{d}" fill="none" stroke="{}" stroke-width="1"/>"#,
            t.family.label(),
            color(t.family)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Write `text` to `path`; nothing is created when `text` fails to render.
pub fn write_file(path: &Path, text: io::Result<String>) -> io::Result<()> {
    fs::write(path, text?)
}
