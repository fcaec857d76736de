//! Serializable analysis reports and their JSON and CSV writers.
//!
//! Reports own all their data so they can be read back; floats are written in
//! `{:.16e}` form, which round-trips every `f64` exactly.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use spacelike_core::capillary::{CapillaryReport, SupportSurface};
use spacelike_core::index::{IndexMethod, SingularityKind, UmbilicRecord};
use spacelike_core::{DerivativeMode, PatchDomain};

/// Identification of the analysed surface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceInfo {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub domain: PatchDomain,
    pub derivatives: DerivativeMode,
    pub grid: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UmbilicRow {
    pub u: f64,
    pub v: f64,
    pub kind: SingularityKind,
    pub order: i32,
    pub index: f64,
    pub method: IndexMethod,
    pub cross_check: Option<f64>,
    pub angle: Option<f64>,
}

impl From<&UmbilicRecord> for UmbilicRow {
    fn from(r: &UmbilicRecord) -> Self {
        Self {
            u: r.location.u,
            v: r.location.v,
            kind: r.kind,
            order: r.order,
            index: r.index,
            method: r.method,
            cross_check: r.cross_check,
            angle: r.angle,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub s: f64,
    pub u: f64,
    pub v: f64,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapillaryRow {
    pub edge: usize,
    pub edge_name: String,
    pub support: SupportSurface,
    pub beta_mean: f64,
    pub beta_spread: f64,
    pub joachimsthal_max: f64,
    pub trihedra_max: f64,
    pub support_residual_max: f64,
    pub verdict: String,
    pub passed: bool,
    pub profile: Vec<ProfilePoint>,
}

impl CapillaryRow {
    pub fn new(r: &CapillaryReport, domain: &PatchDomain) -> Self {
        let curve = domain.edges()[r.edge];
        Self {
            edge: r.edge,
            edge_name: r.edge_name.to_owned(),
            support: r.support,
            beta_mean: r.beta_mean,
            beta_spread: r.beta_spread,
            joachimsthal_max: r.joachimsthal_max,
            trihedra_max: r.trihedra_max,
            support_residual_max: r.support_residual_max,
            verdict: format!("{:?}", r.verdict),
            passed: r.verdict.passed(),
            profile: r
                .profile
                .iter()
                .map(|&(s, beta)| {
                    let p = curve.point(s);
                    ProfilePoint { s, u: p.u, v: p.v, beta }
                })
                .collect(),
        }
    }
}

/// One catalog expectation compared with its measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub quantity: String,
    pub edge: Option<usize>,
    pub expected: f64,
    /// `None` when the quantity could not be measured.
    pub measured: Option<f64>,
    pub tolerance: f64,
    pub basis: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub surface: SurfaceInfo,
    pub spacelike_min: f64,
    pub spacelike_passed: bool,
    pub isothermal_residual: f64,
    /// Only computed on isothermal charts.
    pub cr_residual: Option<f64>,
    /// Largest `κ₁ − κ₂` on the grid.
    pub umbilicity_max: f64,
    /// Largest `|Φ|/λ²`, on isothermal charts.
    pub phi_max: Option<f64>,
    pub kappa_range: [f64; 2],
    pub mean_curvature_range: [f64; 2],
    pub everywhere_umbilic: bool,
    pub umbilics: Vec<UmbilicRow>,
    pub index_sum: Option<f64>,
    pub euler_char: i32,
    pub index_residual: Option<f64>,
    pub index_consistent: Option<bool>,
    pub capillary: Vec<CapillaryRow>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
}

impl AnalysisReport {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

/// Output of the `index` subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexOutput {
    pub surface: SurfaceInfo,
    pub everywhere_umbilic: bool,
    pub umbilics: Vec<UmbilicRow>,
    pub index_sum: f64,
    pub euler_char: i32,
    pub residual: f64,
    pub acute_vertices: usize,
    pub index_bound: f64,
    pub contradiction_regime: bool,
    pub consistent: bool,
    pub notes: Vec<String>,
}

/// Output of the `umbilics` subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UmbilicsOutput {
    pub surface: SurfaceInfo,
    pub everywhere_umbilic: bool,
    pub umbilics: Vec<UmbilicRow>,
    pub notes: Vec<String>,
}

/// Output of the `capillary` subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapillaryOutput {
    pub surface: SurfaceInfo,
    pub capillary: Vec<CapillaryRow>,
    pub verdict: String,
}

/// `serde_json` pretty formatter writing floats as `{:.16e}`.
struct ExactFloats(serde_json::ser::PrettyFormatter<'static>);

impl serde_json::ser::Formatter for ExactFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with full-precision floats and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats(serde_json::ser::PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report types serialize infallibly");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub const CSV_HEADER: &str = "record,edge,s,u,v,kind,order,index,method,beta";

fn kind_label(kind: SingularityKind) -> &'static str {
    match kind {
        SingularityKind::Interior => "interior",
        SingularityKind::BoundaryRegular => "boundary",
        SingularityKind::VertexAcute => "vertex_acute",
        SingularityKind::VertexReflex => "vertex_reflex",
    }
}

fn method_label(method: IndexMethod) -> &'static str {
    match method {
        IndexMethod::ArgumentPrinciple => "argument_principle",
        IndexMethod::DirectionWinding => "direction_winding",
        IndexMethod::Reflection => "reflection",
        IndexMethod::CornerStraightening => "corner_straightening",
    }
}

/// Flatten umbilic records and contact-angle profiles into one table.
pub fn to_csv(umbilics: &[UmbilicRow], capillary: &[CapillaryRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in umbilics {
        out.push_str(&format!(
            "umbilic,,,{},{},{},{},{},{},\n",
            r.u,
            r.v,
            kind_label(r.kind),
            r.order,
            r.index,
            method_label(r.method)
        ));
    }
    for c in capillary {
        for p in &c.profile {
            out.push_str(&format!("beta,{},{},{},{},,,,,{}\n", c.edge, p.s, p.u, p.v, p.beta));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> AnalysisReport {
        AnalysisReport {
            surface: SurfaceInfo {
                name: "planar-disk".into(),
                params: BTreeMap::from([("c".to_owned(), 1.0)]),
                domain: PatchDomain::disk(1.0).unwrap(),
                derivatives: DerivativeMode::Analytic,
                grid: 129,
            },
            spacelike_min: 1.0,
            spacelike_passed: true,
            isothermal_residual: 0.0,
            cr_residual: Some(1.0 / 3.0),
            umbilicity_max: 0.0,
            phi_max: Some(0.0),
            kappa_range: [0.0, 0.0],
            mean_curvature_range: [-0.0, 1e-300],
            everywhere_umbilic: true,
            umbilics: vec![UmbilicRow {
                u: 0.1,
                v: -std::f64::consts::PI,
                kind: SingularityKind::VertexAcute,
                order: 0,
                index: 0.25,
                method: IndexMethod::CornerStraightening,
                cross_check: Some(0.2500000001),
                angle: None,
            }],
            index_sum: None,
            euler_char: 1,
            index_residual: Some(f64::MIN_POSITIVE),
            index_consistent: Some(true),
            capillary: vec![],
            checks: vec![Check {
                quantity: "beta".into(),
                edge: Some(0),
                expected: 0.0,
                measured: None,
                tolerance: 1e-6,
                basis: "derived".into(),
                passed: false,
            }],
            notes: vec![],
            verdict: "fail".into(),
            timings: None,
        }
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let report = sample();
        let text = to_json(&report);
        let back: AnalysisReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn floats_carry_seventeen_digits() {
        let text = to_json(&sample());
        assert!(text.contains("3.3333333333333331e-1"), "{text}");
        assert!(text.contains("\"capillary\": []"));
        assert!(!text.contains("timings"));
    }

    #[test]
    fn csv_flattening() {
        let mut report = sample();
        report.capillary.push(CapillaryRow {
            edge: 0,
            edge_name: "circle".into(),
            support: SupportSurface::horizontal(1.0).unwrap(),
            beta_mean: 0.5,
            beta_spread: 0.0,
            joachimsthal_max: 0.0,
            trihedra_max: 0.0,
            support_residual_max: 0.0,
            verdict: "Capillary".into(),
            passed: true,
            profile: vec![
                ProfilePoint { s: 0.25, u: 0.0, v: 1.0, beta: 0.5 },
                ProfilePoint { s: 0.75, u: 0.0, v: -1.0, beta: 0.5 },
            ],
        });
        let csv = to_csv(&report.umbilics, &report.capillary);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("umbilic,,,0.1,"));
        assert_eq!(lines[2], "beta,0,0.25,0,1,,,,,0.5");
        assert!(lines.iter().all(|l| l.split(',').count() == 10));
    }
}
