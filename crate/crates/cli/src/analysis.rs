//! The analysis pipeline behind `analyze`, `umbilics`, `index` and
//! `capillary`.

use std::time::Instant;

use spacelike_core::capillary::capillary_reports;
use spacelike_core::catalog::{Basis, CatalogEntry, Expectation};
use spacelike_core::hopf::{cr_residual, phi_of};
use spacelike_core::index::{analyze_singularities, boundary_shear, find_umbilics, rotation_index_boundary, rotation_index_interior, IndexConfig, IndexMethod, IndexReport, Radii, vertex_angle, SingularityKind, UmbilicRecord};
use spacelike_core::surface::{fundamental_data_with, isothermal_residual, spacelike_check};
use spacelike_core::tolerances::DEFAULT_GRID;
use spacelike_core::domain::Location;
use spacelike_core::{DerivativeMode, GeometryError, Param, Tolerances};

use crate::report::{AnalysisReport, CapillaryOutput, CapillaryRow, Check, IndexOutput, SurfaceInfo, Timing, UmbilicRow, UmbilicsOutput};
use crate::spec::{SpecError, SurfaceSpec};

/// Settings shared by every subcommand.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    /// Overrides the spec's grid when set.
    pub grid: Option<usize>,
    pub fd_step: Option<f64>,
    pub tolerances: Tolerances,
    pub timings: bool,
}

/// A built surface ready for analysis.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub entry: CatalogEntry,
    pub info: SurfaceInfo,
    pub tolerances: Tolerances,
    pub timings: bool,
}

impl Prepared {
    pub fn new(spec: &SurfaceSpec, settings: &Settings) -> Result<Self, SpecError> {
        let mut entry = spec.build()?;
        if let Some(step) = settings.fd_step {
            entry.patch = entry.patch.with_mode(DerivativeMode::FiniteDifference { step })?;
        }
        let grid = settings.grid.or(spec.grid).unwrap_or(DEFAULT_GRID);
        if grid < 9 {
            return Err(SpecError::Geometry(GeometryError::GridTooCoarse { points: grid }));
        }
        let info = SurfaceInfo {
            name: entry.name.to_owned(),
            params: spec.params.clone(),
            domain: *entry.patch.domain(),
            derivatives: entry.patch.mode(),
            grid,
        };
        Ok(Self {
            entry,
            info,
            tolerances: settings.tolerances,
            timings: settings.timings,
        })
    }

    fn index_config(&self) -> IndexConfig {
        IndexConfig {
            grid: self.info.grid,
            tolerances: self.tolerances,
        }
    }
}

struct Clock {
    enabled: bool,
    last: Instant,
    stages: Vec<Timing>,
}

impl Clock {
    fn new(enabled: bool) -> Self {
        Self {
            enabled,
            last: Instant::now(),
            stages: Vec::new(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        if self.enabled {
            self.stages.push(Timing {
                stage: stage.to_owned(),
                seconds: (now - self.last).as_secs_f64(),
            });
        }
        self.last = now;
    }

    fn finish(self) -> Option<Vec<Timing>> {
        self.enabled.then_some(self.stages)
    }
}

/// Pointwise statistics over the analysis grid.
#[derive(Clone, Debug, Default)]
struct GridStats {
    kappa: Vec<f64>,
    mean: Vec<f64>,
    phi_modulus: Vec<f64>,
    umbilicity_max: f64,
    phi_max: f64,
}

fn grid_stats(p: &Prepared) -> GridStats {
    let mut stats = GridStats::default();
    for q in p.entry.patch.domain().grid(p.info.grid) {
        let Ok(d) = fundamental_data_with(&p.entry.patch, q, p.tolerances.principal_degenerate) else {
            continue;
        };
        stats.kappa.extend([d.kappa1, d.kappa2]);
        stats.mean.push(d.mean_curvature);
        let phi = phi_of(&d.forms).norm();
        stats.phi_modulus.push(phi);
        stats.umbilicity_max = stats.umbilicity_max.max(d.kappa1 - d.kappa2);
        stats.phi_max = stats.phi_max.max(phi / d.lambda2);
    }
    stats
}

fn range(values: &[f64]) -> [f64; 2] {
    if values.is_empty() {
        return [f64::NAN, f64::NAN];
    }
    [values.iter().copied().fold(f64::INFINITY, f64::min), values.iter().copied().fold(f64::NEG_INFINITY, f64::max)]
}

/// The sample furthest from `target`.
fn worst(values: impl IntoIterator<Item = f64>, target: f64) -> Option<f64> {
    values.into_iter().fold(None, |acc: Option<f64>, x| match acc {
        Some(y) if (y - target).abs() >= (x - target).abs() => Some(y),
        _ => Some(x),
    })
}

/// Edges that are not lines of curvature at some sample.
fn non_curvature_edges(p: &Prepared) -> Vec<&'static str> {
    let domain = p.entry.patch.domain();
    let names = domain.edge_names();
    let mut out = Vec::new();
    for (i, curve) in domain.edges().iter().enumerate() {
        let bad = (0..16).any(|k| {
            let q = curve.point((k as f64 + 0.5) / 16.0);
            let Ok(d) = fundamental_data_with(&p.entry.patch, q, p.tolerances.principal_degenerate) else {
                return false;
            };
            let Ok(t) = curve.velocity((k as f64 + 0.5) / 16.0).unit() else {
                return false;
            };
            let gate = p.tolerances.joachimsthal * (1.0 + d.kappa1.abs().max(d.kappa2.abs()));
            boundary_shear(&d.forms, t) > gate
        });
        if bad {
            out.push(names[i]);
        }
    }
    out
}

fn curvature_note(p: &Prepared) -> Option<String> {
    let edges = non_curvature_edges(p);
    (!edges.is_empty()).then(|| {
        format!(
            "boundary edge(s) {} not lines of curvature; the index sum need not equal the Euler characteristic",
            edges.join(", ")
        )
    })
}

/// Umbilics with their indices, without requiring the boundary to be a line
/// of curvature. Umbilics whose index cannot be computed are left out and
/// explained in `notes`.
fn umbilic_records(p: &Prepared, notes: &mut Vec<String>) -> Result<(bool, Vec<UmbilicRecord>), GeometryError> {
    let domain = *p.entry.patch.domain();
    let radii = Radii::from_grid(&domain, p.info.grid);
    let scan = find_umbilics(&p.entry.patch, p.info.grid, radii.merge, &p.tolerances)?;
    let mut records = Vec::new();
    for (q, loc) in &scan.points {
        let record = match loc {
            Location::Interior => {
                let dist = domain.edges().iter().map(|e| e.project(*q).1).fold(f64::INFINITY, f64::min);
                rotation_index_interior(&p.entry.patch, *q, radii.interior.min(0.5 * dist), &p.tolerances).map(|i| UmbilicRecord {
                    location: *q,
                    kind: SingularityKind::Interior,
                    order: i.order(),
                    index: i.index(),
                    method: i.method(),
                    cross_check: i.argument.map(|_| i.direction),
                    angle: None,
                })
            }
            Location::Edge(_) => rotation_index_boundary(&p.entry.patch, *q, radii.boundary, &p.tolerances).map(|index| UmbilicRecord {
                location: *q,
                kind: SingularityKind::BoundaryRegular,
                order: (-4.0 * index).round() as i32,
                index,
                method: IndexMethod::Reflection,
                cross_check: None,
                angle: None,
            }),
            Location::Vertex(_) | Location::Outside => continue,
        };
        match record {
            Ok(r) => records.push(r),
            Err(e) => notes.push(format!("umbilic at ({}, {}): {e}", q.u, q.v)),
        }
    }
    Ok((scan.everywhere_umbilic, records))
}

fn measure(e: &Expectation, p: &Prepared, stats: &GridStats, index: Option<&IndexReport>, umbilics: &[UmbilicRecord], capillary: &[CapillaryRow]) -> Option<f64> {
    let vertex_records = || index.into_iter().flat_map(|r| r.records.iter()).filter(|r| matches!(r.kind, SingularityKind::VertexAcute | SingularityKind::VertexReflex));
    let nearest_umbilic = || {
        let target = Param::new(
            p.entry.expectation("umbilic_u").unwrap_or(0.0),
            p.entry.expectation("umbilic_v").unwrap_or(0.0),
        );
        umbilics
            .iter()
            .filter(|r| r.kind == SingularityKind::Interior)
            .min_by(|a, b| a.location.distance(target).total_cmp(&b.location.distance(target)))
    };
    match e.quantity {
        "kappa" => worst(stats.kappa.iter().copied(), e.value),
        "mean_curvature" => worst(stats.mean.iter().copied(), e.value),
        "phi_modulus" => worst(stats.phi_modulus.iter().copied(), e.value),
        "euler_char" => Some(p.entry.patch.domain().euler_characteristic() as f64),
        "index_sum" => index.map(|r| r.index_sum),
        "vertex_angle" => worst(
            p.entry
                .patch
                .domain()
                .vertices()
                .iter()
                .filter(|v| e.edge.is_none_or(|k| v.next_edge == k))
                .filter_map(|v| vertex_angle(&p.entry.patch, v).ok()),
            e.value,
        ),
        "vertex_index" => worst(vertex_records().map(|r| r.index), e.value),
        "umbilic_u" => nearest_umbilic().map(|r| r.location.u),
        "umbilic_v" => nearest_umbilic().map(|r| r.location.v),
        "umbilic_index" => nearest_umbilic().map(|r| r.index),
        "beta" => capillary.iter().find(|c| Some(c.edge) == e.edge).map(|c| c.beta_mean),
        "boundary_height" => {
            let patch = &p.entry.patch;
            let edges = patch.domain().edges();
            let heights = edges
                .iter()
                .flat_map(|c| (0..32).map(move |k| c.point((k as f64 + 0.5) / 32.0)))
                .filter_map(|q| patch.position(q).ok())
                .map(|x| x.x3);
            worst(heights, e.value)
        }
        _ => None,
    }
}

fn basis_label(b: Basis) -> &'static str {
    match b {
        Basis::Exact => "exact",
        Basis::Derived => "derived",
        Basis::Reference => "reference",
    }
}

/// Run every stage and compare against the catalog's expected values.
pub fn analyze(p: &Prepared) -> AnalysisReport {
    let mut clock = Clock::new(p.timings);
    let mut notes = Vec::new();
    let patch = &p.entry.patch;
    let grid = p.info.grid;

    let spacelike = spacelike_check(patch, grid);
    let (spacelike_min, spacelike_passed) = match &spacelike {
        Ok(r) => (r.min_det, r.passed),
        Err(e) => {
            notes.push(format!("spacelike check: {e}"));
            (f64::NAN, false)
        }
    };
    clock.lap("spacelike");
    let iso = isothermal_residual(patch, grid).unwrap_or(f64::NAN);
    let cr = if iso < p.tolerances.isothermal {
        match cr_residual(patch, grid) {
            Ok(r) => Some(r),
            Err(e) => {
                notes.push(format!("cr residual: {e}"));
                None
            }
        }
    } else {
        None
    };
    clock.lap("forms");
    let stats = grid_stats(p);
    clock.lap("curvature");

    let index = if spacelike_passed {
        match analyze_singularities(patch, &p.index_config()) {
            Ok(r) => Some(r),
            Err(e) => {
                notes.push(format!("index analysis: {e}"));
                None
            }
        }
    } else {
        None
    };
    let (everywhere_umbilic, umbilics) = match &index {
        Some(r) => (r.everywhere_umbilic, r.records.clone()),
        None if spacelike_passed => umbilic_records(p, &mut notes).unwrap_or_else(|e| {
            notes.push(format!("umbilic scan: {e}"));
            (false, Vec::new())
        }),
        None => (false, Vec::new()),
    };
    if let Some(note) = curvature_note(p) {
        notes.push(note);
    }
    clock.lap("index");

    let capillary = if spacelike_passed {
        match capillary_reports(patch, &p.entry.supports, &p.tolerances) {
            Ok(rs) => rs.iter().map(|r| CapillaryRow::new(r, patch.domain())).collect(),
            Err(e) => {
                notes.push(format!("capillary: {e}"));
                Vec::new()
            }
        }
    } else {
        Vec::new()
    };
    clock.lap("capillary");

    let checks: Vec<Check> = p
        .entry
        .expected
        .iter()
        .map(|e| {
            let measured = measure(e, p, &stats, index.as_ref(), &umbilics, &capillary).filter(|m| m.is_finite());
            Check {
                quantity: e.quantity.to_owned(),
                edge: e.edge,
                expected: e.value,
                measured,
                tolerance: e.tolerance,
                basis: basis_label(e.basis).to_owned(),
                passed: measured.is_some_and(|m| (m - e.value).abs() <= e.tolerance),
            }
        })
        .collect();
    let capillary_ok = capillary.iter().all(|c| c.passed) && capillary.len() == p.entry.supports.len();
    let passed = spacelike_passed && capillary_ok && checks.iter().all(|c| c.passed);
    AnalysisReport {
        surface: p.info.clone(),
        spacelike_min,
        spacelike_passed,
        isothermal_residual: iso,
        cr_residual: cr,
        umbilicity_max: stats.umbilicity_max,
        phi_max: (iso < p.tolerances.isothermal).then_some(stats.phi_max),
        kappa_range: range(&stats.kappa),
        mean_curvature_range: range(&stats.mean),
        everywhere_umbilic,
        umbilics: umbilics.iter().map(UmbilicRow::from).collect(),
        index_sum: index.as_ref().map(|r| r.index_sum),
        euler_char: patch.domain().euler_characteristic(),
        index_residual: index.as_ref().map(|r| r.residual),
        index_consistent: index.as_ref().map(|r| r.consistent),
        capillary,
        checks,
        notes,
        verdict: if passed { "pass" } else { "fail" }.to_owned(),
        timings: clock.finish(),
    }
}

/// Singularity analysis with Poincaré–Hopf bookkeeping.
pub fn index(p: &Prepared) -> Result<IndexOutput, GeometryError> {
    let r = analyze_singularities(&p.entry.patch, &p.index_config())?;
    Ok(IndexOutput {
        surface: p.info.clone(),
        everywhere_umbilic: r.everywhere_umbilic,
        umbilics: r.records.iter().map(UmbilicRow::from).collect(),
        index_sum: r.index_sum,
        euler_char: r.euler_characteristic,
        residual: r.residual,
        acute_vertices: r.acute_vertices,
        index_bound: r.index_bound,
        contradiction_regime: r.contradiction_regime,
        consistent: r.consistent,
        notes: curvature_note(p).into_iter().collect(),
    })
}

/// Umbilic points and their indices.
pub fn umbilics(p: &Prepared) -> Result<UmbilicsOutput, GeometryError> {
    let mut notes = Vec::new();
    let (everywhere_umbilic, records) = umbilic_records(p, &mut notes)?;
    Ok(UmbilicsOutput {
        surface: p.info.clone(),
        everywhere_umbilic,
        umbilics: records.iter().map(UmbilicRow::from).collect(),
        notes,
    })
}

/// Contact-angle verification on every supported edge.
pub fn capillary(p: &Prepared) -> Result<CapillaryOutput, GeometryError> {
    let rows: Vec<CapillaryRow> = capillary_reports(&p.entry.patch, &p.entry.supports, &p.tolerances)?
        .iter()
        .map(|r| CapillaryRow::new(r, p.entry.patch.domain()))
        .collect();
    let passed = rows.iter().all(|r| r.passed);
    Ok(CapillaryOutput {
        surface: p.info.clone(),
        capillary: rows,
        verdict: if passed { "pass" } else { "fail" }.to_owned(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prepared(name: &str, grid: usize) -> Prepared {
        let settings = Settings {
            grid: Some(grid),
            ..Settings::default()
        };
        Prepared::new(&SurfaceSpec::named(name), &settings).unwrap()
    }

    #[test]
    fn worst_picks_the_furthest_sample() {
        assert_eq!(worst([0.9, 1.2, 1.0], 1.0), Some(1.2));
        assert_eq!(worst([], 1.0), None);
    }

    #[test]
    fn hyperbolic_cap_passes() {
        let report = analyze(&prepared("hyperbolic-cap", 33));
        assert!(report.passed(), "{report:#?}");
        assert!(report.everywhere_umbilic);
        assert!(report.cr_residual.is_some());
        assert_eq!(report.capillary.len(), 1);
    }

    #[test]
    fn tilted_cut_fails_with_a_note() {
        let report = analyze(&prepared("tilted-cut-negative", 33));
        assert!(!report.passed());
        assert_eq!(report.capillary[0].verdict, "NotConstantAngle");
        assert!(report.cr_residual.is_none());
        assert!(report.notes.iter().any(|n| n.contains("not lines of curvature")));
    }

    #[test]
    fn grid_priority() {
        let mut spec = SurfaceSpec::named("planar-square");
        spec.grid = Some(33);
        let p = Prepared::new(&spec, &Settings::default()).unwrap();
        assert_eq!(p.info.grid, 33);
        let p = Prepared::new(&spec, &Settings { grid: Some(17), ..Settings::default() }).unwrap();
        assert_eq!(p.info.grid, 17);
        assert!(Prepared::new(&spec, &Settings { grid: Some(4), ..Settings::default() }).is_err());
    }

    #[test]
    fn fd_step_switches_derivatives() {
        let settings = Settings {
            fd_step: Some(1e-4),
            ..Settings::default()
        };
        let p = Prepared::new(&SurfaceSpec::named("hyperbolic-cap"), &settings).unwrap();
        assert_eq!(p.info.derivatives, DerivativeMode::FiniteDifference { step: 1e-4 });
    }
}
