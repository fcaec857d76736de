//! Rotation indices of the curvature-line field and Poincaré–Hopf
//! bookkeeping.
//!
//! A line field is only defined modulo `π`, so windings are computed on the
//! doubled angle `2θ` and halved afterwards; this is what makes the
//! half-integer indices of umbilic points representable.
//!
//! Four routes are provided:
//!
//!   * argument principle on `Φ` around an interior point,
//!     `I = −δ(arg Φ)/4π`;
//!   * winding of the principal direction around an interior point;
//!   * reflection through a smooth boundary edge (half of the index of the
//!     reflected field on the full disk);
//!   * corner straightening `w = z^{π/ξ}` at a vertex, followed by
//!     reflection in the straightened chart.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::domain::{Location, Param, Vertex};
use crate::field::CurvatureField;
use crate::hopf::{hopf_function, HopfSample};
use crate::surface::Forms;
use crate::tolerances::{DEFAULT_GRID, LOOP_SAMPLES, MAX_ARGUMENT_JUMP, MAX_LOOP_SAMPLES};
use crate::{GeometryError, PatchDomain, Result, Tolerances};

/// Where a singularity of the line field sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SingularityKind {
    Interior,
    BoundaryRegular,
    /// Vertex with interior angle `< π`.
    VertexAcute,
    /// Vertex with interior angle `> π`.
    VertexReflex,
}

/// Which computation produced an index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum IndexMethod {
    ArgumentPrinciple,
    DirectionWinding,
    Reflection,
    CornerStraightening,
}

/// A located singularity of the curvature-line field.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UmbilicRecord {
    pub location: Param,
    pub kind: SingularityKind,
    /// Zero order of `Φ`; `−1` encodes a simple pole.
    pub order: i32,
    pub index: f64,
    pub method: IndexMethod,
    /// Independent second computation of the index, when one was run.
    pub cross_check: Option<f64>,
    /// Interior angle in the induced metric, for vertices.
    pub angle: Option<f64>,
}

impl UmbilicRecord {
    /// Upper bound on the index for this kind of singularity, when one is known.
    pub fn index_bound(&self) -> Option<f64> {
        match self.kind {
            SingularityKind::Interior => None,
            SingularityKind::BoundaryRegular => Some(-0.25),
            SingularityKind::VertexAcute => Some(0.25),
            SingularityKind::VertexReflex => Some(-0.25),
        }
    }

    /// Whether the record satisfies its kind's gate within `slack`.
    pub fn within_gate(&self, slack: f64) -> bool {
        let dual = self.cross_check.is_none_or(|c| libm::fabs(c - self.index) <= slack);
        let gate = match self.kind {
            SingularityKind::Interior => libm::fabs(self.index + self.order as f64 / 2.0) <= slack,
            _ => self.index <= self.index_bound().unwrap_or(f64::INFINITY) + slack,
        };
        dual && gate
    }
}

/// Sum of indices against the Euler characteristic.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IndexReport {
    pub records: Vec<UmbilicRecord>,
    pub index_sum: f64,
    pub euler_characteristic: i32,
    /// `|index_sum − χ|`.
    pub residual: f64,
    /// The surface is umbilic everywhere; the index accounting is skipped.
    pub everywhere_umbilic: bool,
    pub acute_vertices: usize,
    /// Upper bound on the index sum from the per-kind bounds: `#acute / 4`.
    pub index_bound: f64,
    /// Fewer than four acute vertices: isolated singularities cannot reach χ = 1.
    pub contradiction_regime: bool,
    /// Positions in `records` violating their kind's gate.
    pub gate_violations: Vec<usize>,
    pub consistent: bool,
}

/// Total variation of a continuous angle sampled at `n` points of a closed
/// loop, unwrapping each step into `(−π, π]`. Returns the variation and the
/// largest single jump.
pub fn unwrap_closed(angles: &[f64]) -> (f64, f64) {
    let n = angles.len();
    let mut total = 0.0;
    let mut max_jump: f64 = 0.0;
    for k in 0..n {
        let d = wrap_pi(angles[(k + 1) % n] - angles[k]);
        max_jump = max_jump.max(libm::fabs(d));
        total += d;
    }
    (total, max_jump)
}

/// Same as [`unwrap_closed`] for an open path.
pub fn unwrap_open(angles: &[f64]) -> (f64, f64) {
    let mut total = 0.0;
    let mut max_jump: f64 = 0.0;
    for w in angles.windows(2) {
        let d = wrap_pi(w[1] - w[0]);
        max_jump = max_jump.max(libm::fabs(d));
        total += d;
    }
    (total, max_jump)
}

/// Reduce an angle into `(−π, π]`.
pub fn wrap_pi(a: f64) -> f64 {
    let r = crate::domain::rem_euclid(a + PI, TAU) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

/// Integer winding of `Φ` along a closed loop of samples.
pub fn winding_of_phi(samples: &[HopfSample]) -> Result<i32> {
    if samples.len() < 3 {
        return Err(GeometryError::TooFewSamples {
            samples: samples.len(),
            required: 3,
        });
    }
    let floor = noise_floor(samples.iter().map(|s| s.phi));
    if let Some(s) = samples.iter().find(|s| s.phi.norm() <= floor) {
        return Err(GeometryError::BelowNoiseFloor { magnitude: s.phi.norm() });
    }
    let args: Vec<f64> = samples.iter().map(|s| s.phi.arg()).collect();
    let (total, max_jump) = unwrap_closed(&args);
    if max_jump >= MAX_ARGUMENT_JUMP {
        return Err(GeometryError::SamplingDensity { max_jump });
    }
    Ok(libm::round(total / TAU) as i32)
}

fn noise_floor(values: impl Iterator<Item = Complex64>) -> f64 {
    let max = values.map(|z| z.norm()).fold(0.0, f64::max);
    (1e-12 * max).max(1e-300)
}

/// Sample an angle on a closed loop `t ∈ [0,1)` with adaptive doubling until
/// every step is below the jump gate; returns the unwrapped total variation.
fn closed_variation<G>(mut angle_at: G) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    let mut n = LOOP_SAMPLES;
    loop {
        let angles = (0..n).map(|k| angle_at(k as f64 / n as f64)).collect::<Result<Vec<_>>>()?;
        let (total, max_jump) = unwrap_closed(&angles);
        if max_jump < MAX_ARGUMENT_JUMP {
            return Ok(total);
        }
        if n >= MAX_LOOP_SAMPLES {
            return Err(GeometryError::SamplingDensity { max_jump });
        }
        n *= 2;
    }
}

fn open_variation<G>(mut angle_at: G) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    let mut n = LOOP_SAMPLES;
    loop {
        let angles = (0..=n).map(|k| angle_at(k as f64 / n as f64)).collect::<Result<Vec<_>>>()?;
        let (total, max_jump) = unwrap_open(&angles);
        if max_jump < MAX_ARGUMENT_JUMP {
            return Ok(total);
        }
        if n >= MAX_LOOP_SAMPLES {
            return Err(GeometryError::SamplingDensity { max_jump });
        }
        n *= 2;
    }
}

/// Parameter-plane angle of the first principal direction at `p`.
pub fn direction_angle<F: CurvatureField>(field: &F, p: Param, tol: &Tolerances) -> Result<f64> {
    let forms = field.forms(p)?;
    line_angle(&forms, p, tol)
}

fn line_angle(forms: &Forms, p: Param, tol: &Tolerances) -> Result<f64> {
    let frame = forms.principal(tol.principal_degenerate)?;
    match frame.directions {
        Some((d1, _)) => Ok(d1.arg()),
        None => Err(GeometryError::Umbilic { u: p.u, v: p.v }),
    }
}

/// Both interior index computations around one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InteriorIndex {
    /// `−δ(arg Φ)/4π`, when `Φ` is available (isothermal chart).
    pub argument: Option<f64>,
    /// Winding of `Φ`, when `Φ` is available.
    pub winding: Option<i32>,
    /// Half the winding of the doubled principal-direction angle.
    pub direction: f64,
}

impl InteriorIndex {
    /// Preferred value: argument principle when available.
    pub fn index(&self) -> f64 {
        self.argument.unwrap_or(self.direction)
    }

    pub fn method(&self) -> IndexMethod {
        if self.argument.is_some() {
            IndexMethod::ArgumentPrinciple
        } else {
            IndexMethod::DirectionWinding
        }
    }

    /// Order of the zero (or `−1` for a simple pole).
    pub fn order(&self) -> i32 {
        self.winding.unwrap_or_else(|| libm::round(-2.0 * self.direction) as i32)
    }
}

/// `−δ(arg Φ)/4π` around a circle; `None` when the chart is not isothermal.
pub fn argument_index<F: CurvatureField>(field: &F, center: Param, radius: f64, tol: &Tolerances) -> Result<Option<(f64, i32)>> {
    let at = |t: f64| center + Param::polar(radius, TAU * t);
    match hopf_function(field, at(0.0), tol.isothermal) {
        Err(GeometryError::NotIsothermal { .. }) => return Ok(None),
        Err(e) => return Err(e),
        Ok(_) => {}
    }
    let mut n = LOOP_SAMPLES;
    loop {
        let samples = (0..n)
            .map(|k| hopf_function(field, at(k as f64 / n as f64), tol.isothermal))
            .collect::<Result<Vec<_>>>();
        let samples = match samples {
            Err(GeometryError::NotIsothermal { .. }) => return Ok(None),
            other => other?,
        };
        match winding_of_phi(&samples) {
            Ok(w) => {
                let args: Vec<f64> = samples.iter().map(|s| s.phi.arg()).collect();
                let (total, _) = unwrap_closed(&args);
                return Ok(Some((-total / (2.0 * TAU), w)));
            }
            Err(GeometryError::SamplingDensity { max_jump }) => {
                if n >= MAX_LOOP_SAMPLES {
                    return Err(GeometryError::SamplingDensity { max_jump });
                }
                n *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Half the winding of the doubled first-principal-direction angle around a circle.
pub fn direction_index<F: CurvatureField>(field: &F, center: Param, radius: f64, tol: &Tolerances) -> Result<f64> {
    let total = closed_variation(|t| Ok(2.0 * direction_angle(field, center + Param::polar(radius, TAU * t), tol)?))?;
    Ok(total / (2.0 * TAU))
}

/// Rotation index at an isolated interior singularity, by both routes.
pub fn rotation_index_interior<F: CurvatureField>(field: &F, point: Param, loop_radius: f64, tol: &Tolerances) -> Result<InteriorIndex> {
    let domain = field.domain();
    let ok = (0..16).all(|k| domain.contains(point + Param::polar(loop_radius, TAU * k as f64 / 16.0), 0.0));
    if !ok {
        return Err(GeometryError::InvalidParameter("interior loop leaves the domain"));
    }
    let argument = argument_index(field, point, loop_radius, tol)?;
    let direction = direction_index(field, point, loop_radius, tol)?;
    Ok(InteriorIndex {
        argument: argument.map(|a| a.0),
        winding: argument.map(|a| a.1),
        direction,
    })
}

/// Reflection through a boundary edge of the parameter domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reflection {
    /// Mirror in the line through `origin` with inward unit normal `normal`.
    Line { origin: Param, normal: Param },
    /// Inversion in the circle `|z − center| = radius`; the inside is the domain side.
    Circle { center: Param, radius: f64 },
}

impl Reflection {
    /// Reflection across the edge containing boundary point `p`.
    pub fn for_edge(domain: &PatchDomain, edge: usize, p: Param) -> Result<Self> {
        let curve = domain
            .edges()
            .get(edge)
            .copied()
            .ok_or(GeometryError::InvalidParameter("edge index out of range"))?;
        Ok(match curve {
            crate::BoundaryCurve::Segment { .. } => {
                let (_, normal) = domain.edge_frame(edge, p)?;
                Reflection::Line { origin: p, normal }
            }
            crate::BoundaryCurve::Arc { center, radius, .. } => Reflection::Circle { center, radius },
        })
    }

    pub fn is_inside(&self, p: Param) -> bool {
        match *self {
            Reflection::Line { origin, normal } => (p - origin).dot(normal) >= 0.0,
            Reflection::Circle { center, radius } => p.distance(center) <= radius,
        }
    }

    pub fn map_point(&self, p: Param) -> Param {
        match *self {
            Reflection::Line { origin, normal } => p - normal * (2.0 * (p - origin).dot(normal)),
            Reflection::Circle { center, radius } => {
                let q = p - center;
                center + q * (radius * radius / q.dot(q))
            }
        }
    }

    /// Differential of the reflection at `p` applied to `d`.
    pub fn map_direction(&self, p: Param, d: Param) -> Param {
        match *self {
            Reflection::Line { normal, .. } => d - normal * (2.0 * d.dot(normal)),
            Reflection::Circle { center, radius } => {
                let q = p - center;
                let q2 = q.dot(q);
                (d * q2 - q * (2.0 * q.dot(d))) * (radius * radius / (q2 * q2))
            }
        }
    }
}

/// Angle of the line field extended across a boundary by reflection.
fn reflected_angle<F: CurvatureField>(field: &F, mirror: &Reflection, s: Param, tol: &Tolerances) -> Result<f64> {
    if mirror.is_inside(s) {
        direction_angle(field, s, tol)
    } else {
        let image = mirror.map_point(s);
        let theta = direction_angle(field, image, tol)?;
        let d = mirror.map_direction(image, Param::polar(1.0, theta));
        Ok(d.arg())
    }
}

/// `|II(t, n)|` for the first-form unit tangent `t` and its first-form normal.
pub fn boundary_shear(forms: &Forms, tangent: Param) -> f64 {
    let first = forms.first;
    // first-form orthogonal complement of t
    let n = Param::new(-(first.uv * tangent.u + first.vv * tangent.v), first.uu * tangent.u + first.uv * tangent.v);
    let (tn, nn) = (first.norm(tangent), first.norm(n));
    libm::fabs(forms.second.apply(tangent, n)) / (tn * nn)
}

fn require_line_of_curvature<F: CurvatureField>(field: &F, p: Param, tangent: Param, tol: &Tolerances) -> Result<()> {
    let forms = field.forms(p)?;
    let frame = forms.principal(tol.principal_degenerate)?;
    let residual = boundary_shear(&forms, tangent);
    let gate = tol.joachimsthal * (1.0 + libm::fabs(frame.kappa1).max(libm::fabs(frame.kappa2)));
    if residual > gate {
        return Err(GeometryError::NotLineOfCurvature { residual });
    }
    Ok(())
}

/// Rotation index at a point of a smooth boundary edge: half the index of
/// the field reflected onto the full disk.
pub fn rotation_index_boundary<F: CurvatureField>(field: &F, point: Param, arc_radius: f64, tol: &Tolerances) -> Result<f64> {
    let domain = field.domain();
    let locate_tol = 1e-9 * domain.diameter();
    let edge = match domain.locate(point, locate_tol) {
        Location::Edge(e) => e,
        Location::Vertex(_) => return Err(GeometryError::VertexPoint { u: point.u, v: point.v }),
        _ => return Err(GeometryError::NotOnBoundary { u: point.u, v: point.v }),
    };
    let (tangent, _) = domain.edge_frame(edge, point)?;
    require_line_of_curvature(field, point, tangent, tol)?;
    let mirror = Reflection::for_edge(domain, edge, point)?;
    let total = closed_variation(|t| Ok(2.0 * reflected_angle(field, &mirror, point + Param::polar(arc_radius, TAU * t), tol)?))?;
    Ok(0.5 * total / (2.0 * TAU))
}

/// Vertex index by corner straightening, with the direct arc formula as a
/// cross-check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VertexIndex {
    /// Index from `w = z^{π/ξ}` followed by reflection.
    pub straightened: f64,
    /// `(A + π − ξ)/2π`, with `A` the turning of the line field along the arc.
    pub direct: f64,
    /// Corner angle in the parameter plane used for straightening.
    pub parameter_angle: f64,
}

/// Rotation index at a vertex.
pub fn rotation_index_vertex<F: CurvatureField>(field: &F, vertex: &Vertex, arc_radius: f64, tol: &Tolerances) -> Result<VertexIndex> {
    let xi = vertex.parameter_angle();
    if xi < tol.degenerate_corner || xi > TAU - tol.degenerate_corner {
        return Err(GeometryError::DegenerateCorner { angle: xi });
    }
    // both edges must be lines of curvature near the corner
    require_line_of_curvature(field, vertex.point + vertex.next_dir * arc_radius, vertex.next_dir, tol)?;
    require_line_of_curvature(field, vertex.point + vertex.prev_dir * arc_radius, vertex.prev_dir, tol)?;

    let alpha0 = vertex.next_dir.arg();
    let k = PI / xi;
    let straightened_angle = |t: f64| -> Result<f64> {
        // t ∈ [0,1) ↦ ψ ∈ [−π, π)
        let psi = TAU * t - PI;
        let psi_abs = libm::fabs(psi).min(PI);
        let arg_z = psi_abs / k;
        let q = vertex.point + Param::polar(arc_radius, alpha0 + arg_z);
        let theta = direction_angle(field, q, tol)? - alpha0;
        let transported = theta + (k - 1.0) * arg_z;
        Ok(if psi < 0.0 { -2.0 * transported } else { 2.0 * transported })
    };
    let total = closed_variation(straightened_angle)?;
    let straightened = 0.5 * total / (2.0 * TAU);

    let turning = open_variation(|t| Ok(2.0 * direction_angle(field, vertex.point + Param::polar(arc_radius, alpha0 + xi * t), tol)?))?;
    let direct = (0.5 * turning + PI - xi) / TAU;
    Ok(VertexIndex {
        straightened,
        direct,
        parameter_angle: xi,
    })
}

/// Interior angle of a vertex measured in the induced first form.
pub fn vertex_angle<F: CurvatureField>(field: &F, vertex: &Vertex) -> Result<f64> {
    let a = vertex.next_dir;
    let b = vertex.prev_dir;
    if a.norm() == 0.0 || b.norm() == 0.0 {
        return Err(GeometryError::ZeroTangent);
    }
    let first = field.forms(vertex.point)?.first;
    let area = libm::sqrt(first.det().max(0.0));
    let t = libm::atan2(area * a.cross(b), first.apply(a, b));
    Ok(if t <= 0.0 { t + TAU } else { t })
}

/// Estimated order of `Φ` at a vertex from `|Φ|` along the bisecting ray:
/// `|Φ| ∼ ρⁿ`, so a simple pole shows as monotone growth with `n = −1`.
/// Returns `None` on non-isothermal charts.
pub fn vertex_order<F: CurvatureField>(field: &F, vertex: &Vertex, radius: f64, tol: &Tolerances) -> Result<Option<i32>> {
    let bisector = Param::polar(1.0, vertex.next_dir.arg() + 0.5 * vertex.parameter_angle());
    let mut mags = [0.0; 4];
    for (i, m) in mags.iter_mut().enumerate() {
        let rho = radius / (1u32 << i) as f64;
        match hopf_function(field, vertex.point + bisector * rho, tol.isothermal) {
            Ok(s) => *m = s.phi.norm(),
            Err(GeometryError::NotIsothermal { .. }) => return Ok(None),
            Err(GeometryError::NonFinite) => return Ok(Some(-1)),
            Err(e) => return Err(e),
        }
    }
    let scale = mags.iter().copied().fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(Some(0));
    }
    if mags[3] <= 1e-12 * scale {
        // vanishing faster than we can resolve
        return Ok(Some(4));
    }
    let slope = libm::log2(mags[0] / mags[3]) / 3.0;
    let growing = mags.windows(2).all(|w| w[1] > w[0]);
    let order = libm::round(slope) as i32;
    Ok(Some(if growing && order < 0 { -1 } else { order.max(0) }))
}

/// Result of an umbilic scan.
#[derive(Clone, Debug, PartialEq)]
pub struct UmbilicScan {
    pub everywhere_umbilic: bool,
    pub points: Vec<(Param, Location)>,
}

/// Relative umbilicity `(κ₁ − κ₂)/(1 + |H|)` at `p`.
fn umbilicity<F: CurvatureField>(field: &F, p: Param) -> Option<f64> {
    let forms = field.forms(p).ok()?;
    let frame = forms.principal(0.0).ok()?;
    Some((frame.kappa1 - frame.kappa2) / (1.0 + libm::fabs(frame.mean)))
}

/// Locate isolated umbilic points: discrete local minima of the relative
/// umbilicity on an `n × n` grid, refined by step-halving pattern search and
/// kept when below `tol.umbilic`. Hits closer than `merge_radius` are merged.
pub fn find_umbilics<F: CurvatureField>(field: &F, grid: usize, merge_radius: f64, tol: &Tolerances) -> Result<UmbilicScan> {
    let domain = *field.domain();
    let n = grid.max(3);
    let (u0, u1, v0, v1) = domain.bounding_box();
    let slack = 1e-12 * domain.diameter();
    let at = |i: usize, j: usize| Param::new(u0 + (u1 - u0) * i as f64 / (n - 1) as f64, v0 + (v1 - v0) * j as f64 / (n - 1) as f64);
    let mut values: Vec<Option<f64>> = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let p = at(i, j);
            values.push(if domain.contains(p, slack) { umbilicity(field, p) } else { None });
        }
    }
    let sampled: Vec<f64> = values.iter().flatten().copied().collect();
    if sampled.is_empty() {
        return Err(GeometryError::GridTooCoarse { points: 0 });
    }
    if sampled.iter().all(|&d| d < tol.umbilic) {
        return Ok(UmbilicScan {
            everywhere_umbilic: true,
            points: Vec::new(),
        });
    }

    let (hu, hv) = domain.grid_spacing(n);
    let mut hits: Vec<(Param, f64)> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let Some(d) = values[j * n + i] else { continue };
            let mut is_min = true;
            for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if ii < 0 || jj < 0 || ii >= n as i64 || jj >= n as i64 {
                        continue;
                    }
                    if let Some(o) = values[jj as usize * n + ii as usize] {
                        if o < d {
                            is_min = false;
                        }
                    }
                }
            }
            if !is_min {
                continue;
            }
            let (p, value) = refine_minimum(field, &domain, at(i, j), hu.max(hv), d);
            if value < tol.umbilic {
                hits.push((p, value));
            }
        }
    }

    hits.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut merged: Vec<Param> = Vec::new();
    for (p, _) in hits {
        if merged.iter().all(|q| q.distance(p) > merge_radius) {
            merged.push(p);
        }
    }
    merged.sort_by(|a, b| a.u.total_cmp(&b.u).then(a.v.total_cmp(&b.v)));
    let locate_tol = (1e-6 * domain.diameter()).max(1e-9);
    let vertices = domain.vertices();
    let points = merged
        .into_iter()
        .map(|p| {
            let loc = match vertices.iter().position(|vx| vx.point.distance(p) <= merge_radius) {
                Some(k) => Location::Vertex(k),
                None => domain.locate(p, locate_tol),
            };
            (p, loc)
        })
        .collect();
    Ok(UmbilicScan {
        everywhere_umbilic: false,
        points,
    })
}

fn refine_minimum<F: CurvatureField>(field: &F, domain: &PatchDomain, start: Param, cell: f64, start_value: f64) -> (Param, f64) {
    const R: f64 = core::f64::consts::FRAC_1_SQRT_2;
    const DIRS: [(f64, f64); 8] = [
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (R, R),
        (-R, R),
        (R, -R),
        (-R, -R),
    ];
    let mut best = (start, start_value);
    let mut step = 0.5 * cell;
    let floor = 1e-13 * domain.diameter();
    let mut iterations = 0;
    while step > floor && iterations < 4000 {
        iterations += 1;
        let mut improved = false;
        for (du, dv) in DIRS {
            let q = best.0 + Param::new(du, dv) * step;
            if !domain.contains(q, 0.0) {
                continue;
            }
            if let Some(val) = umbilicity(field, q) {
                if val < best.1 {
                    best = (q, val);
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
        if best.1 == 0.0 {
            break;
        }
    }
    best
}

/// Loop radii derived from the grid spacing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Radii {
    pub interior: f64,
    pub boundary: f64,
    pub merge: f64,
}

impl Radii {
    /// Interior loops of 5 cells, boundary and vertex arcs of 8, merging within 3.
    pub fn from_grid(domain: &PatchDomain, grid: usize) -> Self {
        let (hu, hv) = domain.grid_spacing(grid);
        let cell = hu.max(hv);
        Self {
            interior: 5.0 * cell,
            boundary: 8.0 * cell,
            merge: 3.0 * cell,
        }
    }
}

/// Settings for a full singularity analysis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndexConfig {
    pub grid: usize,
    pub tolerances: Tolerances,
}

impl Default for IndexConfig {
    fn default() -> Self {
        Self {
            grid: DEFAULT_GRID,
            tolerances: Tolerances::default(),
        }
    }
}

fn vertex_arc_radius(domain: &PatchDomain, vertex: &Vertex, wanted: f64) -> f64 {
    let edges = domain.edges();
    let shortest = edges[vertex.next_edge]
        .parameter_length()
        .min(edges[vertex.prev_edge].parameter_length());
    wanted.min(0.25 * shortest)
}

/// Locate every singularity of the curvature-line field (umbilics and all
/// vertices), compute their indices and assemble the Poincaré–Hopf report.
pub fn analyze_singularities<F: CurvatureField>(field: &F, config: &IndexConfig) -> Result<IndexReport> {
    let tol = &config.tolerances;
    let domain = *field.domain();
    let radii = Radii::from_grid(&domain, config.grid);
    let scan = find_umbilics(field, config.grid, radii.merge, tol)?;
    if scan.everywhere_umbilic {
        return Ok(poincare_hopf_report(Vec::new(), &domain, true, tol));
    }
    let mut records = Vec::new();
    for (p, loc) in &scan.points {
        match *loc {
            Location::Interior => {
                let dist = domain.edges().iter().map(|e| e.project(*p).1).fold(f64::INFINITY, f64::min);
                let r = radii.interior.min(0.5 * dist);
                let idx = rotation_index_interior(field, *p, r, tol)?;
                records.push(UmbilicRecord {
                    location: *p,
                    kind: SingularityKind::Interior,
                    order: idx.order(),
                    index: idx.index(),
                    method: idx.method(),
                    cross_check: idx.argument.map(|_| idx.direction),
                    angle: None,
                });
            }
            Location::Edge(_) => {
                let index = rotation_index_boundary(field, *p, radii.boundary, tol)?;
                records.push(UmbilicRecord {
                    location: *p,
                    kind: SingularityKind::BoundaryRegular,
                    order: libm::round(-4.0 * index) as i32,
                    index,
                    method: IndexMethod::Reflection,
                    cross_check: None,
                    angle: None,
                });
            }
            // vertices are recorded below whether or not they are umbilic
            Location::Vertex(_) | Location::Outside => {}
        }
    }
    for vertex in domain.vertices() {
        let r = vertex_arc_radius(&domain, &vertex, radii.boundary);
        let idx = rotation_index_vertex(field, &vertex, r, tol)?;
        let angle = vertex_angle(field, &vertex)?;
        let order = vertex_order(field, &vertex, r, tol)?.unwrap_or(0);
        records.push(UmbilicRecord {
            location: vertex.point,
            kind: if angle < PI {
                SingularityKind::VertexAcute
            } else {
                SingularityKind::VertexReflex
            },
            order,
            index: idx.straightened,
            method: IndexMethod::CornerStraightening,
            cross_check: Some(idx.direct),
            angle: Some(angle),
        });
    }
    Ok(poincare_hopf_report(records, &domain, false, tol))
}

/// Sum the indices and compare with the Euler characteristic.
pub fn poincare_hopf_report(records: Vec<UmbilicRecord>, domain: &PatchDomain, everywhere_umbilic: bool, tol: &Tolerances) -> IndexReport {
    let chi = domain.euler_characteristic();
    let index_sum: f64 = records.iter().map(|r| r.index).sum();
    let acute = records.iter().filter(|r| r.kind == SingularityKind::VertexAcute).count();
    let gate_violations: Vec<usize> = records
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.within_gate(tol.index))
        .map(|(i, _)| i)
        .collect();
    let residual = libm::fabs(index_sum - chi as f64);
    let consistent = everywhere_umbilic || (residual <= tol.index && gate_violations.is_empty());
    IndexReport {
        records,
        index_sum,
        euler_characteristic: chi,
        residual,
        everywhere_umbilic,
        acute_vertices: acute,
        index_bound: acute as f64 / 4.0,
        contradiction_regime: acute <= 3,
        gate_violations,
        consistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::field::SyntheticHopfField;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn loop_samples(field: &SyntheticHopfField, n: usize) -> Vec<HopfSample> {
        (0..n)
            .map(|k| {
                let z = Param::polar(1.0, TAU * k as f64 / n as f64);
                HopfSample {
                    z,
                    phi: field.phi(z),
                    lambda2: 1.0,
                }
            })
            .collect()
    }

    #[test]
    fn winding_examples() {
        let d = PatchDomain::disk(2.0).unwrap();
        for (n, expected) in [(1, 1), (2, 2), (3, 3), (4, 4), (-1, -1)] {
            let f = SyntheticHopfField::power(d, n);
            assert_eq!(winding_of_phi(&loop_samples(&f, 64)).unwrap(), expected);
        }
    }

    #[test]
    fn winding_rejects_sparse_loops() {
        let f = SyntheticHopfField::power(PatchDomain::disk(2.0).unwrap(), 4);
        assert!(matches!(winding_of_phi(&loop_samples(&f, 8)), Err(GeometryError::SamplingDensity { .. })));
    }

    #[test]
    fn winding_rejects_zero_on_loop() {
        let f = SyntheticHopfField::new(PatchDomain::disk(2.0).unwrap(), |z| z - Complex64::new(1.0, 0.0));
        assert!(matches!(winding_of_phi(&loop_samples(&f, 64)), Err(GeometryError::BelowNoiseFloor { .. })));
    }

    #[test]
    fn interior_index_of_powers() {
        let d = PatchDomain::disk(1.0).unwrap();
        for (n, expected) in [(1, -0.5), (3, -1.5), (-1, 0.5)] {
            let f = SyntheticHopfField::power(d, n);
            let idx = rotation_index_interior(&f, Param::default(), 0.5, &tol()).unwrap();
            assert!((idx.argument.unwrap() - expected).abs() < 1e-12);
            assert!((idx.direction - expected).abs() < 1e-12);
            assert_eq!(idx.order(), n);
        }
    }

    #[test]
    fn interior_index_is_radius_robust() {
        let f = SyntheticHopfField::new(PatchDomain::disk(1.0).unwrap(), |z| z * z * (z + Complex64::new(2.0, 0.0)));
        let a = rotation_index_interior(&f, Param::default(), 0.4, &tol()).unwrap();
        let b = rotation_index_interior(&f, Param::default(), 0.2, &tol()).unwrap();
        assert!((a.index() + 1.0).abs() < 0.02 && (b.index() + 1.0).abs() < 0.02);
    }

    #[test]
    fn boundary_index_of_powers() {
        let d = PatchDomain::half_disk(1.0).unwrap();
        for (n, expected) in [(1, -0.25), (2, -0.5)] {
            let f = SyntheticHopfField::power(d, n);
            let idx = rotation_index_boundary(&f, Param::default(), 0.5, &tol()).unwrap();
            assert!((idx - expected).abs() < 1e-12, "{n}: {idx}");
        }
    }

    #[test]
    fn boundary_index_rejects_non_principal_edges() {
        // Φ = i z makes the real axis a diagonal of the line field
        let f = SyntheticHopfField::new(PatchDomain::half_disk(1.0).unwrap(), |z| Complex64::i() * (z + Complex64::new(0.5, 0.0)));
        let err = rotation_index_boundary(&f, Param::new(0.2, 0.0), 0.1, &tol()).unwrap_err();
        assert!(matches!(err, GeometryError::NotLineOfCurvature { .. }));
    }

    #[test]
    fn boundary_index_at_regular_catenoid_point() {
        let cat = catalog::truncated_catenoid(1.0, (0.5, 1.5), 2.0 * PI / 3.0).unwrap();
        let idx = rotation_index_boundary(&cat.patch, Param::new(1.0, 0.0), 0.1, &tol()).unwrap();
        assert!(idx.abs() < 1e-12);
        let idx = rotation_index_boundary(&cat.patch, Param::new(0.5, 1.0), 0.1, &tol()).unwrap();
        assert!(idx.abs() < 1e-12);
    }

    #[test]
    fn circular_edge_reflection() {
        // Φ = (z − 1)·c with c chosen so the unit circle is principal near 1:
        // Φ z² real on |z| = 1 for Φ = (z − 1)²/z² · z̄... use the disk-constant field instead
        let f = SyntheticHopfField::new(PatchDomain::disk(1.0).unwrap(), |z| Complex64::new(1.0, 0.0) / (z * z));
        let idx = rotation_index_boundary(&f, Param::new(1.0, 0.0), 0.2, &tol()).unwrap();
        assert!(idx.abs() < 1e-9, "{idx}");
    }

    #[test]
    fn half_disk_as_straight_vertex() {
        // the diameter/arc corner is a π/2 corner; a pseudo-vertex of angle π
        // on the diameter reduces to the boundary construction
        let f = SyntheticHopfField::power(PatchDomain::half_disk(1.0).unwrap(), 1);
        let vertex = Vertex {
            point: Param::default(),
            next_dir: Param::new(1.0, 0.0),
            prev_dir: Param::new(-1.0, 0.0),
            next_edge: 0,
            prev_edge: 0,
        };
        let idx = rotation_index_vertex(&f, &vertex, 0.5, &tol()).unwrap();
        assert!((idx.straightened + 0.25).abs() < 1e-12);
        assert!((idx.direct + 0.25).abs() < 1e-12);
    }

    #[test]
    fn quarter_plane_corner_dual_methods() {
        // Φ(w) = w in the straightened chart is Φ(z) = 4z⁴ on the quarter plane
        let domain = PatchDomain::rectangle(0.0, 1.0, 0.0, 1.0).unwrap();
        let f = SyntheticHopfField::new(domain, |z| z.powi(4) * 4.0);
        let vertex = domain.vertices()[0];
        let idx = rotation_index_vertex(&f, &vertex, 0.5, &tol()).unwrap();
        assert!((idx.straightened - idx.direct).abs() < 0.02);
        assert!((idx.straightened + 0.25).abs() < 1e-9, "{}", idx.straightened);
    }

    #[test]
    fn catenoid_vertices() {
        let cat = catalog::truncated_catenoid(1.0, (0.5, 1.5), 2.0 * PI / 3.0).unwrap();
        for vertex in cat.patch.domain().vertices() {
            let idx = rotation_index_vertex(&cat.patch, &vertex, 0.05, &tol()).unwrap();
            assert!((idx.straightened - 0.25).abs() < 1e-9);
            assert!((idx.direct - 0.25).abs() < 1e-9);
            let angle = vertex_angle(&cat.patch, &vertex).unwrap();
            assert!((angle - PI / 2.0).abs() < 1e-9);
            assert_eq!(vertex_order(&cat.patch, &vertex, 0.05, &tol()).unwrap(), Some(0));
        }
    }

    #[test]
    fn vertex_angle_examples() {
        let square = catalog::planar_square(1.0).unwrap();
        for vx in square.patch.domain().vertices() {
            assert!((vertex_angle(&square.patch, &vx).unwrap() - PI / 2.0).abs() < 1e-9);
        }
        let wedge = catalog::planar_wedge(3.0 * PI / 4.0).unwrap();
        let vx = wedge.patch.domain().vertices()[0];
        assert!((vertex_angle(&wedge.patch, &vx).unwrap() - 3.0 * PI / 4.0).abs() < 1e-9);
    }

    #[test]
    fn pole_detection_at_corner() {
        let domain = PatchDomain::rectangle(0.0, 1.0, 0.0, 1.0).unwrap();
        let f = SyntheticHopfField::new(domain, |z| z.inv());
        let vertex = domain.vertices()[0];
        assert_eq!(vertex_order(&f, &vertex, 0.4, &tol()).unwrap(), Some(-1));
        let f = SyntheticHopfField::power(domain, 2);
        assert_eq!(vertex_order(&f, &vertex, 0.4, &tol()).unwrap(), Some(2));
    }

    #[test]
    fn umbilic_scan_examples() {
        let cat = catalog::truncated_catenoid(1.0, (0.5, 1.5), 2.0 * PI / 3.0).unwrap();
        let scan = find_umbilics(&cat.patch, 33, 0.1, &tol()).unwrap();
        assert!(!scan.everywhere_umbilic && scan.points.is_empty());
        let cap = catalog::hyperbolic_cap(1.0, 1.0).unwrap();
        assert!(find_umbilics(&cap.patch, 33, 0.1, &tol()).unwrap().everywhere_umbilic);
        let perturbed = catalog::perturbed_cap(Param::new(0.15, -0.1), 0.2).unwrap();
        let scan = find_umbilics(&perturbed.patch, 33, 0.1, &tol()).unwrap();
        assert_eq!(scan.points.len(), 1);
        let (_, _, cell_u, _) = (0, 0, perturbed.patch.domain().grid_spacing(33).0, 0);
        assert!(scan.points[0].0.distance(Param::new(0.15, -0.1)) < cell_u);
        assert_eq!(scan.points[0].1, Location::Interior);
    }

    #[test]
    fn perturbed_cap_index() {
        let perturbed = catalog::perturbed_cap(Param::new(0.15, -0.1), 0.2).unwrap();
        let report = analyze_singularities(&perturbed.patch, &IndexConfig { grid: 65, ..Default::default() }).unwrap();
        assert_eq!(report.records.len(), 1);
        let r = &report.records[0];
        assert_eq!(r.method, IndexMethod::DirectionWinding);
        assert!((r.index + 0.5).abs() < 0.02);
        assert_eq!(r.order, 1);
    }

    #[test]
    fn report_examples() {
        let cat = catalog::truncated_catenoid(1.0, (0.5, 1.5), 2.0 * PI / 3.0).unwrap();
        let report = analyze_singularities(&cat.patch, &IndexConfig { grid: 65, ..Default::default() }).unwrap();
        assert_eq!(report.records.len(), 4);
        assert!((report.index_sum - 1.0).abs() < 1e-9);
        assert!(report.consistent && !report.contradiction_regime);

        let square = catalog::planar_square(1.0).unwrap();
        let report = analyze_singularities(&square.patch, &IndexConfig { grid: 33, ..Default::default() }).unwrap();
        assert!(report.everywhere_umbilic && report.records.is_empty() && report.consistent);

        let synthetic = alloc::vec![UmbilicRecord {
            location: Param::default(),
            kind: SingularityKind::Interior,
            order: 2,
            index: -1.0,
            method: IndexMethod::ArgumentPrinciple,
            cross_check: None,
            angle: None,
        }];
        let report = poincare_hopf_report(synthetic, &PatchDomain::disk(1.0).unwrap(), false, &tol());
        assert_eq!(report.index_sum, -1.0);
        assert_eq!(report.residual, 2.0);
        assert!(!report.consistent);
    }
}
