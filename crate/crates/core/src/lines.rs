//! Lines of curvature: the principal line field and its integral curves.
//!
//! Principal directions `d = (du, dv)` solve
//!
//! ```text
//! (Ef − Fe) du² + (Eg − Ge) du dv + (Fg − Gf) dv² = 0.
//! ```
//!
//! Writing `d = (cos t, sin t)` turns this into `R cos(2t − δ) = −(A+C)/2`,
//! which is solved in closed form. Curves are integrated with classical
//! RK4 on the unit parameter-plane direction, flipping each stage to agree
//! with the previous step since the field has no orientation.

use alloc::vec::Vec;

use crate::field::CurvatureField;
use crate::surface::Forms;
use crate::{GeometryError, LVector3, Param, Result};

/// Which principal family to follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Family {
    /// Lines along which the normal curvature is `κ₁` (the larger one).
    First,
    /// Lines along which the normal curvature is `κ₂`.
    Second,
}

impl Family {
    pub fn other(self) -> Self {
        match self {
            Family::First => Family::Second,
            Family::Second => Family::First,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::First => "1",
            Family::Second => "2",
        }
    }
}

/// Direction of travel along a line of curvature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Forward,
    Backward,
}

/// Coefficients `(A, B, C)` of the line-of-curvature quadratic.
pub fn line_coefficients(forms: &Forms) -> (f64, f64, f64) {
    let (e1, f1, g1) = (forms.first.uu, forms.first.uv, forms.first.vv);
    let (e2, f2, g2) = (forms.second.uu, forms.second.uv, forms.second.vv);
    (e1 * f2 - f1 * e2, e1 * g2 - g1 * e2, f1 * g2 - g1 * f2)
}

/// Value of the quadratic on `d`, scaled so that it reads as a normal
/// curvature difference times `λ²`: `|A du² + B du dv + C dv²| / (|d|² √(EG−F²))`.
pub fn line_residual(forms: &Forms, d: Param) -> f64 {
    let (a, b, c) = line_coefficients(forms);
    let q = a * d.u * d.u + b * d.u * d.v + c * d.v * d.v;
    libm::fabs(q) / (d.dot(d) * libm::sqrt(forms.first.det().max(f64::MIN_POSITIVE)))
}

/// Principal directions of the two families, unit in the first form, or
/// `None` where `|κ₁ − κ₂| < degenerate·(1 + |H|)`.
pub fn line_field(forms: &Forms, degenerate: f64) -> Result<Option<(Param, Param)>> {
    let frame = forms.principal(degenerate)?;
    if frame.directions.is_none() {
        return Ok(None);
    }
    let (a, b, c) = line_coefficients(forms);
    let half_diff = 0.5 * (a - c);
    let r = libm::hypot(half_diff, 0.5 * b);
    if r == 0.0 {
        return Ok(None);
    }
    let delta = libm::atan2(0.5 * b, half_diff);
    let spread = libm::acos((-(a + c) / (2.0 * r)).clamp(-1.0, 1.0));
    let d_plus = Param::polar(1.0, 0.5 * (delta + spread));
    let d_minus = Param::polar(1.0, 0.5 * (delta - spread));
    let (d1, d2) = if forms.normal_curvature(d_plus) >= forms.normal_curvature(d_minus) {
        (d_plus, d_minus)
    } else {
        (d_minus, d_plus)
    };
    let unit = |d: Param| crate::surface::canonical_direction(d * (1.0 / forms.first.norm(d)));
    Ok(Some((unit(d1), unit(d2))))
}

fn family_direction<F: CurvatureField>(field: &F, p: Param, family: Family, degenerate: f64) -> Result<Option<Param>> {
    let forms = field.forms(p)?;
    // the integrator steps in parameter-plane arc length
    Ok(line_field(&forms, degenerate)?.map(|(d1, d2)| match family {
        Family::First => d1 * (1.0 / d1.norm()),
        Family::Second => d2 * (1.0 / d2.norm()),
    }))
}

/// Integration settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceConfig {
    /// Parameter-plane step length.
    pub step: f64,
    /// Step halving stops below this length.
    pub min_step: f64,
    pub max_steps: usize,
    /// Relative `κ₁ − κ₂` below which the trace stops at an umbilic.
    pub umbilic: f64,
    /// Bisect the last step onto the boundary; otherwise stop at the last
    /// interior point.
    pub boundary_stop: bool,
    /// Accuracy of the final boundary landing.
    pub boundary_tol: f64,
}

impl TraceConfig {
    /// Step of `diameter/400`, at most 4000 steps, umbilic stop at `1e-5`.
    pub fn for_domain(domain: &crate::PatchDomain) -> Self {
        let diam = domain.diameter();
        Self {
            step: diam / 400.0,
            min_step: diam * 1e-9,
            max_steps: 4000,
            umbilic: 1e-5,
            boundary_stop: true,
            boundary_tol: (diam * 1e-12).min(1e-10),
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.min_step = self.min_step.min(step * 1e-6);
        self.step = step;
        self
    }
}

/// Why a trace ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum StopReason {
    Boundary,
    Umbilic,
    MaxSteps,
    /// The field could not be evaluated even at the minimal step.
    FieldDegenerate,
}

/// One integrated line of curvature.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTrace {
    pub family: Family,
    pub points: Vec<Param>,
    /// Ambient image of `points`, when the field carries an immersion.
    pub positions: Vec<LVector3>,
    pub stop: StopReason,
    /// Parameter-plane arc length.
    pub length: f64,
}

impl CurvatureTrace {
    pub fn start(&self) -> Param {
        self.points[0]
    }

    pub fn end(&self) -> Param {
        *self.points.last().expect("trace has at least one point")
    }
}

fn relative_umbilicity(forms: &Forms) -> Result<f64> {
    let frame = forms.principal(0.0)?;
    Ok((frame.kappa1 - frame.kappa2) / (1.0 + libm::fabs(frame.mean)))
}

/// One RK4 step of length `h` along `reference`-aligned directions.
fn rk4_step<F: CurvatureField>(field: &F, p: Param, reference: Param, h: f64, family: Family, degenerate: f64) -> Result<Option<(Param, Param)>> {
    let domain = field.domain();
    let slope = |q: Param, prev: Param| -> Result<Option<Param>> {
        if !domain.contains(q, 0.0) {
            return Ok(None);
        }
        Ok(family_direction(field, q, family, degenerate)?.map(|d| if d.dot(prev) < 0.0 { -d } else { d }))
    };
    let Some(k1) = slope(p, reference)? else { return Ok(None) };
    let Some(k2) = slope(p + k1 * (0.5 * h), k1)? else { return Ok(None) };
    let Some(k3) = slope(p + k2 * (0.5 * h), k1)? else { return Ok(None) };
    let Some(k4) = slope(p + k3 * h, k1)? else { return Ok(None) };
    let incr = (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (1.0 / 6.0);
    Ok(Some((p + incr * h, k1)))
}

/// Integrate a line of curvature of `family` from `start`.
///
/// `Forward` follows the canonical direction at `start` (nonnegative `u`
/// component), `Backward` its opposite. Tracing stops on the boundary (the
/// last step is bisected onto it), at an umbilic, or after `max_steps`.
pub fn trace<F: CurvatureField>(field: &F, start: Param, family: Family, sense: Sense, config: &TraceConfig) -> Result<CurvatureTrace> {
    let domain = *field.domain();
    if !(config.step > 0.0 && config.max_steps > 0) {
        return Err(GeometryError::InvalidParameter("trace step and step budget must be positive"));
    }
    if !domain.contains(start, config.boundary_tol) {
        return Err(GeometryError::OutsideDomain { u: start.u, v: start.v });
    }
    let degenerate = config.umbilic;
    let mut points = alloc::vec![start];
    let mut length = 0.0;
    let push = |points: &mut Vec<Param>, q: Param| points.push(q);

    let initial = match family_direction(field, start, family, degenerate)? {
        Some(d) => d,
        None => return Ok(finish(field, family, points, StopReason::Umbilic, 0.0)),
    };
    let mut heading = match sense {
        Sense::Forward => initial,
        Sense::Backward => -initial,
    };
    let mut p = start;
    let mut steps = 0;
    let stop = loop {
        if steps >= config.max_steps {
            break StopReason::MaxSteps;
        }
        let forms = field.forms(p)?;
        if steps > 0 && relative_umbilicity(&forms)? < config.umbilic {
            break StopReason::Umbilic;
        }
        let mut h = config.step;
        let mut landed = None;
        let mut stepped = None;
        while h >= config.min_step {
            match rk4_step(field, p, heading, h, family, degenerate) {
                Ok(Some((q, k1))) if domain.contains(q, 0.0) => {
                    stepped = Some((q, k1));
                    break;
                }
                Ok(Some(_)) | Ok(None) => {
                    // the step leaves the domain: land on the boundary if the
                    // first stage still points outward from here
                    if !config.boundary_stop {
                        if domain.contains(p + heading * h, 0.0) {
                            h *= 0.5;
                            continue;
                        }
                        landed = Some(p);
                        break;
                    }
                    if let Some(q) = land_on_boundary(field, p, heading, h, family, degenerate, config)? {
                        landed = Some(q);
                        break;
                    }
                    h *= 0.5;
                }
                Err(GeometryError::Umbilic { .. }) | Err(GeometryError::CausalDegeneracy { .. }) | Err(GeometryError::NonFinite) => h *= 0.5,
                Err(e) => return Err(e),
            }
        }
        if let Some(q) = landed {
            if q != p {
                length += q.distance(p);
                push(&mut points, q);
            }
            break StopReason::Boundary;
        }
        let Some((q, k1)) = stepped else {
            break StopReason::FieldDegenerate;
        };
        length += q.distance(p);
        heading = k1;
        push(&mut points, q);
        steps += 1;
        // |κ₁ − κ₂| vanishes linearly at a generic umbilic: stop when the
        // decrease over this step extrapolates to zero within the next one
        let (before, after) = (relative_umbilicity(&forms)?, relative_umbilicity(&field.forms(q)?)?);
        if after < before && after <= before - after {
            let ahead = (q - p) * (after / (before - after));
            if domain.contains(q + ahead, 0.0) {
                length += ahead.norm();
                push(&mut points, q + ahead);
            }
            break StopReason::Umbilic;
        }
        p = q;
    };
    Ok(finish(field, family, points, stop, length))
}

/// Bisect the step length so that the RK4 endpoint sits on the boundary.
fn land_on_boundary<F: CurvatureField>(field: &F, p: Param, heading: Param, h: f64, family: Family, degenerate: f64, config: &TraceConfig) -> Result<Option<Param>> {
    let domain = field.domain();
    // Euler probe: only land when the full step clearly exits
    let dir = match family_direction(field, p, family, degenerate)? {
        Some(d) if d.dot(heading) < 0.0 => -d,
        Some(d) => d,
        None => return Ok(None),
    };
    if domain.contains(p + dir * h, 0.0) {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, h);
    let mut best = p;
    for _ in 0..200 {
        if hi - lo <= config.boundary_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let q = match rk4_step(field, p, heading, mid, family, degenerate)? {
            Some((q, _)) => q,
            None => p + dir * mid,
        };
        if domain.contains(q, 0.0) {
            lo = mid;
            best = q;
        } else {
            hi = mid;
        }
    }
    Ok(Some(best))
}

fn finish<F: CurvatureField>(field: &F, family: Family, points: Vec<Param>, stop: StopReason, length: f64) -> CurvatureTrace {
    let positions = points.iter().filter_map(|q| field.position(*q)).collect::<Vec<_>>();
    let positions = if positions.len() == points.len() { positions } else { Vec::new() };
    CurvatureTrace {
        family,
        points,
        positions,
        stop,
        length,
    }
}

/// Trace both senses from `start` and join them into one curve running
/// from the backward end to the forward end.
pub fn trace_through<F: CurvatureField>(field: &F, start: Param, family: Family, config: &TraceConfig) -> Result<CurvatureTrace> {
    let back = trace(field, start, family, Sense::Backward, config)?;
    let fwd = trace(field, start, family, Sense::Forward, config)?;
    let mut points: Vec<Param> = back.points.iter().rev().copied().collect();
    points.extend_from_slice(&fwd.points[1..]);
    let stop = if back.stop == StopReason::Boundary { fwd.stop } else { back.stop };
    Ok(finish(field, family, points, stop, back.length + fwd.length))
}

/// Largest `line_residual` along a trace, using chord directions.
pub fn trace_residual<F: CurvatureField>(field: &F, trace: &CurvatureTrace) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for w in trace.points.windows(2) {
        let d = w[1] - w[0];
        if d.norm() == 0.0 {
            continue;
        }
        let mid = (w[0] + w[1]) * 0.5;
        let forms = field.forms(mid)?;
        worst = worst.max(line_residual(&forms, d));
    }
    Ok(worst)
}

/// Evenly spaced starting points on the grid interior, `count` per axis.
pub fn seed_points(domain: &crate::PatchDomain, count: usize) -> Vec<Param> {
    let (a, b, c, d) = domain.bounding_box();
    let mut out = Vec::new();
    for j in 0..count {
        for i in 0..count {
            let p = Param::new(a + (b - a) * (i as f64 + 0.5) / count as f64, c + (d - c) * (j as f64 + 0.5) / count as f64);
            if domain.contains(p, 0.0) {
                out.push(p);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::field::SyntheticHopfField;
    use crate::surface::QuadraticForm;
    use crate::PatchDomain;
    use proptest::prelude::*;

    #[test]
    fn quadratic_field_matches_eigenvectors() {
        let forms = Forms {
            first: QuadraticForm::new(2.0, 0.3, 1.0),
            second: QuadraticForm::new(0.4, -0.7, 1.3),
        };
        let (d1, d2) = line_field(&forms, 1e-8).unwrap().unwrap();
        let frame = forms.principal(1e-8).unwrap();
        let (e1, e2) = frame.directions.unwrap();
        assert!(d1.cross(e1).abs() / e1.norm() < 1e-12);
        assert!(d2.cross(e2).abs() / e2.norm() < 1e-12);
        assert!(line_residual(&forms, d1) < 1e-12 && line_residual(&forms, d2) < 1e-12);
        assert!(forms.first.apply(d1, d2).abs() < 1e-12);
    }

    #[test]
    fn umbilic_forms_have_no_field() {
        let forms = Forms {
            first: QuadraticForm::new(1.0, 0.0, 1.0),
            second: QuadraticForm::new(-1.0, 0.0, -1.0),
        };
        assert_eq!(line_field(&forms, 1e-8).unwrap(), None);
    }

    #[test]
    fn synthetic_isothermal_directions() {
        let axis = SyntheticHopfField::forms_for(num_complex::Complex64::new(1.0, 0.0), 0.0);
        let (d1, d2) = line_field(&axis, 1e-8).unwrap().unwrap();
        let mut found = [d1, d2];
        found.sort_by(|a, b| b.u.total_cmp(&a.u));
        assert!((found[0] - Param::new(1.0, 0.0)).norm() < 1e-15);
        assert!((found[1] - Param::new(0.0, 1.0)).norm() < 1e-15);
        // e − g = 0, f = 1, i.e. Φ = −2i
        let diagonal = SyntheticHopfField::forms_for(num_complex::Complex64::new(0.0, -2.0), 0.0);
        let (d1, d2) = line_field(&diagonal, 1e-8).unwrap().unwrap();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let mut found = [d1, d2];
        found.sort_by(|a, b| b.v.total_cmp(&a.v));
        assert!((found[0] - Param::new(r, r)).norm() < 1e-15);
        assert!((found[1] - Param::new(r, -r)).norm() < 1e-15);
    }

    #[test]
    fn catenoid_parallels_and_meridians() {
        // κ = −II(d,d)/I(d,d) is 1/(a sinh²σ) along θ and its negative along σ,
        // so the first family runs along the parallels
        let cat = catalog::lorentzian_catenoid(1.0, (0.5, 2.0)).unwrap();
        let wedge = catalog::truncated_catenoid(1.0, (0.5, 1.5), 2.0).unwrap();
        let config = TraceConfig::for_domain(wedge.patch.domain());
        let start = Param::new(1.0, 0.3);
        let (d1, d2) = line_field(&cat.patch.forms(start).unwrap(), 1e-8).unwrap().unwrap();
        assert!(d1.u.abs() < 1e-15 && d2.v.abs() < 1e-15);

        let meridian = trace_through(&wedge.patch, start, Family::Second, &config).unwrap();
        assert_eq!(meridian.stop, StopReason::Boundary);
        assert!(meridian.points.iter().all(|q| (q.v - 0.3).abs() < 1e-12));
        assert!((meridian.start().u - 0.5).abs() < 1e-9 && (meridian.end().u - 1.5).abs() < 1e-9);

        let parallel = trace_through(&wedge.patch, start, Family::First, &config).unwrap();
        assert!(parallel.points.iter().all(|q| (q.u - 1.0).abs() < 1e-12));
        let mut ends = [parallel.start().v, parallel.end().v];
        ends.sort_by(f64::total_cmp);
        assert!(ends[0].abs() < 1e-9 && (ends[1] - 2.0).abs() < 1e-9, "{ends:?}");
        assert_eq!(parallel.positions.len(), parallel.points.len());
    }

    #[test]
    fn planar_start_is_umbilic() {
        let square = catalog::planar_square(1.0).unwrap();
        let config = TraceConfig::for_domain(square.patch.domain());
        let t = trace(&square.patch, Param::new(0.5, 0.5), Family::First, Sense::Forward, &config).unwrap();
        assert_eq!(t.stop, StopReason::Umbilic);
    }

    #[test]
    fn traces_aimed_at_simple_zero_stop_there() {
        let field = SyntheticHopfField::power(PatchDomain::half_disk(1.0).unwrap(), 1);
        let config = TraceConfig::for_domain(field.domain());
        let mut hits = 0;
        // the separatrices of Φ = z are the rays at multiples of π/3
        for k in 1..3 {
            let start = Param::polar(0.5, core::f64::consts::PI * k as f64 / 3.0);
            for family in [Family::First, Family::Second] {
                for sense in [Sense::Forward, Sense::Backward] {
                    let t = trace(&field, start, family, sense, &config).unwrap();
                    if t.stop == StopReason::Umbilic {
                        hits += 1;
                        assert!(t.end().norm() < 2.0 * config.step, "{:?}", t.end());
                    }
                }
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn trace_stops_at_umbilic() {
        let field = SyntheticHopfField::new(PatchDomain::disk(1.0).unwrap(), |z| z - num_complex::Complex64::new(0.5, 0.0));
        let config = TraceConfig::for_domain(field.domain());
        let t = trace(&field, Param::new(0.1, 0.0), Family::First, Sense::Forward, &config).unwrap();
        let u = trace(&field, Param::new(0.1, 0.0), Family::Second, Sense::Forward, &config).unwrap();
        let hit = [t, u].into_iter().find(|t| t.stop == StopReason::Umbilic).expect("one family runs into z = 0.5");
        assert!(hit.end().distance(Param::new(0.5, 0.0)) < 1e-3);
    }

    #[test]
    fn trace_at_umbilic_start_is_empty() {
        let cap = catalog::hyperbolic_cap(1.0, 1.0).unwrap();
        let config = TraceConfig::for_domain(cap.patch.domain());
        let t = trace(&cap.patch, Param::new(0.1, 0.1), Family::First, Sense::Forward, &config).unwrap();
        assert_eq!(t.stop, StopReason::Umbilic);
        assert_eq!(t.points.len(), 1);
    }

    #[test]
    fn outside_start_is_rejected() {
        let cap = catalog::hyperbolic_cap(1.0, 1.0).unwrap();
        let config = TraceConfig::for_domain(cap.patch.domain());
        assert!(matches!(
            trace(&cap.patch, Param::new(5.0, 0.0), Family::First, Sense::Forward, &config),
            Err(GeometryError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn perturbed_cap_traces_satisfy_quadratic() {
        let cap = catalog::perturbed_cap(Param::new(0.15, -0.1), 0.2).unwrap();
        let config = TraceConfig::for_domain(cap.patch.domain());
        let t = trace_through(&cap.patch, Param::new(-0.2, 0.2), Family::Second, &config).unwrap();
        assert!(t.points.len() > 20);
        assert!(trace_residual(&cap.patch, &t).unwrap() < 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn families_are_first_form_orthogonal(
            e in 0.5f64..3.0, f in -0.4f64..0.4, g in 0.5f64..3.0,
            a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0,
        ) {
            let forms = Forms { first: QuadraticForm::new(e, f, g), second: QuadraticForm::new(a, b, c) };
            if let Some((d1, d2)) = line_field(&forms, 1e-6).unwrap() {
                let cos = forms.first.apply(d1, d2) / (forms.first.norm(d1) * forms.first.norm(d2));
                prop_assert!(cos.abs() < 1e-8);
                prop_assert!(forms.normal_curvature(d1) >= forms.normal_curvature(d2) - 1e-12);
            }
        }
    }
}
