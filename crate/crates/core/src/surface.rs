//! First and second fundamental forms, principal curvatures and directions.
//!
//! Sign convention: principal curvatures are the eigenvalues of the
//! differential of the future-directed unit normal, `dN(w) = κ w`. With
//! `e = ⟨N, X_uu⟩` this gives
//!
//! ```text
//! H = −(eG − 2fF + gE) / (2(EG − F²)),    K = (eg − f²) / (EG − F²),
//! ```
//!
//! so the hyperbolic plane `⟨x,x⟩ = −c²` with `N = X/c` has `κ₁ = κ₂ = 1/c`.

use alloc::vec::Vec;

use crate::domain::Param;
use crate::{GeometryError, LVector3, ParametricPatch, Result};

/// A symmetric bilinear form in parameter coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadraticForm {
    pub uu: f64,
    pub uv: f64,
    pub vv: f64,
}

impl QuadraticForm {
    pub const fn new(uu: f64, uv: f64, vv: f64) -> Self {
        Self { uu, uv, vv }
    }

    pub fn det(&self) -> f64 {
        self.uu * self.vv - self.uv * self.uv
    }

    pub fn apply(&self, a: Param, b: Param) -> f64 {
        self.uu * a.u * b.u + self.uv * (a.u * b.v + a.v * b.u) + self.vv * a.v * b.v
    }

    pub fn norm(&self, a: Param) -> f64 {
        libm::sqrt(self.apply(a, a).max(0.0))
    }
}

/// First and second fundamental forms at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Forms {
    /// `E, F, G`.
    pub first: QuadraticForm,
    /// `e, f, g`.
    pub second: QuadraticForm,
}

/// Curvatures and principal directions derived from a pair of forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrincipalFrame {
    pub mean: f64,
    pub gauss: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    /// Principal directions for `kappa1` and `kappa2`, unit in the first
    /// form; `None` at (numerically) umbilic points.
    pub directions: Option<(Param, Param)>,
}

/// Pick the representative of `±d` with nonnegative first component, ties
/// broken by a nonnegative second component.
pub fn canonical_direction(d: Param) -> Param {
    // components at roundoff level of the other count as zero
    let tiny = 1e-14 * d.norm();
    if d.u > tiny || (libm::fabs(d.u) <= tiny && d.v >= 0.0) {
        d
    } else {
        -d
    }
}

impl Forms {
    /// Curvatures and principal directions; directions are withheld when
    /// `|κ₁−κ₂| < degenerate·(1+|H|)`.
    pub fn principal(&self, degenerate: f64) -> Result<PrincipalFrame> {
        let QuadraticForm { uu: e1, uv: f1, vv: g1 } = self.first;
        let QuadraticForm { uu: e2, uv: f2, vv: g2 } = self.second;
        let det = self.first.det();
        if !(e1 > 0.0 && det > 0.0) {
            return Err(GeometryError::CausalDegeneracy {
                u: f64::NAN,
                v: f64::NAN,
                det,
            });
        }
        let mean = -(e2 * g1 - 2.0 * f2 * f1 + g2 * e1) / (2.0 * det);
        let gauss = (e2 * g2 - f2 * f2) / det;

        // Cholesky I = L Lᵀ turns -I⁻¹II into the symmetric M = -L⁻¹ II L⁻ᵀ.
        let l11 = libm::sqrt(e1);
        let l21 = f1 / l11;
        let l22 = libm::sqrt(det) / l11;
        let a = -e2 / (l11 * l11);
        let b = -(f2 - l21 * e2 / l11) / (l11 * l22);
        let c = -(g2 - 2.0 * l21 * f2 / l11 + l21 * l21 * e2 / (l11 * l11)) / (l22 * l22);
        // half the eigenvalue gap of M; √(H² − K) loses half the digits near umbilics
        let disc = 0.5 * libm::hypot(a - c, 2.0 * b);
        let kappa1 = mean + disc;
        let kappa2 = mean - disc;
        let directions = if kappa1 - kappa2 < degenerate * (1.0 + libm::fabs(mean)) {
            None
        } else {
            let phi = 0.5 * libm::atan2(2.0 * b, a - c);
            let lift = |y: Param| Param::new(y.u / l11 - l21 * y.v / (l11 * l22), y.v / l22);
            let d1 = lift(Param::new(libm::cos(phi), libm::sin(phi)));
            let d2 = lift(Param::new(-libm::sin(phi), libm::cos(phi)));
            Some((canonical_direction(d1), canonical_direction(d2)))
        };
        Ok(PrincipalFrame {
            mean,
            gauss,
            kappa1,
            kappa2,
            directions,
        })
    }

    /// Apply the shape operator `dN = −I⁻¹ II` to a parameter direction.
    pub fn shape_operator(&self, d: Param) -> Param {
        let QuadraticForm { uu: e1, uv: f1, vv: g1 } = self.first;
        let QuadraticForm { uu: e2, uv: f2, vv: g2 } = self.second;
        let det = self.first.det();
        let w = Param::new(e2 * d.u + f2 * d.v, f2 * d.u + g2 * d.v);
        Param::new(-(g1 * w.u - f1 * w.v) / det, -(-f1 * w.u + e1 * w.v) / det)
    }

    /// Normal curvature `κ(d) = −II(d,d)/I(d,d)` in this sign convention.
    pub fn normal_curvature(&self, d: Param) -> f64 {
        -self.second.apply(d, d) / self.first.apply(d, d)
    }

    /// Isothermality defect `(|E−G| + |F|) / max(E, G)`.
    pub fn isothermal_defect(&self) -> f64 {
        let QuadraticForm { uu: e, uv: f, vv: g } = self.first;
        (libm::fabs(e - g) + libm::fabs(f)) / e.max(g)
    }
}

/// Everything known about a spacelike patch at one parameter point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FundamentalData {
    pub point: Param,
    pub position: LVector3,
    pub forms: Forms,
    /// Future-directed unit timelike normal.
    pub normal: LVector3,
    pub mean_curvature: f64,
    pub gauss_curvature: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub dir1: Option<Param>,
    pub dir2: Option<Param>,
    /// Conformal factor `λ² = E`, meaningful on isothermal charts.
    pub lambda2: f64,
}

impl FundamentalData {
    pub fn first(&self) -> QuadraticForm {
        self.forms.first
    }

    pub fn second(&self) -> QuadraticForm {
        self.forms.second
    }

    pub fn is_umbilic_at(&self, rel_tol: f64) -> bool {
        self.kappa1 - self.kappa2 < rel_tol * (1.0 + libm::fabs(self.mean_curvature))
    }
}

/// Future-directed unit normal from the tangent vectors, with degeneracy errors.
pub fn unit_normal(xu: &LVector3, xv: &LVector3, p: Param) -> Result<LVector3> {
    let first = QuadraticForm::new(xu.norm_sq(), xu.inner(xv), xv.norm_sq());
    let cross = xu.lorentz_cross(xv);
    if cross.norm_euclid() <= 1e-14 * xu.norm_euclid() * xv.norm_euclid() {
        return Err(GeometryError::ImmersionDegeneracy { u: p.u, v: p.v });
    }
    let det = first.det();
    if !(det > 0.0) || !(first.uu > 0.0) {
        return Err(GeometryError::CausalDegeneracy { u: p.u, v: p.v, det });
    }
    // ⟨Xu∧Xv, Xu∧Xv⟩ = −(EG − F²)
    let n = cross / libm::sqrt(-cross.norm_sq());
    Ok(if n.x3 < 0.0 { -n } else { n })
}

/// First and second fundamental forms, normal and curvatures at `p`.
pub fn fundamental_data(patch: &ParametricPatch, p: Param) -> Result<FundamentalData> {
    fundamental_data_with(patch, p, crate::Tolerances::default().principal_degenerate)
}

pub fn fundamental_data_with(patch: &ParametricPatch, p: Param, degenerate: f64) -> Result<FundamentalData> {
    let jet = patch.evaluate_derivatives(p)?;
    let normal = unit_normal(&jet.xu, &jet.xv, p)?;
    let first = QuadraticForm::new(jet.xu.norm_sq(), jet.xu.inner(&jet.xv), jet.xv.norm_sq());
    let second = QuadraticForm::new(normal.inner(&jet.xuu), normal.inner(&jet.xuv), normal.inner(&jet.xvv));
    let forms = Forms { first, second };
    let frame = forms.principal(degenerate).map_err(|e| match e {
        GeometryError::CausalDegeneracy { det, .. } => GeometryError::CausalDegeneracy { u: p.u, v: p.v, det },
        other => other,
    })?;
    Ok(FundamentalData {
        point: p,
        position: jet.x,
        forms,
        normal,
        mean_curvature: frame.mean,
        gauss_curvature: frame.gauss,
        kappa1: frame.kappa1,
        kappa2: frame.kappa2,
        dir1: frame.directions.map(|d| d.0),
        dir2: frame.directions.map(|d| d.1),
        lambda2: first.uu,
    })
}

/// Outcome of a grid scan of `EG − F²`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpacelikeReport {
    pub min_det: f64,
    pub worst: Param,
    pub passed: bool,
}

/// Scan `EG − F²` (and `E`) over an `n × n` grid.
pub fn spacelike_check(patch: &ParametricPatch, grid: usize) -> Result<SpacelikeReport> {
    if grid == 0 {
        return Err(GeometryError::InvalidParameter("grid resolution must be positive"));
    }
    let mut report = SpacelikeReport {
        min_det: f64::INFINITY,
        worst: Param::default(),
        passed: true,
    };
    for p in patch.domain().grid(grid) {
        let jet = patch.evaluate_derivatives(p)?;
        let first = QuadraticForm::new(jet.xu.norm_sq(), jet.xu.inner(&jet.xv), jet.xv.norm_sq());
        // a spacelike first form is positive definite: E > 0 and EG − F² > 0
        let det = if first.uu > 0.0 { first.det() } else { first.uu.min(first.det()) };
        if det < report.min_det {
            report.min_det = det;
            report.worst = p;
        }
    }
    report.passed = report.min_det > 0.0;
    Ok(report)
}

/// Largest `(|E−G| + |F|)/max(E,G)` over an `n × n` grid.
pub fn isothermal_residual(patch: &ParametricPatch, grid: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in patch.domain().grid(grid) {
        let jet = patch.evaluate_derivatives(p)?;
        let (e, f, g) = (jet.xu.norm_sq(), jet.xu.inner(&jet.xv), jet.xv.norm_sq());
        worst = worst.max((libm::fabs(e - g) + libm::fabs(f)) / e.max(g));
    }
    Ok(worst)
}

/// Fundamental data at every grid point that evaluates cleanly.
pub fn sample_grid(patch: &ParametricPatch, grid: usize, degenerate: f64) -> Vec<Result<FundamentalData>> {
    patch
        .domain()
        .grid(grid)
        .into_iter()
        .map(|p| fundamental_data_with(patch, p, degenerate))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::PatchDomain;
    use proptest::prelude::*;

    fn plane() -> ParametricPatch {
        ParametricPatch::from_fn(PatchDomain::disk(1.0).unwrap(), |p| LVector3::new(p.u, p.v, 0.0)).unwrap()
    }

    #[test]
    fn horizontal_plane_is_flat() {
        let patch = ParametricPatch::from_fn(PatchDomain::disk(1.0).unwrap(), |p| LVector3::new(p.u, p.v, 3.0)).unwrap();
        let data = fundamental_data(&patch, Param::new(0.1, 0.2)).unwrap();
        assert!(data.second().uu.abs() < 1e-8 && data.second().uv.abs() < 1e-8 && data.second().vv.abs() < 1e-8);
        assert!(data.mean_curvature.abs() < 1e-8 && data.gauss_curvature.abs() < 1e-8);
        assert!((data.normal - LVector3::E3).norm_euclid() < 1e-12);
    }

    #[test]
    fn hyperbolic_plane_curvature_sign() {
        // Finite-difference oracle on the graph x3 = sqrt(1 + u² + v²): κ = +1.
        let patch = ParametricPatch::from_fn(PatchDomain::disk(0.8).unwrap(), |p| {
            LVector3::new(p.u, p.v, libm::sqrt(1.0 + p.u * p.u + p.v * p.v))
        })
        .unwrap();
        for p in [Param::new(0.0, 0.0), Param::new(0.3, -0.4), Param::new(-0.5, 0.1)] {
            let d = fundamental_data(&patch, p).unwrap();
            assert!((d.kappa1 - 1.0).abs() < 1e-6, "{}", d.kappa1);
            assert!((d.kappa2 - 1.0).abs() < 1e-6);
            assert!((d.mean_curvature - 1.0).abs() < 1e-6);
            // first derivatives carry the O(h²) stencil error, h = 1e-4·diam
            assert!((d.normal - d.position).norm_euclid() < 1e-7);
        }
    }

    #[test]
    fn catenoid_is_maximal() {
        let entry = catalog::lorentzian_catenoid(1.0, (0.5, 2.0)).unwrap();
        let d = fundamental_data(&entry.patch, Param::new(1.0, 0.0)).unwrap();
        assert!(d.mean_curvature.abs() < 1e-12);
        let fd = entry.patch.with_mode(crate::DerivativeMode::FiniteDifference { step: 1e-4 }).unwrap();
        let d = fundamental_data(&fd, Param::new(1.0, 0.0)).unwrap();
        assert!(d.mean_curvature.abs() < 1e-6);
    }

    #[test]
    fn spacelike_check_examples() {
        let r = spacelike_check(&plane(), 9).unwrap();
        assert!(r.passed && (r.min_det - 1.0).abs() < 1e-9);
        let tilted = ParametricPatch::from_fn(PatchDomain::disk(1.0).unwrap(), |p| LVector3::new(p.u, p.v, 2.0 * p.u)).unwrap();
        let r = spacelike_check(&tilted, 9).unwrap();
        assert!(!r.passed);
        assert!((r.min_det + 3.0).abs() < 1e-6);
        let cat = catalog::lorentzian_catenoid(1.0, (0.5, 2.0)).unwrap();
        assert!(spacelike_check(&cat.patch, 33).unwrap().passed);
    }

    #[test]
    fn isothermal_residual_examples() {
        assert!(isothermal_residual(&plane(), 9).unwrap() < 1e-9);
        let cat = catalog::lorentzian_catenoid(1.0, (0.5, 2.0)).unwrap();
        assert!(isothermal_residual(&cat.patch, 33).unwrap() < 1e-9);
        let stretched = ParametricPatch::from_fn(PatchDomain::disk(1.0).unwrap(), |p| LVector3::new(2.0 * p.u, p.v, 0.0)).unwrap();
        assert!((isothermal_residual(&stretched, 9).unwrap() - 0.75).abs() < 1e-8);
    }

    #[test]
    fn degenerate_tangent_planes_error() {
        let timelike = ParametricPatch::from_fn(PatchDomain::disk(1.0).unwrap(), |p| LVector3::new(p.u, p.v, 2.0 * p.u)).unwrap();
        assert!(matches!(
            fundamental_data(&timelike, Param::new(0.0, 0.0)),
            Err(GeometryError::CausalDegeneracy { .. })
        ));
        let collapsed = ParametricPatch::from_fn(PatchDomain::disk(1.0).unwrap(), |p| LVector3::new(p.u + p.v, 0.0, 0.0)).unwrap();
        assert!(matches!(
            fundamental_data(&collapsed, Param::new(0.0, 0.0)),
            Err(GeometryError::ImmersionDegeneracy { .. })
        ));
    }

    #[test]
    fn umbilic_points_have_no_directions() {
        let cap = catalog::hyperbolic_cap(1.0, 1.0).unwrap();
        let d = fundamental_data(&cap.patch, Param::new(0.1, 0.1)).unwrap();
        assert!(d.dir1.is_none() && d.dir2.is_none());
    }

    fn graph_forms(a: f64, b: f64, c: f64, d: f64, e: f64) -> (ParametricPatch, Param) {
        // small cubic graphs over the origin stay spacelike on [-0.3, 0.3]²
        let patch = ParametricPatch::from_fn(PatchDomain::rectangle(-0.3, 0.3, -0.3, 0.3).unwrap(), move |p| {
            let h = a * p.u * p.u + b * p.u * p.v + c * p.v * p.v + d * p.u * p.u * p.u + e * p.u * p.v * p.v;
            LVector3::new(p.u + 0.2 * p.v, p.v, h)
        })
        .unwrap();
        (patch, Param::new(0.1, -0.05))
    }

    #[test]
    fn umbilic_gap_is_exact_to_roundoff() {
        // II = −κ I on a skewed first form
        let first = QuadraticForm::new(2.3, 0.7, 0.9);
        let k = 2.0;
        let forms = Forms {
            first,
            second: QuadraticForm::new(-k * first.uu, -k * first.uv, -k * first.vv),
        };
        let frame = forms.principal(1e-8).unwrap();
        assert!(frame.kappa1 - frame.kappa2 < 1e-14);
        assert!((frame.mean - k).abs() < 1e-14);
        assert!(frame.directions.is_none());
    }

    proptest! {
        #[test]
        fn curvature_invariants(
            a in -0.5..0.5f64, b in -0.5..0.5f64, c in -0.5..0.5f64, d in -0.5..0.5f64, e in -0.5..0.5f64,
        ) {
            let (patch, p) = graph_forms(a, b, c, d, e);
            let data = fundamental_data(&patch, p).unwrap();
            let first = data.first();
            prop_assert!(first.uu > 0.0 && first.vv > 0.0 && first.det() > 0.0);
            prop_assert!((data.normal.norm_sq() + 1.0).abs() < 1e-9);
            prop_assert!(data.normal.x3 > 0.0);
            let jet = patch.evaluate_derivatives(p).unwrap();
            prop_assert!(data.normal.inner(&jet.xu).abs() < 1e-9);
            prop_assert!(data.normal.inner(&jet.xv).abs() < 1e-9);
            prop_assert!((data.mean_curvature - 0.5 * (data.kappa1 + data.kappa2)).abs() < 1e-8);
            prop_assert!((data.gauss_curvature - data.kappa1 * data.kappa2).abs() < 1e-8);
            if let (Some(d1), Some(d2)) = (data.dir1, data.dir2) {
                if data.kappa1 - data.kappa2 > 1e-4 {
                    prop_assert!(first.apply(d1, d2).abs() < 1e-6);
                    prop_assert!((first.norm(d1) - 1.0).abs() < 1e-9);
                    let s = data.forms.shape_operator(d1);
                    let r = s - d1 * data.kappa1;
                    prop_assert!(first.norm(r) < 1e-6);
                    let s = data.forms.shape_operator(d2);
                    prop_assert!(first.norm(s - d2 * data.kappa2) < 1e-6);
                }
            }
        }
    }
}
