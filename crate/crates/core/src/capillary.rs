//! Totally umbilic support surfaces and capillary boundary checks.
//!
//! Along a boundary edge lying on a support `Σ`, the trihedra `{τ, N, ν}` of
//! the surface and `{τ, N_Σ, ν_Σ}` of the support share `τ` and differ by a
//! Lorentz rotation of angle `β` in the plane orthogonal to `τ`. For a
//! spacelike support (timelike `N_Σ`)
//!
//! ```text
//! N = cosh β N_Σ + σ sinh β ν_Σ,      σ = sign⟨N, ν_Σ⟩,
//! ```
//!
//! and for a timelike support (spacelike `N_Σ`, `ν_Σ` oriented to the future)
//!
//! ```text
//! N = cosh β ν_Σ + σ sinh β N_Σ,      σ = sign⟨N, N_Σ⟩,
//! ```
//!
//! with `ν = −τ ∧ N` in both cases. Because the support is totally umbilic,
//! `β` is constant along the edge exactly when the edge is a line of
//! curvature of the surface, i.e. `II(τ, ν) = 0`.

use alloc::vec::Vec;

use crate::lorentz::{causal_class, mixed_angle, timelike_angle};
use crate::surface::{fundamental_data_with, FundamentalData};
use crate::tolerances::{EDGE_SAMPLES, MIN_EDGE_SAMPLES};
use crate::{BoundaryFrame, CausalClass, GeometryError, LVector3, Param, ParametricPatch, Result, Tolerances};

/// A totally umbilic surface of `L³`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum SupportSurface {
    /// `⟨normal, x⟩ = offset` with a unit, non-lightlike normal.
    Plane { normal: LVector3, offset: f64 },
    /// `⟨x − c, x − c⟩ = −r²` (spacelike, both sheets).
    HyperbolicPlane { center: LVector3, radius: f64 },
    /// `⟨x − c, x − c⟩ = r²` (timelike).
    DeSitter { center: LVector3, radius: f64 },
}

impl SupportSurface {
    /// Plane through `⟨n, x⟩ = offset`, normalizing `n`; lightlike normals are rejected.
    pub fn plane(normal: LVector3, offset: f64) -> Result<Self> {
        if !normal.is_finite() || !offset.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if normal == LVector3::ZERO {
            return Err(GeometryError::ZeroVector);
        }
        let n2 = normal.norm_sq();
        if causal_class(&normal) == CausalClass::Lightlike || libm::fabs(n2) <= 1e-12 * normal.dot_euclid(&normal) {
            return Err(GeometryError::LightlikeSupport);
        }
        let scale = libm::sqrt(libm::fabs(n2));
        Ok(Self::Plane {
            normal: normal / scale,
            offset: offset / scale,
        })
    }

    /// Horizontal spacelike plane `x₃ = height`.
    pub fn horizontal(height: f64) -> Result<Self> {
        // ⟨e₃, x⟩ = −x₃
        Self::plane(LVector3::E3, -height)
    }

    pub fn hyperbolic(center: LVector3, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite() && center.is_finite()) {
            return Err(GeometryError::InvalidParameter("hyperbolic plane needs a positive radius"));
        }
        Ok(Self::HyperbolicPlane { center, radius })
    }

    pub fn de_sitter(center: LVector3, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite() && center.is_finite()) {
            return Err(GeometryError::InvalidParameter("de Sitter space needs a positive radius"));
        }
        Ok(Self::DeSitter { center, radius })
    }

    /// Causal character of the surface itself.
    pub fn causal_type(&self) -> CausalClass {
        match *self {
            Self::Plane { normal, .. } => match causal_class(&normal) {
                CausalClass::Timelike => CausalClass::Spacelike,
                _ => CausalClass::Timelike,
            },
            Self::HyperbolicPlane { .. } => CausalClass::Spacelike,
            Self::DeSitter { .. } => CausalClass::Timelike,
        }
    }

    /// Signed defect of the defining equation, scaled to read as a distance.
    pub fn residual(&self, x: &LVector3) -> f64 {
        match *self {
            Self::Plane { normal, offset } => normal.inner(x) - offset,
            Self::HyperbolicPlane { center, radius } => {
                let d = *x - center;
                (d.norm_sq() + radius * radius) / (2.0 * radius)
            }
            Self::DeSitter { center, radius } => {
                let d = *x - center;
                (d.norm_sq() - radius * radius) / (2.0 * radius)
            }
        }
    }

    /// Unit normal at `x`; future-directed when timelike.
    pub fn normal_at(&self, x: &LVector3) -> Result<LVector3> {
        let n = match *self {
            Self::Plane { normal, .. } => normal,
            Self::HyperbolicPlane { center, radius } | Self::DeSitter { center, radius } => (*x - center) / radius,
        };
        if !n.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        Ok(if causal_class(&n) == CausalClass::Timelike && n.x3 < 0.0 { -n } else { n })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Plane { .. } => match self.causal_type() {
                CausalClass::Spacelike => "spacelike plane",
                _ => "timelike plane",
            },
            Self::HyperbolicPlane { .. } => "hyperbolic plane",
            Self::DeSitter { .. } => "de Sitter space",
        }
    }
}

/// A boundary edge of a patch together with the support it should lie on.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundaryComponent {
    pub edge: usize,
    pub support: SupportSurface,
}

/// Surface trihedron at one boundary point, with its parameter-plane data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeFrame {
    pub point: Param,
    pub frame: BoundaryFrame,
    pub data: FundamentalData,
    /// Parameter vector mapped to `τ`.
    pub tangent: Param,
    /// Parameter vector mapped to `ν`.
    pub conormal: Param,
}

/// Trihedron `{τ, N, ν}` at parameter `s ∈ [0,1]` of edge `edge`, with `ν`
/// the inward conormal.
pub fn edge_frame(patch: &ParametricPatch, edge: usize, s: f64, tol: &Tolerances) -> Result<EdgeFrame> {
    let domain = patch.domain();
    let curve = domain
        .edges()
        .get(edge)
        .copied()
        .ok_or(GeometryError::InvalidParameter("edge index out of range"))?;
    let point = curve.point(s);
    let velocity = curve.velocity(s);
    if velocity.norm() == 0.0 {
        return Err(GeometryError::ZeroTangent);
    }
    let data = fundamental_data_with(patch, point, tol.principal_degenerate)?;
    let first = data.forms.first;
    // first-form orthogonal complement of the tangent, pointing inward
    let mut w = Param::new(-(first.uv * velocity.u + first.vv * velocity.v), first.uu * velocity.u + first.uv * velocity.v);
    if w.dot(velocity.perp()) < 0.0 {
        w = -w;
    }
    let t = velocity * (1.0 / first.norm(velocity));
    let w = w * (1.0 / first.norm(w));
    let jet = patch.evaluate_derivatives(point)?;
    let push = |d: Param| jet.xu * d.u + jet.xv * d.v;
    let tau = push(t);
    let nu = push(w);
    let mut frame = BoundaryFrame::from_tangent_normal(tau, data.normal);
    let mut t = t;
    if frame.conormal.inner(&nu) < 0.0 {
        frame = BoundaryFrame::from_tangent_normal(-tau, data.normal);
        t = -t;
    }
    let mismatch = (frame.conormal - nu).norm_euclid();
    if mismatch > tol.trihedra {
        return Err(GeometryError::TrihedraInconsistent { residual: mismatch });
    }
    Ok(EdgeFrame {
        point,
        frame,
        data,
        tangent: t,
        conormal: w,
    })
}

/// Contact angle at one boundary point and the trihedra reconstruction residual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactMeasurement {
    pub beta: f64,
    /// Sign of the rotation from the support trihedron to the surface trihedron.
    pub sign: f64,
    pub support_normal: LVector3,
    pub support_conormal: LVector3,
    /// Largest Euclidean error of `N` and `ν` rebuilt from `(β, σ)`.
    pub trihedra_residual: f64,
}

/// `β` between the surface normal and the support normal, plus the
/// reconstruction of `{N, ν}` from the support trihedron.
pub fn contact_angle(frame: &BoundaryFrame, support: &SupportSurface, x: &LVector3) -> Result<ContactMeasurement> {
    let mut n_sigma = support.normal_at(x)?;
    let spacelike_support = support.causal_type() == CausalClass::Spacelike;
    let mut nu_sigma = -frame.tau.lorentz_cross(&n_sigma);
    if !spacelike_support && nu_sigma.x3 < 0.0 {
        n_sigma = -n_sigma;
        nu_sigma = -nu_sigma;
    }
    let (beta, sign, rebuilt) = if spacelike_support {
        let beta = timelike_angle(&frame.normal, &n_sigma)?;
        let sign = if frame.normal.inner(&nu_sigma) < 0.0 { -1.0 } else { 1.0 };
        (beta, sign, n_sigma * libm::cosh(beta) + nu_sigma * (sign * libm::sinh(beta)))
    } else {
        let beta = mixed_angle(&n_sigma, &frame.normal)?;
        let sign = if frame.normal.inner(&n_sigma) < 0.0 { -1.0 } else { 1.0 };
        (beta, sign, nu_sigma * libm::cosh(beta) + n_sigma * (sign * libm::sinh(beta)))
    };
    let rebuilt_nu = -frame.tau.lorentz_cross(&rebuilt);
    let scale = libm::cosh(beta);
    let residual = (rebuilt - frame.normal).norm_euclid().max((rebuilt_nu - frame.conormal).norm_euclid()) / scale;
    Ok(ContactMeasurement {
        beta,
        sign,
        support_normal: n_sigma,
        support_conormal: nu_sigma,
        trihedra_residual: residual,
    })
}

/// Rebuild `{N, ν}` from the support trihedron, `β` and `σ`, and return the
/// largest deviation from the given frame.
pub fn trihedra_roundtrip(frame: &BoundaryFrame, support: &SupportSurface, x: &LVector3) -> Result<f64> {
    Ok(contact_angle(frame, support, x)?.trihedra_residual)
}

/// `|II(τ, ν)|` for unit `τ`, `ν` at a boundary frame; zero on a line of curvature.
pub fn joachimsthal_residual(frame: &EdgeFrame) -> f64 {
    libm::fabs(frame.data.forms.second.apply(frame.tangent, frame.conormal))
}

/// Outcome of the checks on one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CapillaryVerdict {
    Capillary,
    NotConstantAngle,
    NotLineOfCurvature,
    NotOnSupport,
    TrihedraInconsistent,
}

impl CapillaryVerdict {
    pub fn passed(self) -> bool {
        self == CapillaryVerdict::Capillary
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Capillary => "capillary",
            Self::NotConstantAngle => "not_constant_angle",
            Self::NotLineOfCurvature => "not_line_of_curvature",
            Self::NotOnSupport => "not_on_support",
            Self::TrihedraInconsistent => "trihedra_inconsistent",
        }
    }
}

/// Contact-angle statistics along one edge.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CapillaryReport {
    pub edge: usize,
    pub edge_name: &'static str,
    pub support: SupportSurface,
    pub samples: usize,
    pub beta_mean: f64,
    /// `max β − min β`.
    pub beta_spread: f64,
    pub joachimsthal_max: f64,
    pub support_residual_max: f64,
    pub trihedra_max: f64,
    /// Largest `|κ|` seen along the edge, used to scale the line-of-curvature gate.
    pub curvature_scale: f64,
    /// `(s, β)` at each sample.
    pub profile: Vec<(f64, f64)>,
    pub verdict: CapillaryVerdict,
}

/// Measure `β` and `II(τ, ν)` at `samples` interior points `(k + ½)/n` of an
/// edge and decide whether it is a capillary boundary.
pub fn capillary_constancy_check(patch: &ParametricPatch, component: &BoundaryComponent, samples: usize, tol: &Tolerances) -> Result<CapillaryReport> {
    if samples < MIN_EDGE_SAMPLES {
        return Err(GeometryError::TooFewSamples {
            samples,
            required: MIN_EDGE_SAMPLES,
        });
    }
    let names = patch.domain().edge_names();
    let edge_name = *names
        .get(component.edge)
        .ok_or(GeometryError::InvalidParameter("edge index out of range"))?;
    let mut betas = Vec::with_capacity(samples);
    let mut joachimsthal: f64 = 0.0;
    let mut support_residual: f64 = 0.0;
    let mut trihedra: f64 = 0.0;
    let mut curvature: f64 = 0.0;
    for k in 0..samples {
        let s = (k as f64 + 0.5) / samples as f64;
        let ef = edge_frame(patch, component.edge, s, tol)?;
        let x = ef.data.position;
        support_residual = support_residual.max(libm::fabs(component.support.residual(&x)));
        let m = contact_angle(&ef.frame, &component.support, &x)?;
        trihedra = trihedra.max(m.trihedra_residual);
        betas.push((s, m.beta));
        joachimsthal = joachimsthal.max(joachimsthal_residual(&ef));
        curvature = curvature.max(libm::fabs(ef.data.kappa1)).max(libm::fabs(ef.data.kappa2));
    }
    let mean = betas.iter().map(|b| b.1).sum::<f64>() / samples as f64;
    let max = betas.iter().map(|b| b.1).fold(f64::NEG_INFINITY, f64::max);
    let min = betas.iter().map(|b| b.1).fold(f64::INFINITY, f64::min);
    let spread = max - min;
    let scale = 1.0 + libm::fabs(patch_scale(patch));
    let verdict = if support_residual > tol.support_membership * scale {
        CapillaryVerdict::NotOnSupport
    } else if trihedra > tol.trihedra {
        CapillaryVerdict::TrihedraInconsistent
    } else if spread > tol.capillary_spread * (1.0 + libm::fabs(mean)) {
        CapillaryVerdict::NotConstantAngle
    } else if joachimsthal > tol.joachimsthal * (1.0 + curvature) {
        CapillaryVerdict::NotLineOfCurvature
    } else {
        CapillaryVerdict::Capillary
    };
    Ok(CapillaryReport {
        edge: component.edge,
        edge_name,
        support: component.support,
        samples,
        beta_mean: mean,
        beta_spread: spread,
        joachimsthal_max: joachimsthal,
        support_residual_max: support_residual,
        trihedra_max: trihedra,
        curvature_scale: curvature,
        profile: betas,
        verdict,
    })
}

fn patch_scale(patch: &ParametricPatch) -> f64 {
    let (a, b, c, d) = patch.domain().bounding_box();
    let corners = [Param::new(a, c), Param::new(b, d), Param::new(0.5 * (a + b), 0.5 * (c + d))];
    corners
        .iter()
        .filter_map(|p| patch.position(*p).ok())
        .map(|x| x.norm_euclid())
        .fold(0.0, f64::max)
}

/// Check every supported edge with the default sample count.
pub fn capillary_reports(patch: &ParametricPatch, components: &[BoundaryComponent], tol: &Tolerances) -> Result<Vec<CapillaryReport>> {
    components
        .iter()
        .map(|c| capillary_constancy_check(patch, c, EDGE_SAMPLES, tol))
        .collect()
}
