//! Named surfaces with closed-form answers, used as fixtures and by the CLI.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::capillary::{BoundaryComponent, SupportSurface};
use crate::patch::Immersion;
use crate::{GeometryError, Jet, LVector3, Param, ParametricPatch, PatchDomain, Result};

/// How an expected value is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Basis {
    /// Closed form of the construction itself.
    Exact,
    /// Follows from the closed form by a short computation.
    Derived,
    /// A value quoted for a configuration rather than computed here.
    Reference,
}

/// A quantity the analysis should reproduce, within `tolerance`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Expectation {
    pub quantity: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub basis: Basis,
    /// Boundary edge the value refers to, for per-edge quantities; vertex
    /// quantities refer to the vertex where this edge starts. `None` means
    /// every edge or vertex.
    pub edge: Option<usize>,
}

/// A patch, its capillary supports and the values it is known to have.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub patch: ParametricPatch,
    pub supports: Vec<BoundaryComponent>,
    pub expected: Vec<Expectation>,
}

impl CatalogEntry {
    pub fn expectation(&self, quantity: &str) -> Option<f64> {
        self.expected.iter().find(|e| e.quantity == quantity).map(|e| e.value)
    }
}

fn expect(quantity: &'static str, value: f64, basis: Basis) -> Expectation {
    let tolerance = match quantity {
        "vertex_angle" => 0.01,
        "vertex_index" | "index_sum" => 0.05,
        "umbilic_index" => 0.02,
        "umbilic_u" | "umbilic_v" => 1e-3,
        "euler_char" => 0.5,
        "boundary_height" => 1e-9,
        _ => 1e-6,
    };
    Expectation {
        quantity,
        value,
        tolerance,
        basis,
        edge: None,
    }
}

fn positive(x: f64, what: &'static str) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(GeometryError::InvalidParameter(what))
    }
}

/// Affine map `(u, v) ↦ (u + v cos α, v sin α, 0)` into the plane `x₃ = 0`.
struct ShearedPlane {
    alpha: f64,
}

impl Immersion for ShearedPlane {
    fn position(&self, p: Param) -> LVector3 {
        LVector3::new(p.u + p.v * libm::cos(self.alpha), p.v * libm::sin(self.alpha), 0.0)
    }

    fn jet(&self, p: Param) -> Option<Jet> {
        Some(Jet {
            x: self.position(p),
            xu: LVector3::E1,
            xv: LVector3::new(libm::cos(self.alpha), libm::sin(self.alpha), 0.0),
            ..Jet::default()
        })
    }
}

/// The flat disk `x₃ = 0` of radius `c`.
pub fn planar_disk(c: f64) -> Result<CatalogEntry> {
    let c = positive(c, "disk radius must be positive")?;
    let patch = ParametricPatch::analytic(PatchDomain::disk(c)?, Arc::new(ShearedPlane { alpha: PI / 2.0 }))?;
    Ok(CatalogEntry {
        name: "planar-disk",
        patch,
        supports: Vec::new(),
        expected: vec![expect("kappa", 0.0, Basis::Exact), expect("euler_char", 1.0, Basis::Exact)],
    }
    .with_support(0, SupportSurface::de_sitter(LVector3::ZERO, c)?, 0.0))
}

/// The flat disk of radius `c` with its boundary on the de Sitter space of radius `c`.
pub fn de_sitter_configuration(c: f64) -> Result<CatalogEntry> {
    let mut entry = planar_disk(c)?;
    entry.name = "de-sitter-disk";
    Ok(entry)
}

impl CatalogEntry {
    fn with_support(mut self, edge: usize, support: SupportSurface, beta: f64) -> Self {
        self.supports.push(BoundaryComponent { edge, support });
        self.expected.push(Expectation {
            edge: Some(edge),
            ..expect("beta", beta, Basis::Derived)
        });
        self
    }
}

/// The unit square `[0, side]²` of the plane `x₃ = 0`.
pub fn planar_square(side: f64) -> Result<CatalogEntry> {
    let side = positive(side, "square side must be positive")?;
    let patch = ParametricPatch::analytic(PatchDomain::rectangle(0.0, side, 0.0, side)?, Arc::new(ShearedPlane { alpha: PI / 2.0 }))?;
    Ok(CatalogEntry {
        name: "planar-square",
        patch,
        supports: Vec::new(),
        expected: vec![expect("kappa", 0.0, Basis::Exact), expect("vertex_angle", PI / 2.0, Basis::Exact)],
    })
}

/// A flat parallelogram whose corner at the origin has interior angle `alpha`.
pub fn planar_wedge(alpha: f64) -> Result<CatalogEntry> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(GeometryError::InvalidParameter("wedge angle must lie in (0, π)"));
    }
    let patch = ParametricPatch::analytic(PatchDomain::rectangle(0.0, 1.0, 0.0, 1.0)?, Arc::new(ShearedPlane { alpha }))?;
    Ok(CatalogEntry {
        name: "planar-wedge",
        patch,
        supports: Vec::new(),
        expected: vec![Expectation {
            edge: Some(0),
            ..expect("vertex_angle", alpha, Basis::Exact)
        }],
    })
}

/// Hyperbolic plane of radius `c` centred at `(0, 0, shift)`, in the chart
/// `X = c(2u, 2v, 1 + r²)/(1 − r²)`.
struct HyperbolicChart {
    c: f64,
    shift: f64,
}

impl Immersion for HyperbolicChart {
    fn position(&self, p: Param) -> LVector3 {
        let f = 1.0 / (1.0 - p.u * p.u - p.v * p.v);
        LVector3::new(2.0 * self.c * p.u * f, 2.0 * self.c * p.v * f, self.shift + self.c * (2.0 * f - 1.0))
    }

    fn jet(&self, p: Param) -> Option<Jet> {
        let (u, v, c) = (p.u, p.v, self.c);
        let f = 1.0 / (1.0 - u * u - v * v);
        let (f2, f3) = (f * f, f * f * f);
        let (fu, fv) = (2.0 * u * f2, 2.0 * v * f2);
        let fuu = 2.0 * f2 + 8.0 * u * u * f3;
        let fuv = 8.0 * u * v * f3;
        let fvv = 2.0 * f2 + 8.0 * v * v * f3;
        let k = 2.0 * c;
        Some(Jet {
            x: self.position(p),
            xu: LVector3::new(k * (f + u * fu), k * v * fu, k * fu),
            xv: LVector3::new(k * u * fv, k * (f + v * fv), k * fv),
            xuu: LVector3::new(k * (2.0 * fu + u * fuu), k * v * fuu, k * fuu),
            xuv: LVector3::new(k * (fv + u * fuv), k * (fu + v * fuv), k * fuv),
            xvv: LVector3::new(k * u * fvv, k * (2.0 * fv + v * fvv), k * fvv),
        })
    }
}

fn cap_patch(c: f64, t_max: f64, shift: f64) -> Result<ParametricPatch> {
    let c = positive(c, "cap radius must be positive")?;
    let t_max = positive(t_max, "cap height parameter must be positive")?;
    ParametricPatch::analytic(PatchDomain::disk(libm::tanh(0.5 * t_max))?, Arc::new(HyperbolicChart { c, shift }))
}

/// The hyperbolic cap `⟨x,x⟩ = −c²`, `c ≤ x₃ ≤ c cosh t_max`, bounded by the
/// horizontal plane `x₃ = c cosh t_max`.
pub fn hyperbolic_cap(c: f64, t_max: f64) -> Result<CatalogEntry> {
    let patch = cap_patch(c, t_max, 0.0)?;
    Ok(CatalogEntry {
        name: "hyperbolic-cap",
        patch,
        supports: Vec::new(),
        expected: vec![expect("kappa", 1.0 / c, Basis::Exact), expect("euler_char", 1.0, Basis::Exact)],
    }
    .with_support(0, SupportSurface::horizontal(c * libm::cosh(t_max))?, t_max))
}

/// Hyperbolic cap of radius `c` centred at `(0, 0, −3c)`, cut by the de
/// Sitter space of radius `c` centred at the origin. The intersection lies
/// at `x₃ = −7c/6`, where `cosh t = 11/6` and `sinh β = 9/2`.
pub fn de_sitter_shifted_cap(c: f64) -> Result<CatalogEntry> {
    let c = positive(c, "cap radius must be positive")?;
    let t = libm::acosh(11.0 / 6.0);
    let patch = cap_patch(c, t, -3.0 * c)?;
    Ok(CatalogEntry {
        name: "de-sitter-shifted-cap",
        patch,
        supports: Vec::new(),
        expected: vec![
            expect("kappa", 1.0 / c, Basis::Exact),
            expect("boundary_height", -7.0 * c / 6.0, Basis::Derived),
        ],
    }
    .with_support(0, SupportSurface::de_sitter(LVector3::ZERO, c)?, libm::asinh(4.5)))
}

/// `X(σ, θ) = a(sinh σ cos θ, sinh σ sin θ, σ)`.
struct Catenoid {
    a: f64,
}

impl Immersion for Catenoid {
    fn position(&self, p: Param) -> LVector3 {
        let (s, t, a) = (p.u, p.v, self.a);
        LVector3::new(a * libm::sinh(s) * libm::cos(t), a * libm::sinh(s) * libm::sin(t), a * s)
    }

    fn jet(&self, p: Param) -> Option<Jet> {
        let (s, t, a) = (p.u, p.v, self.a);
        let (sh, ch) = (libm::sinh(s), libm::cosh(s));
        let (sn, cs) = (libm::sin(t), libm::cos(t));
        Some(Jet {
            x: self.position(p),
            xu: LVector3::new(a * ch * cs, a * ch * sn, a),
            xv: LVector3::new(-a * sh * sn, a * sh * cs, 0.0),
            xuu: LVector3::new(a * sh * cs, a * sh * sn, 0.0),
            xuv: LVector3::new(-a * ch * sn, a * ch * cs, 0.0),
            xvv: LVector3::new(-a * sh * cs, -a * sh * sn, 0.0),
        })
    }
}

/// The maximal spacelike catenoid `x₁² + x₂² = a² sinh²(x₃/a)` over
/// `σ ∈ [σ₀, σ₁]` on the full annulus.
pub fn lorentzian_catenoid(a: f64, sigma: (f64, f64)) -> Result<CatalogEntry> {
    let a = positive(a, "catenoid neck must be positive")?;
    if !(sigma.0 > 0.0) {
        return Err(GeometryError::InvalidParameter("catenoid must avoid σ = 0"));
    }
    let domain = PatchDomain::annular_sector(sigma.0, sigma.1, 0.0, 2.0 * PI)?;
    let patch = ParametricPatch::analytic(domain, Arc::new(Catenoid { a }))?;
    Ok(CatalogEntry {
        name: "lorentzian-catenoid",
        patch,
        supports: Vec::new(),
        expected: vec![
            expect("mean_curvature", 0.0, Basis::Exact),
            expect("phi_modulus", 2.0 * a, Basis::Derived),
            expect("euler_char", 0.0, Basis::Exact),
        ],
    })
}

/// The catenoid restricted to `σ ∈ [σ₀, σ₁]`, `θ ∈ [0, opening]`, with the
/// two parallels on horizontal planes and the two meridians on vertical
/// timelike planes.
pub fn truncated_catenoid(a: f64, sigma: (f64, f64), opening: f64) -> Result<CatalogEntry> {
    let a = positive(a, "catenoid neck must be positive")?;
    if !(sigma.0 > 0.0) {
        return Err(GeometryError::InvalidParameter("catenoid must avoid σ = 0"));
    }
    if !(opening > 0.0 && opening < PI) {
        return Err(GeometryError::InvalidParameter("opening must lie in (0, π)"));
    }
    let domain = PatchDomain::annular_sector(sigma.0, sigma.1, 0.0, opening)?;
    let patch = ParametricPatch::analytic(domain, Arc::new(Catenoid { a }))?;
    let meridian = |phi: f64| SupportSurface::plane(LVector3::new(-libm::sin(phi), libm::cos(phi), 0.0), 0.0);
    let parallel_angle = |s: f64| libm::acosh(1.0 / libm::tanh(s));
    // edges: theta0, r1 (σ₁), theta1, r0 (σ₀)
    Ok(CatalogEntry {
        name: "truncated-catenoid",
        patch,
        supports: Vec::new(),
        expected: vec![
            expect("mean_curvature", 0.0, Basis::Exact),
            expect("vertex_angle", PI / 2.0, Basis::Derived),
            expect("vertex_index", 0.25, Basis::Reference),
            expect("index_sum", 1.0, Basis::Reference),
        ],
    }
    .with_support(0, meridian(0.0)?, 0.0)
    .with_support(1, SupportSurface::horizontal(a * sigma.1)?, parallel_angle(sigma.1))
    .with_support(2, meridian(opening)?, 0.0)
    .with_support(3, SupportSurface::horizontal(a * sigma.0)?, parallel_angle(sigma.0)))
}

/// The catenoid in the conformal chart `z = e^{σ+iθ}`:
/// `x₁ + i x₂ = (a/2)(z − 1/z̄)`, `x₃ = (a/2) ln |z|²`, with `Φ = 2a/z²`.
struct ConformalCatenoid {
    a: f64,
}

impl Immersion for ConformalCatenoid {
    fn position(&self, p: Param) -> LVector3 {
        let r2 = p.u * p.u + p.v * p.v;
        let h = 0.5 * self.a;
        LVector3::new(h * (p.u - p.u / r2), h * (p.v - p.v / r2), h * libm::log(r2))
    }

    fn jet(&self, p: Param) -> Option<Jet> {
        use num_complex::Complex64;
        let h = 0.5 * self.a;
        let zb = Complex64::new(p.u, -p.v);
        let (zb2, zb3) = (zb * zb, zb * zb * zb);
        // g = 1/z̄ as a function of (u, v)
        let gu = -zb2.inv();
        let gv = Complex64::i() / zb2;
        let guu = Complex64::new(2.0, 0.0) / zb3;
        let guv = Complex64::new(0.0, -2.0) / zb3;
        let gvv = Complex64::new(-2.0, 0.0) / zb3;
        let r2 = p.u * p.u + p.v * p.v;
        let r4 = r2 * r2;
        let planar = |w: Complex64, l: f64| LVector3::new(h * w.re, h * w.im, h * l);
        Some(Jet {
            x: self.position(p),
            xu: planar(Complex64::new(1.0, 0.0) - gu, 2.0 * p.u / r2),
            xv: planar(Complex64::i() - gv, 2.0 * p.v / r2),
            xuu: planar(-guu, 2.0 / r2 - 4.0 * p.u * p.u / r4),
            xuv: planar(-guv, -4.0 * p.u * p.v / r4),
            xvv: planar(-gvv, 2.0 / r2 - 4.0 * p.v * p.v / r4),
        })
    }
}

/// The catenoid on `[1.2, 2.4] × [−0.6, 0.6]` in its conformal exponential
/// chart, where `Φ` is a nonconstant holomorphic function.
pub fn catenoid_conformal_chart(a: f64) -> Result<CatalogEntry> {
    let a = positive(a, "catenoid neck must be positive")?;
    let patch = ParametricPatch::analytic(PatchDomain::rectangle(1.2, 2.4, -0.6, 0.6)?, Arc::new(ConformalCatenoid { a }))?;
    Ok(CatalogEntry {
        name: "catenoid-conformal",
        patch,
        supports: Vec::new(),
        expected: vec![expect("mean_curvature", 0.0, Basis::Exact)],
    })
}

/// Graph over the hyperboloid with a harmonic cubic bump:
/// `x₃ = √(1 + u² + v²) + ε((u−u₀)³ − 3(u−u₀)(v−v₀)²)`.
struct PerturbedCap {
    center: Param,
    eps: f64,
}

impl Immersion for PerturbedCap {
    fn position(&self, p: Param) -> LVector3 {
        let (a, b) = (p.u - self.center.u, p.v - self.center.v);
        let h = libm::sqrt(1.0 + p.u * p.u + p.v * p.v) + self.eps * (a * a * a - 3.0 * a * b * b);
        LVector3::new(p.u, p.v, h)
    }

    fn jet(&self, p: Param) -> Option<Jet> {
        let (u, v, e) = (p.u, p.v, self.eps);
        let (a, b) = (u - self.center.u, v - self.center.v);
        let s = libm::sqrt(1.0 + u * u + v * v);
        let s3 = s * s * s;
        let hu = u / s + e * (3.0 * a * a - 3.0 * b * b);
        let hv = v / s - e * 6.0 * a * b;
        let huu = (1.0 + v * v) / s3 + e * 6.0 * a;
        let huv = -u * v / s3 - e * 6.0 * b;
        let hvv = (1.0 + u * u) / s3 - e * 6.0 * a;
        Some(Jet {
            x: self.position(p),
            xu: LVector3::new(1.0, 0.0, hu),
            xv: LVector3::new(0.0, 1.0, hv),
            xuu: LVector3::new(0.0, 0.0, huu),
            xuv: LVector3::new(0.0, 0.0, huv),
            xvv: LVector3::new(0.0, 0.0, hvv),
        })
    }
}

/// Perturbed unit hyperboloid on the disk of radius 0.5 with one isolated
/// umbilic at `center`, of index `−1/2`.
pub fn perturbed_cap(center: Param, eps: f64) -> Result<CatalogEntry> {
    if !(center.norm() < 0.4) {
        return Err(GeometryError::InvalidParameter("umbilic must sit well inside the disk of radius 0.5"));
    }
    if !(eps.is_finite() && eps != 0.0 && libm::fabs(eps) <= 0.3) {
        return Err(GeometryError::InvalidParameter("perturbation must be nonzero and at most 0.3"));
    }
    let patch = ParametricPatch::analytic(PatchDomain::disk(0.5)?, Arc::new(PerturbedCap { center, eps }))?;
    Ok(CatalogEntry {
        name: "perturbed-cap",
        patch,
        supports: Vec::new(),
        expected: vec![
            expect("umbilic_u", center.u, Basis::Exact),
            expect("umbilic_v", center.v, Basis::Exact),
            expect("umbilic_index", -0.5, Basis::Derived),
        ],
    })
}

/// The catenoid `a = 1` cut by the tilted spacelike plane
/// `x₃ + m x₁ = σ_c` with `σ_c = 1`, over `θ ∈ [0, 2π/3]`.
///
/// The chart `X(s, θ) = catenoid(σ₀ + s(σ(θ) − σ₀), θ)`, `σ₀ = 1/2`, puts the
/// cut on the edge `s = 1`; derivatives are taken by finite differences.
/// The cut is not a line of curvature and its contact angle varies.
pub fn tilted_cut(m: f64) -> Result<CatalogEntry> {
    if !(m > 0.0 && m < 0.5) {
        return Err(GeometryError::InvalidParameter("tilt must lie in (0, 0.5)"));
    }
    const SIGMA_C: f64 = 1.0;
    const SIGMA_LO: f64 = 0.5;
    let cut = move |theta: f64| {
        let c = m * libm::cos(theta);
        let mut s = SIGMA_C;
        for _ in 0..50 {
            let step = (s + c * libm::sinh(s) - SIGMA_C) / (1.0 + c * libm::cosh(s));
            s -= step;
            if libm::fabs(step) < 1e-15 {
                break;
            }
        }
        s
    };
    let catenoid = Catenoid { a: 1.0 };
    let domain = PatchDomain::rectangle(0.0, 1.0, 0.0, 2.0 * PI / 3.0)?;
    let patch = ParametricPatch::from_fn(domain, move |p| {
        let sigma = SIGMA_LO + p.u * (cut(p.v) - SIGMA_LO);
        catenoid.position(Param::new(sigma, p.v))
    })?;
    // ⟨(−m, 0, 1), x⟩ = −m x₁ − x₃
    let plane = SupportSurface::plane(LVector3::new(-m, 0.0, 1.0), -SIGMA_C)?;
    Ok(CatalogEntry {
        name: "tilted-cut-negative",
        patch,
        supports: vec![BoundaryComponent { edge: 1, support: plane }],
        expected: vec![expect("mean_curvature", 0.0, Basis::Exact)],
    })
}

/// Names accepted by [`build`].
pub const NAMES: [&str; 11] = [
    "planar-disk",
    "planar-square",
    "hyperbolic-cap",
    "lorentzian-catenoid",
    "catenoid-conformal",
    "truncated-catenoid",
    "de-sitter-disk",
    "de-sitter-shifted-cap",
    "perturbed-cap",
    "tilted-cut-negative",
    "planar-wedge",
];

/// One-line description of each catalog entry.
pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "planar-disk" => "flat disk x3 = 0 of radius c",
        "planar-square" => "flat square [0, side]^2",
        "hyperbolic-cap" => "hyperbolic cap of radius c up to height c cosh t",
        "lorentzian-catenoid" => "maximal catenoid over sigma in [s0, s1], full annulus",
        "catenoid-conformal" => "catenoid in the chart z = exp(sigma + i theta)",
        "truncated-catenoid" => "catenoid sector bounded by two parallels and two meridians",
        "de-sitter-disk" => "flat disk of radius c meeting de Sitter space",
        "de-sitter-shifted-cap" => "shifted hyperbolic cap meeting de Sitter space",
        "perturbed-cap" => "hyperboloid graph with one isolated umbilic",
        "tilted-cut-negative" => "catenoid cut by a tilted spacelike plane",
        "planar-wedge" => "flat parallelogram with corner angle alpha",
        _ => return None,
    })
}

/// Build a catalog entry by name; `param` supplies overrides for the named
/// parameters (`c`, `t`, `a`, `s0`, `s1`, `opening`, `u0`, `v0`, `eps`, `m`,
/// `side`, `alpha`).
pub fn build(name: &str, param: &dyn Fn(&str) -> Option<f64>) -> Result<CatalogEntry> {
    let get = |key: &str, default: f64| param(key).unwrap_or(default);
    match name {
        "planar-disk" => planar_disk(get("c", 1.0)),
        "planar-square" => planar_square(get("side", 1.0)),
        "hyperbolic-cap" => hyperbolic_cap(get("c", 1.0), get("t", 1.0)),
        "lorentzian-catenoid" => lorentzian_catenoid(get("a", 1.0), (get("s0", 0.5), get("s1", 2.0))),
        "catenoid-conformal" => catenoid_conformal_chart(get("a", 1.0)),
        "truncated-catenoid" => truncated_catenoid(get("a", 1.0), (get("s0", 0.5), get("s1", 1.5)), get("opening", 2.0 * PI / 3.0)),
        "de-sitter-disk" => de_sitter_configuration(get("c", 1.0)),
        "de-sitter-shifted-cap" => de_sitter_shifted_cap(get("c", 1.0)),
        "perturbed-cap" => perturbed_cap(Param::new(get("u0", 0.15), get("v0", -0.1)), get("eps", 0.2)),
        "tilted-cut-negative" => tilted_cut(get("m", 0.3)),
        "planar-wedge" => planar_wedge(get("alpha", 3.0 * PI / 4.0)),
        _ => Err(GeometryError::InvalidParameter("unknown catalog entry")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{fundamental_data, spacelike_check};
    use crate::DerivativeMode;

    #[test]
    fn every_name_builds_and_is_spacelike() {
        for name in NAMES {
            let entry = build(name, &|_| None).unwrap();
            assert_eq!(entry.name, name);
            assert!(describe(name).is_some());
            assert!(spacelike_check(&entry.patch, 17).unwrap().passed, "{name}");
        }
        assert!(build("nope", &|_| None).is_err());
    }

    #[test]
    fn analytic_jets_match_finite_differences() {
        for name in NAMES {
            let entry = build(name, &|_| None).unwrap();
            if entry.patch.mode() != DerivativeMode::Analytic {
                continue;
            }
            let fd = entry.patch.with_mode(DerivativeMode::FiniteDifference { step: 1e-4 }).unwrap();
            for p in entry.patch.domain().grid(5) {
                let a = entry.patch.evaluate_derivatives(p).unwrap();
                let b = fd.evaluate_derivatives(p).unwrap();
                for (x, y) in [(a.xu, b.xu), (a.xv, b.xv), (a.xuu, b.xuu), (a.xuv, b.xuv), (a.xvv, b.xvv)] {
                    assert!((x - y).norm_euclid() < 1e-5 * (1.0 + x.norm_euclid()), "{name} at {p:?}");
                }
            }
        }
    }

    #[test]
    fn supports_contain_their_edges() {
        for name in NAMES {
            let entry = build(name, &|_| None).unwrap();
            let edges = entry.patch.domain().edges();
            for comp in &entry.supports {
                for k in 0..=8 {
                    let x = entry.patch.position(edges[comp.edge].point(k as f64 / 8.0)).unwrap();
                    assert!(comp.support.residual(&x).abs() < 1e-9, "{name} edge {}", comp.edge);
                }
            }
        }
    }

    #[test]
    fn caps_have_curvature_one_over_c() {
        for c in [0.5, 1.0, 2.0] {
            let cap = hyperbolic_cap(c, 1.0).unwrap();
            let d = fundamental_data(&cap.patch, Param::new(0.2, -0.3)).unwrap();
            assert!((d.kappa1 - 1.0 / c).abs() < 1e-12 && (d.kappa2 - 1.0 / c).abs() < 1e-12);
        }
    }

    #[test]
    fn shifted_cap_boundary_height() {
        let cap = de_sitter_shifted_cap(2.0).unwrap();
        let x = cap.patch.position(cap.patch.domain().edges()[0].point(0.3)).unwrap();
        assert!((x.x3 + 7.0 * 2.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(hyperbolic_cap(-1.0, 1.0).is_err());
        assert!(truncated_catenoid(1.0, (0.0, 1.0), 1.0).is_err());
        assert!(perturbed_cap(Param::new(0.45, 0.0), 0.1).is_err());
        assert!(tilted_cut(0.9).is_err());
        assert!(truncated_catenoid(1.0, (0.5, 1.5), 3.5).is_err());
    }
}
