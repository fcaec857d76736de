//! Vectors of `L³` and the Lorentzian operations on them.

use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::{GeometryError, Result};

/// A point or vector of `L³` in canonical coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LVector3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

/// Causal character of a vector, from the sign of `⟨v,v⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Lightlike,
}

impl LVector3 {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);
    pub const E1: Self = Self::new(1.0, 0.0, 0.0);
    pub const E2: Self = Self::new(0.0, 1.0, 0.0);
    pub const E3: Self = Self::new(0.0, 0.0, 1.0);

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    /// Like [`LVector3::new`] but rejects NaN and infinities.
    pub fn try_new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let v = Self::new(x1, x2, x3);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(GeometryError::NonFinite)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    /// Lorentz-Minkowski inner product `a₁b₁ + a₂b₂ − a₃b₃`.
    #[inline]
    pub fn inner(&self, other: &Self) -> f64 {
        self.x1 * other.x1 + self.x2 * other.x2 - self.x3 * other.x3
    }

    /// `⟨v,v⟩`.
    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    /// `|v| = |⟨v,v⟩|^{1/2}`.
    pub fn lorentz_norm(&self) -> f64 {
        libm::sqrt(libm::fabs(self.norm_sq()))
    }

    /// Euclidean dot product, used only for scaling and residuals.
    #[inline]
    pub fn dot_euclid(&self, other: &Self) -> f64 {
        self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3
    }

    pub fn norm_euclid(&self) -> f64 {
        libm::sqrt(self.dot_euclid(self))
    }

    pub fn cross_euclid(&self, other: &Self) -> Self {
        Self::new(
            self.x2 * other.x3 - self.x3 * other.x2,
            self.x3 * other.x1 - self.x1 * other.x3,
            self.x1 * other.x2 - self.x2 * other.x1,
        )
    }

    /// Lorentzian vector product: the unique `c` with `⟨c,w⟩ = det(a,b,w)`.
    pub fn lorentz_cross(&self, other: &Self) -> Self {
        let c = self.cross_euclid(other);
        Self::new(c.x1, c.x2, -c.x3)
    }

    pub fn causal_class(&self) -> CausalClass {
        causal_class(self)
    }

    /// Rescale to `|⟨v,v⟩| = 1`.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.lorentz_norm();
        if n == 0.0 || !n.is_finite() {
            return Err(GeometryError::ZeroVector);
        }
        Ok(*self / n)
    }
}

/// `⟨a,b⟩ = a₁b₁ + a₂b₂ − a₃b₃`.
#[inline]
pub fn minkowski_inner(a: &LVector3, b: &LVector3) -> f64 {
    a.inner(b)
}

/// Classify by the exact sign of the computed quadratic form. The zero
/// vector counts as spacelike.
pub fn causal_class(v: &LVector3) -> CausalClass {
    let q = v.norm_sq();
    if q > 0.0 || *v == LVector3::ZERO {
        CausalClass::Spacelike
    } else if q < 0.0 {
        CausalClass::Timelike
    } else {
        CausalClass::Lightlike
    }
}

/// Euclidean determinant of the matrix with columns `a`, `b`, `w`.
pub fn det3(a: &LVector3, b: &LVector3, w: &LVector3) -> f64 {
    a.cross_euclid(b).dot_euclid(w)
}

/// See [`LVector3::lorentz_cross`].
pub fn lorentz_cross(a: &LVector3, b: &LVector3) -> LVector3 {
    a.lorentz_cross(b)
}

/// Whether a timelike or lightlike vector has the orientation of `(0,0,1)`.
pub fn is_future_directed(v: &LVector3) -> Result<bool> {
    if !v.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    match causal_class(v) {
        CausalClass::Spacelike => Err(GeometryError::WrongCausalClass {
            expected: "timelike or lightlike",
            found: CausalClass::Spacelike,
        }),
        _ => Ok(v.x3 > 0.0),
    }
}

fn require_future_timelike(v: &LVector3) -> Result<()> {
    if !v.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    let class = causal_class(v);
    if class != CausalClass::Timelike {
        return Err(GeometryError::WrongCausalClass {
            expected: "timelike",
            found: class,
        });
    }
    if v.x3 <= 0.0 {
        return Err(GeometryError::PastDirected);
    }
    Ok(())
}

/// Angle between two future-directed timelike vectors:
/// `|⟨a,b⟩| = |a||b| cosh β`.
pub fn timelike_angle(a: &LVector3, b: &LVector3) -> Result<f64> {
    require_future_timelike(a)?;
    require_future_timelike(b)?;
    let ratio = libm::fabs(a.inner(b)) / (a.lorentz_norm() * b.lorentz_norm());
    // reverse Cauchy-Schwarz gives ratio >= 1; rounding can undershoot
    Ok(libm::acosh(ratio.max(1.0)))
}

/// Angle between a spacelike `s` and a future-directed timelike `t`:
/// `|⟨s,t⟩| = |s||t| sinh β`.
pub fn mixed_angle(s: &LVector3, t: &LVector3) -> Result<f64> {
    if !s.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    if *s == LVector3::ZERO {
        return Err(GeometryError::ZeroVector);
    }
    let class = causal_class(s);
    if class != CausalClass::Spacelike {
        return Err(GeometryError::WrongCausalClass {
            expected: "spacelike",
            found: class,
        });
    }
    require_future_timelike(t)?;
    let ratio = libm::fabs(s.inner(t)) / (s.lorentz_norm() * t.lorentz_norm());
    Ok(libm::asinh(ratio))
}

/// Boundary trihedron `{τ, N, ν}` along a surface boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundaryFrame {
    /// Unit spacelike boundary tangent.
    pub tau: LVector3,
    /// Unit future-directed timelike surface normal.
    pub normal: LVector3,
    /// Unit spacelike inward conormal, `−τ ∧ N`.
    pub conormal: LVector3,
}

impl BoundaryFrame {
    /// Build from a tangent and a normal, setting `ν = −τ ∧ N`.
    pub fn from_tangent_normal(tau: LVector3, normal: LVector3) -> Self {
        Self {
            tau,
            normal,
            conormal: -tau.lorentz_cross(&normal),
        }
    }

    /// Largest violation of the frame identities.
    pub fn defect(&self) -> f64 {
        let Self {
            tau,
            normal,
            conormal,
        } = self;
        let relation = (*conormal + tau.lorentz_cross(normal)).norm_euclid();
        [
            libm::fabs(tau.norm_sq() - 1.0),
            libm::fabs(normal.norm_sq() + 1.0),
            libm::fabs(conormal.norm_sq() - 1.0),
            libm::fabs(tau.inner(normal)),
            libm::fabs(tau.inner(conormal)),
            libm::fabs(normal.inner(conormal)),
            relation,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Check the frame identities within `tol` and future orientation of `N`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        if !(self.tau.is_finite() && self.normal.is_finite() && self.conormal.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if self.normal.x3 <= 0.0 {
            return Err(GeometryError::PastDirected);
        }
        let defect = self.defect();
        if defect > tol {
            return Err(GeometryError::TrihedraInconsistent { residual: defect });
        }
        Ok(())
    }
}

impl Add for LVector3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x1 + rhs.x1, self.x2 + rhs.x2, self.x3 + rhs.x3)
    }
}

impl AddAssign for LVector3 {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for LVector3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x1 - rhs.x1, self.x2 - rhs.x2, self.x3 - rhs.x3)
    }
}

impl SubAssign for LVector3 {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Neg for LVector3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<f64> for LVector3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Mul<LVector3> for f64 {
    type Output = LVector3;
    fn mul(self, v: LVector3) -> LVector3 {
        v * self
    }
}

impl Div<f64> for LVector3 {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.x1 / s, self.x2 / s, self.x3 / s)
    }
}
