//! Parameter domains of patches, their boundary edges and vertices.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::ops::{Add, Mul, Neg, Sub};

use crate::{GeometryError, Result};

/// A point or direction of the parameter plane, `z = u + iv`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Param {
    pub u: f64,
    pub v: f64,
}

impl Param {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn polar(radius: f64, angle: f64) -> Self {
        Self::new(radius * libm::cos(angle), radius * libm::sin(angle))
    }

    pub fn dot(self, other: Self) -> f64 {
        self.u * other.u + self.v * other.v
    }

    /// z-component of the planar cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.u * other.v - self.v * other.u
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.u, self.v)
    }

    pub fn arg(self) -> f64 {
        libm::atan2(self.v, self.u)
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn unit(self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            Err(GeometryError::ZeroTangent)
        } else {
            Ok(self * (1.0 / n))
        }
    }

    /// Rotate counterclockwise by a quarter turn.
    pub fn perp(self) -> Self {
        Self::new(-self.v, self.u)
    }

    pub fn rotate(self, angle: f64) -> Self {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        Self::new(c * self.u - s * self.v, s * self.u + c * self.v)
    }

    pub fn is_finite(self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }
}

impl Add for Param {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.u + o.u, self.v + o.v)
    }
}

impl Sub for Param {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.u - o.u, self.v - o.v)
    }
}

impl Neg for Param {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.u, -self.v)
    }
}

impl Mul<f64> for Param {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.u * s, self.v * s)
    }
}

/// `x mod m` in `[0, m)`.
pub(crate) fn rem_euclid(x: f64, m: f64) -> f64 {
    let r = libm::fmod(x, m);
    if r < 0.0 {
        r + m
    } else {
        r
    }
}

/// Counterclockwise angle from `a` to `b`, in `[0, 2π)`.
pub fn ccw_angle(a: Param, b: Param) -> f64 {
    let t = libm::atan2(a.cross(b), a.dot(b));
    if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

/// Parameter domain of a patch.
///
/// `AnnularSector` uses polar parameters directly: `u` is the radial
/// coordinate and `v` the angle, so its parameter set is the rectangle
/// `[r0, r1] × [theta0, theta1]`. With an opening of `2π` or more the angle is
/// periodic and the sector is a full annulus.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum PatchDomain {
    Rectangle { u0: f64, u1: f64, v0: f64, v1: f64 },
    /// `u² + v² ≤ radius²`, `v ≥ 0`.
    HalfDisk { radius: f64 },
    /// `u² + v² ≤ radius²`.
    Disk { radius: f64 },
    AnnularSector {
        r0: f64,
        r1: f64,
        theta0: f64,
        theta1: f64,
    },
}

/// A corner of the boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Vertex {
    pub point: Param,
    /// Unit direction of the edge leaving the vertex in counterclockwise order.
    pub next_dir: Param,
    /// Unit direction along the edge arriving at the vertex, pointing away from it.
    pub prev_dir: Param,
    /// Index of the edge leaving the vertex.
    pub next_edge: usize,
    /// Index of the edge arriving at the vertex.
    pub prev_edge: usize,
}

impl Vertex {
    /// Interior angle of the corner in the parameter plane.
    pub fn parameter_angle(&self) -> f64 {
        ccw_angle(self.next_dir, self.prev_dir)
    }
}

/// A smooth boundary edge, parametrized by `s ∈ [0, 1]` counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum BoundaryCurve {
    Segment { from: Param, to: Param },
    Arc {
        center: Param,
        radius: f64,
        angle0: f64,
        angle1: f64,
    },
}

impl BoundaryCurve {
    pub fn point(&self, s: f64) -> Param {
        match *self {
            Self::Segment { from, to } => from + (to - from) * s,
            Self::Arc {
                center,
                radius,
                angle0,
                angle1,
            } => center + Param::polar(radius, angle0 + (angle1 - angle0) * s),
        }
    }

    /// `d/ds` of [`BoundaryCurve::point`].
    pub fn velocity(&self, s: f64) -> Param {
        match *self {
            Self::Segment { from, to } => to - from,
            Self::Arc {
                radius,
                angle0,
                angle1,
                ..
            } => {
                let t = angle0 + (angle1 - angle0) * s;
                Param::polar(radius * (angle1 - angle0), t).perp()
            }
        }
    }

    /// Euclidean length in the parameter plane.
    pub fn parameter_length(&self) -> f64 {
        match *self {
            Self::Segment { from, to } => from.distance(to),
            Self::Arc {
                radius,
                angle0,
                angle1,
                ..
            } => radius * libm::fabs(angle1 - angle0),
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(*self, Self::Arc { angle0, angle1, .. } if libm::fabs(angle1 - angle0) >= TAU - 1e-12)
    }

    /// Closest curve parameter to `p` and the distance to it.
    pub fn project(&self, p: Param) -> (f64, f64) {
        match *self {
            Self::Segment { from, to } => {
                let d = to - from;
                let s = ((p - from).dot(d) / d.dot(d)).clamp(0.0, 1.0);
                (s, self.point(s).distance(p))
            }
            Self::Arc {
                center,
                angle0,
                angle1,
                ..
            } => {
                let rel = p - center;
                let span = angle1 - angle0;
                let mut t = rel.arg() - angle0;
                if span > 0.0 {
                    t = rem_euclid(t, TAU);
                    if t > span {
                        // nearer endpoint in angle
                        let to_end = t - span;
                        let to_start = TAU - t;
                        t = if to_end < to_start { span } else { 0.0 };
                    }
                } else {
                    t = -rem_euclid(-t, TAU);
                    if t < span {
                        let to_end = span - t;
                        let to_start = TAU + t;
                        t = if to_end < to_start { span } else { 0.0 };
                    }
                }
                let s = if span == 0.0 { 0.0 } else { t / span };
                (s, self.point(s).distance(p))
            }
        }
    }
}

/// Where a parameter point sits relative to a domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Interior,
    Edge(usize),
    Vertex(usize),
    Outside,
}

impl PatchDomain {
    pub fn rectangle(u0: f64, u1: f64, v0: f64, v1: f64) -> Result<Self> {
        if !(u1 > u0 && v1 > v0) || !(u0.is_finite() && u1.is_finite() && v0.is_finite() && v1.is_finite()) {
            return Err(GeometryError::InvalidParameter("rectangle must have positive extent"));
        }
        Ok(Self::Rectangle { u0, u1, v0, v1 })
    }

    pub fn disk(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeometryError::InvalidParameter("disk radius must be positive"));
        }
        Ok(Self::Disk { radius })
    }

    pub fn half_disk(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeometryError::InvalidParameter("half-disk radius must be positive"));
        }
        Ok(Self::HalfDisk { radius })
    }

    pub fn annular_sector(r0: f64, r1: f64, theta0: f64, theta1: f64) -> Result<Self> {
        if !(r1 > r0 && theta1 > theta0) || !(r0.is_finite() && r1.is_finite() && theta0.is_finite() && theta1.is_finite()) {
            return Err(GeometryError::InvalidParameter("annular sector must have positive extent"));
        }
        Ok(Self::AnnularSector {
            r0,
            r1,
            theta0,
            theta1,
        })
    }

    fn is_periodic(&self) -> bool {
        matches!(*self, Self::AnnularSector { theta0, theta1, .. } if theta1 - theta0 >= TAU)
    }

    /// `(u_min, u_max, v_min, v_max)`.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match *self {
            Self::Rectangle { u0, u1, v0, v1 } => (u0, u1, v0, v1),
            Self::HalfDisk { radius } => (-radius, radius, 0.0, radius),
            Self::Disk { radius } => (-radius, radius, -radius, radius),
            Self::AnnularSector {
                r0,
                r1,
                theta0,
                theta1,
            } => (r0, r1, theta0, theta1.min(theta0 + TAU)),
        }
    }

    /// Diagonal of the bounding box.
    pub fn diameter(&self) -> f64 {
        let (a, b, c, d) = self.bounding_box();
        libm::hypot(b - a, d - c)
    }

    /// Closed-domain membership with slack `tol`.
    pub fn contains(&self, p: Param, tol: f64) -> bool {
        if !p.is_finite() {
            return false;
        }
        match *self {
            Self::Rectangle { u0, u1, v0, v1 } => {
                p.u >= u0 - tol && p.u <= u1 + tol && p.v >= v0 - tol && p.v <= v1 + tol
            }
            Self::HalfDisk { radius } => p.norm() <= radius + tol && p.v >= -tol,
            Self::Disk { radius } => p.norm() <= radius + tol,
            Self::AnnularSector {
                r0,
                r1,
                theta0,
                theta1,
            } => {
                let radial = p.u >= r0 - tol && p.u <= r1 + tol;
                radial && (self.is_periodic() || (p.v >= theta0 - tol && p.v <= theta1 + tol))
            }
        }
    }

    /// Boundary edges in counterclockwise order.
    pub fn edges(&self) -> Vec<BoundaryCurve> {
        let seg = |a: (f64, f64), b: (f64, f64)| BoundaryCurve::Segment {
            from: Param::new(a.0, a.1),
            to: Param::new(b.0, b.1),
        };
        match *self {
            Self::Rectangle { u0, u1, v0, v1 } => alloc::vec![
                seg((u0, v0), (u1, v0)),
                seg((u1, v0), (u1, v1)),
                seg((u1, v1), (u0, v1)),
                seg((u0, v1), (u0, v0)),
            ],
            Self::AnnularSector {
                r0,
                r1,
                theta0,
                theta1,
            } => {
                if self.is_periodic() {
                    let t1 = theta0 + TAU;
                    alloc::vec![seg((r1, theta0), (r1, t1)), seg((r0, t1), (r0, theta0))]
                } else {
                    alloc::vec![
                        seg((r0, theta0), (r1, theta0)),
                        seg((r1, theta0), (r1, theta1)),
                        seg((r1, theta1), (r0, theta1)),
                        seg((r0, theta1), (r0, theta0)),
                    ]
                }
            }
            Self::HalfDisk { radius } => alloc::vec![
                seg((-radius, 0.0), (radius, 0.0)),
                BoundaryCurve::Arc {
                    center: Param::default(),
                    radius,
                    angle0: 0.0,
                    angle1: PI,
                },
            ],
            Self::Disk { radius } => alloc::vec![BoundaryCurve::Arc {
                center: Param::default(),
                radius,
                angle0: 0.0,
                angle1: TAU,
            }],
        }
    }

    /// Human-readable edge names, aligned with [`PatchDomain::edges`].
    pub fn edge_names(&self) -> Vec<&'static str> {
        match *self {
            Self::Rectangle { .. } => alloc::vec!["v0", "u1", "v1", "u0"],
            Self::AnnularSector { .. } if self.is_periodic() => alloc::vec!["r1", "r0"],
            Self::AnnularSector { .. } => alloc::vec!["theta0", "r1", "theta1", "r0"],
            Self::HalfDisk { .. } => alloc::vec!["diameter", "arc"],
            Self::Disk { .. } => alloc::vec!["circle"],
        }
    }

    /// Corners of the boundary, where consecutive edges meet.
    pub fn vertices(&self) -> Vec<Vertex> {
        let edges = self.edges();
        if edges.len() < 2 || self.is_periodic() {
            return Vec::new();
        }
        let n = edges.len();
        (0..n)
            .map(|next| {
                let prev = (next + n - 1) % n;
                let point = edges[next].point(0.0);
                let next_dir = edges[next].velocity(0.0).unit().expect("nondegenerate edge");
                let prev_dir = -edges[prev].velocity(1.0).unit().expect("nondegenerate edge");
                Vertex {
                    point,
                    next_dir,
                    prev_dir,
                    next_edge: next,
                    prev_edge: prev,
                }
            })
            .collect()
    }

    /// 1 for disk-type domains, 0 for a full annulus.
    pub fn euler_characteristic(&self) -> i32 {
        if self.is_periodic() {
            0
        } else {
            1
        }
    }

    /// Classify `p` using distance `tol` to edges and vertices.
    pub fn locate(&self, p: Param, tol: f64) -> Location {
        if !self.contains(p, tol) {
            return Location::Outside;
        }
        for (i, vx) in self.vertices().iter().enumerate() {
            if vx.point.distance(p) <= tol {
                return Location::Vertex(i);
            }
        }
        for (i, edge) in self.edges().iter().enumerate() {
            if edge.project(p).1 <= tol {
                return Location::Edge(i);
            }
        }
        Location::Interior
    }

    /// Counterclockwise unit tangent and inward unit normal of edge `edge` at `p`.
    pub fn edge_frame(&self, edge: usize, p: Param) -> Result<(Param, Param)> {
        let curve = self
            .edges()
            .get(edge)
            .copied()
            .ok_or(GeometryError::InvalidParameter("edge index out of range"))?;
        let (s, _) = curve.project(p);
        let t = curve.velocity(s).unit()?;
        // interior lies to the left of a counterclockwise boundary
        Ok((t, t.perp()))
    }

    /// Lattice of `n × n` points over the bounding box, kept when inside.
    pub fn grid(&self, n: usize) -> Vec<Param> {
        let n = n.max(2);
        let (a, b, c, d) = self.bounding_box();
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            let v = c + (d - c) * j as f64 / (n - 1) as f64;
            for i in 0..n {
                let u = a + (b - a) * i as f64 / (n - 1) as f64;
                let p = Param::new(u, v);
                if self.contains(p, 1e-12 * self.diameter()) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Lattice spacing of [`PatchDomain::grid`] along each axis.
    pub fn grid_spacing(&self, n: usize) -> (f64, f64) {
        let n = n.max(2);
        let (a, b, c, d) = self.bounding_box();
        ((b - a) / (n - 1) as f64, (d - c) / (n - 1) as f64)
    }
}
