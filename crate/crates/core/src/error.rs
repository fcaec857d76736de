use core::fmt;

use crate::lorentz::CausalClass;

/// Errors raised by the geometric routines.
#[derive(Clone, Debug, PartialEq)]
pub enum GeometryError {
    /// A NaN or infinite value reached an operation.
    NonFinite,
    /// An argument had the wrong causal character.
    WrongCausalClass {
        expected: &'static str,
        found: CausalClass,
    },
    /// A timelike vector was required to point to the future.
    PastDirected,
    /// A nonzero vector was required.
    ZeroVector,
    /// A parameter point fell outside the closed patch domain.
    OutsideDomain { u: f64, v: f64 },
    /// The tangent plane is not spacelike (`EG − F² ≤ 0`).
    CausalDegeneracy { u: f64, v: f64, det: f64 },
    /// `X_u` and `X_v` are linearly dependent.
    ImmersionDegeneracy { u: f64, v: f64 },
    /// The Hopf function was requested on a non-isothermal chart.
    NotIsothermal { u: f64, v: f64, residual: f64 },
    /// A grid is too coarse for the requested estimate.
    GridTooCoarse { points: usize },
    /// Consecutive argument samples jump by too much even after resampling.
    SamplingDensity { max_jump: f64 },
    /// `|Φ|` fell below the noise floor on a loop that must avoid zeros.
    BelowNoiseFloor { magnitude: f64 },
    /// The line field is undefined because the point is umbilic.
    Umbilic { u: f64, v: f64 },
    /// A vertex corner is too close to 0 or 2π to straighten.
    DegenerateCorner { angle: f64 },
    /// A one-sided tangent has zero length.
    ZeroTangent,
    /// A point is not on the support surface.
    NotOnSupport { residual: f64 },
    /// Lightlike planes cannot carry a trihedra decomposition.
    LightlikeSupport,
    /// The trihedra equations do not reproduce the frame.
    TrihedraInconsistent { residual: f64 },
    /// A frame was requested at a vertex; request one edge instead.
    VertexPoint { u: f64, v: f64 },
    /// Not enough samples along a boundary component.
    TooFewSamples { samples: usize, required: usize },
    /// A constructor or operation received an out-of-range parameter.
    InvalidParameter(&'static str),
    /// The requested boundary point is not on the domain boundary.
    NotOnBoundary { u: f64, v: f64 },
    /// The boundary is not a line of curvature at the requested point.
    NotLineOfCurvature { residual: f64 },
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonFinite => write!(f, "non-finite value"),
            Self::WrongCausalClass { expected, found } => {
                write!(f, "expected a {expected} vector, found {found:?}")
            }
            Self::PastDirected => write!(f, "vector is past-directed"),
            Self::ZeroVector => write!(f, "zero vector"),
            Self::OutsideDomain { u, v } => write!(f, "({u}, {v}) is outside the patch domain"),
            Self::CausalDegeneracy { u, v, det } => {
                write!(f, "tangent plane at ({u}, {v}) is not spacelike (EG-F^2 = {det})")
            }
            Self::ImmersionDegeneracy { u, v } => {
                write!(f, "immersion is degenerate at ({u}, {v})")
            }
            Self::NotIsothermal { u, v, residual } => {
                write!(f, "chart is not isothermal at ({u}, {v}) (residual {residual:e})")
            }
            Self::GridTooCoarse { points } => {
                write!(f, "grid too coarse: {points} interior points per axis")
            }
            Self::SamplingDensity { max_jump } => {
                write!(f, "loop sampling too sparse: argument jump {max_jump}")
            }
            Self::BelowNoiseFloor { magnitude } => {
                write!(f, "|Phi| = {magnitude:e} on the loop is below the noise floor")
            }
            Self::Umbilic { u, v } => write!(f, "({u}, {v}) is umbilic"),
            Self::DegenerateCorner { angle } => write!(f, "degenerate corner angle {angle}"),
            Self::ZeroTangent => write!(f, "zero-length one-sided tangent"),
            Self::NotOnSupport { residual } => {
                write!(f, "point is off the support surface (residual {residual:e})")
            }
            Self::LightlikeSupport => write!(f, "lightlike support surfaces are not admitted"),
            Self::TrihedraInconsistent { residual } => {
                write!(f, "trihedra reconstruction residual {residual:e}")
            }
            Self::VertexPoint { u, v } => {
                write!(f, "({u}, {v}) is a vertex; request a frame on one edge")
            }
            Self::TooFewSamples { samples, required } => {
                write!(f, "{samples} samples given, at least {required} required")
            }
            Self::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Self::NotOnBoundary { u, v } => write!(f, "({u}, {v}) is not on the boundary"),
            Self::NotLineOfCurvature { residual } => {
                write!(f, "boundary is not a line of curvature (|II(tau,nu)| = {residual:e})")
            }
        }
    }
}

impl core::error::Error for GeometryError {}
