//! Numerical geometry of spacelike surfaces in Lorentz-Minkowski space `L³`.
//!
//! `L³` is `ℝ³` with the metric `dx₁² + dx₂² − dx₃²`. The crate works with
//! parametric spacelike patches and provides:
//!
//!   * exact Lorentzian linear algebra ([`lorentz`]),
//!   * first and second fundamental forms, principal curvatures and
//!     directions ([`surface`]),
//!   * the Hopf function `Φ = e − g − 2if`, holomorphy residuals, umbilic
//!     detection and rotation indices at interior points, boundary points
//!     and vertices, with Poincaré–Hopf bookkeeping ([`hopf`], [`index`]),
//!   * integration of lines of curvature ([`lines`]),
//!   * totally umbilic support surfaces, boundary trihedra and contact-angle
//!     verification for capillary boundaries ([`capillary`]),
//!   * a catalog of named surfaces with known answers ([`catalog`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the CLI
//! live in the `spacelike` companion crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod capillary;
pub mod catalog;
pub mod domain;
pub mod error;
pub mod field;
pub mod hopf;
pub mod index;
pub mod lines;
pub mod lorentz;
pub mod patch;
pub mod surface;
pub mod tolerances;

pub use num_complex::Complex64;

pub use domain::{BoundaryCurve, Param, PatchDomain, Vertex};
pub use error::GeometryError;
pub use lorentz::{BoundaryFrame, CausalClass, LVector3};
pub use patch::{DerivativeMode, Immersion, Jet, ParametricPatch};
pub use surface::FundamentalData;
pub use tolerances::Tolerances;

/// Crate-wide result alias.
pub type Result<T, E = GeometryError> = core::result::Result<T, E>;
