//! Sources of curvature-line fields: real patches and synthetic Hopf data.
//!
//! Everything downstream of the fundamental forms (Hopf function, line
//! field, windings, tracing) only needs the two forms at a parameter point,
//! so it is written against [`CurvatureField`].

use alloc::sync::Arc;
use core::fmt;

use num_complex::Complex64;

use crate::surface::{fundamental_data_with, Forms, QuadraticForm};
use crate::{GeometryError, LVector3, Param, ParametricPatch, PatchDomain, Result, Tolerances};

pub trait CurvatureField {
    fn domain(&self) -> &PatchDomain;

    fn forms(&self, p: Param) -> Result<Forms>;

    /// Ambient position, when the field comes from an immersion.
    fn position(&self, _p: Param) -> Option<LVector3> {
        None
    }
}

impl CurvatureField for ParametricPatch {
    fn domain(&self) -> &PatchDomain {
        ParametricPatch::domain(self)
    }

    fn forms(&self, p: Param) -> Result<Forms> {
        Ok(fundamental_data_with(self, p, Tolerances::default().principal_degenerate)?.forms)
    }

    fn position(&self, p: Param) -> Option<LVector3> {
        ParametricPatch::position(self, p).ok()
    }
}

impl<T: CurvatureField + ?Sized> CurvatureField for &T {
    fn domain(&self) -> &PatchDomain {
        (**self).domain()
    }

    fn forms(&self, p: Param) -> Result<Forms> {
        (**self).forms(p)
    }

    fn position(&self, p: Param) -> Option<LVector3> {
        (**self).position(p)
    }
}

/// A flat isothermal chart (`E = G = 1`, `F = 0`) carrying a prescribed
/// Hopf function `Φ = e − g − 2if` and mean curvature.
#[derive(Clone)]
pub struct SyntheticHopfField {
    domain: PatchDomain,
    phi: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    mean: f64,
}

impl fmt::Debug for SyntheticHopfField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SyntheticHopfField")
            .field("domain", &self.domain)
            .field("mean", &self.mean)
            .finish_non_exhaustive()
    }
}

impl SyntheticHopfField {
    pub fn new<F>(domain: PatchDomain, phi: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            domain,
            phi: Arc::new(phi),
            mean: 0.0,
        }
    }

    /// `Φ(z) = zⁿ`; negative `n` gives a pole of order `−n`.
    pub fn power(domain: PatchDomain, n: i32) -> Self {
        Self::new(domain, move |z| z.powi(n))
    }

    pub fn with_mean_curvature(mut self, mean: f64) -> Self {
        self.mean = mean;
        self
    }

    pub fn phi(&self, p: Param) -> Complex64 {
        (self.phi)(Complex64::new(p.u, p.v))
    }

    /// Forms realizing a given Hopf value and mean curvature on a flat chart.
    pub fn forms_for(phi: Complex64, mean: f64) -> Forms {
        // H = −(e+g)/2, e − g = Re Φ, f = −Im Φ / 2
        Forms {
            first: QuadraticForm::new(1.0, 0.0, 1.0),
            second: QuadraticForm::new(-mean + 0.5 * phi.re, -0.5 * phi.im, -mean - 0.5 * phi.re),
        }
    }
}

impl CurvatureField for SyntheticHopfField {
    fn domain(&self) -> &PatchDomain {
        &self.domain
    }

    fn forms(&self, p: Param) -> Result<Forms> {
        let phi = self.phi(p);
        if !(phi.re.is_finite() && phi.im.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(Self::forms_for(phi, self.mean))
    }
}
