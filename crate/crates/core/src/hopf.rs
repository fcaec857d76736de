//! The Hopf function `Φ = e − g − 2if` on isothermal charts and the
//! Cauchy-Riemann residual that certifies constant mean curvature.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::field::CurvatureField;
use crate::surface::Forms;
use crate::{GeometryError, Param, Result};

/// `Φ` at one parameter point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HopfSample {
    pub z: Param,
    pub phi: Complex64,
    pub lambda2: f64,
}

impl HopfSample {
    /// `|Φ|/λ²`, equal to `κ₁ − κ₂` on isothermal charts.
    pub fn normalized_magnitude(&self) -> f64 {
        self.phi.norm() / self.lambda2
    }
}

/// `e − g − 2if` without checking isothermality.
pub fn phi_of(forms: &Forms) -> Complex64 {
    let s = forms.second;
    Complex64::new(s.uu - s.vv, -2.0 * s.uv)
}

/// Hopf function at `p`; fails unless the chart is isothermal there
/// within `isothermal_tol`.
pub fn hopf_function<F: CurvatureField>(field: &F, p: Param, isothermal_tol: f64) -> Result<HopfSample> {
    let forms = field.forms(p)?;
    let defect = forms.isothermal_defect();
    if !(defect < isothermal_tol) {
        return Err(GeometryError::NotIsothermal {
            u: p.u,
            v: p.v,
            residual: defect,
        });
    }
    Ok(HopfSample {
        z: p,
        phi: phi_of(&forms),
        lambda2: forms.first.uu,
    })
}

/// Largest normalized `|∂Φ/∂z̄|` over the interior of an `n × n` grid.
///
/// `∂Φ/∂z̄ = (Φ_u + iΦ_v)/2` is estimated by centered differences at grid
/// points whose four neighbours lie in the domain, and normalized by
/// `max|Φ| + 1e-8·max λ²`. On a CMC isothermal chart this is a pure
/// discretization error and decays like the squared grid spacing.
pub fn cr_residual<F: CurvatureField>(field: &F, grid: usize) -> Result<f64> {
    if grid < 6 {
        return Err(GeometryError::GridTooCoarse {
            points: grid.saturating_sub(2),
        });
    }
    let domain = field.domain();
    let (u0, u1, v0, v1) = domain.bounding_box();
    let (hu, hv) = domain.grid_spacing(grid);
    let slack = 1e-12 * domain.diameter();
    let mut values: Vec<Option<Complex64>> = vec![None; grid * grid];
    let mut max_phi: f64 = 0.0;
    let mut max_lambda2: f64 = 0.0;
    for j in 0..grid {
        for i in 0..grid {
            let p = Param::new(u0 + (u1 - u0) * i as f64 / (grid - 1) as f64, v0 + (v1 - v0) * j as f64 / (grid - 1) as f64);
            if !domain.contains(p, slack) {
                continue;
            }
            if let Ok(forms) = field.forms(p) {
                let phi = phi_of(&forms);
                max_phi = max_phi.max(phi.norm());
                max_lambda2 = max_lambda2.max(forms.first.uu);
                values[j * grid + i] = Some(phi);
            }
        }
    }
    let mut worst: f64 = 0.0;
    let mut interior = 0usize;
    for j in 1..grid - 1 {
        for i in 1..grid - 1 {
            let at = |ii: usize, jj: usize| values[jj * grid + ii];
            let (Some(e), Some(w), Some(n), Some(s)) = (at(i + 1, j), at(i - 1, j), at(i, j + 1), at(i, j - 1)) else {
                continue;
            };
            interior += 1;
            let phi_u = (e - w) / (2.0 * hu);
            let phi_v = (n - s) / (2.0 * hv);
            let dzbar = (phi_u + Complex64::i() * phi_v) * 0.5;
            worst = worst.max(dzbar.norm());
        }
    }
    if interior < 16 {
        return Err(GeometryError::GridTooCoarse { points: interior });
    }
    Ok(worst / (max_phi + 1e-8 * max_lambda2 + f64::MIN_POSITIVE))
}
