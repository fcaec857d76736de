//! Parametric immersions `X(u,v)` and their derivatives.

use alloc::sync::Arc;
use core::fmt;

use crate::{GeometryError, LVector3, Param, PatchDomain, Result};

/// Position and first and second partial derivatives at one parameter point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet {
    pub x: LVector3,
    pub xu: LVector3,
    pub xv: LVector3,
    pub xuu: LVector3,
    pub xuv: LVector3,
    pub xvv: LVector3,
}

impl Jet {
    pub fn is_finite(&self) -> bool {
        [self.x, self.xu, self.xv, self.xuu, self.xuv, self.xvv]
            .iter()
            .all(LVector3::is_finite)
    }
}

/// A map from the parameter plane into `L³`.
pub trait Immersion: Send + Sync {
    fn position(&self, p: Param) -> LVector3;

    /// Closed-form derivatives, when the immersion knows them.
    fn jet(&self, _p: Param) -> Option<Jet> {
        None
    }
}

/// Adapter turning a closure into an [`Immersion`] without derivatives.
pub struct FnImmersion<F>(pub F);

impl<F> Immersion for FnImmersion<F>
where
    F: Fn(Param) -> LVector3 + Send + Sync,
{
    fn position(&self, p: Param) -> LVector3 {
        (self.0)(p)
    }
}

/// How derivatives are obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "mode", rename_all = "snake_case"))]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference { step: f64 },
}

/// An immersion over a parameter domain.
#[derive(Clone)]
pub struct ParametricPatch {
    domain: PatchDomain,
    map: Arc<dyn Immersion>,
    mode: DerivativeMode,
}

impl fmt::Debug for ParametricPatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricPatch")
            .field("domain", &self.domain)
            .field("mode", &self.mode)
            .finish_non_exhaustive()
    }
}

/// `1e-4` times the domain diameter.
pub fn default_fd_step(domain: &PatchDomain) -> f64 {
    1e-4 * domain.diameter()
}

impl ParametricPatch {
    /// Patch using the immersion's closed-form derivatives.
    pub fn analytic(domain: PatchDomain, map: Arc<dyn Immersion>) -> Result<Self> {
        let probe = domain.grid(2).first().copied().unwrap_or_default();
        if map.jet(probe).is_none() {
            return Err(GeometryError::InvalidParameter(
                "immersion has no closed-form derivatives",
            ));
        }
        Ok(Self {
            domain,
            map,
            mode: DerivativeMode::Analytic,
        })
    }

    /// Patch using centered finite differences; `None` picks the default step.
    pub fn finite_difference(domain: PatchDomain, map: Arc<dyn Immersion>, step: Option<f64>) -> Result<Self> {
        let step = step.unwrap_or_else(|| default_fd_step(&domain));
        if !(step > 0.0 && step.is_finite()) {
            return Err(GeometryError::InvalidParameter("finite-difference step must be positive"));
        }
        Ok(Self {
            domain,
            map,
            mode: DerivativeMode::FiniteDifference { step },
        })
    }

    pub fn from_fn<F>(domain: PatchDomain, f: F) -> Result<Self>
    where
        F: Fn(Param) -> LVector3 + Send + Sync + 'static,
    {
        Self::finite_difference(domain, Arc::new(FnImmersion(f)), None)
    }

    /// Same immersion and domain, different derivative mode.
    pub fn with_mode(&self, mode: DerivativeMode) -> Result<Self> {
        match mode {
            DerivativeMode::Analytic => Self::analytic(self.domain, self.map.clone()),
            DerivativeMode::FiniteDifference { step } => {
                Self::finite_difference(self.domain, self.map.clone(), Some(step))
            }
        }
    }

    pub fn domain(&self) -> &PatchDomain {
        &self.domain
    }

    /// Same immersion on another domain; the immersion must be defined there.
    pub fn with_domain(&self, domain: PatchDomain) -> Result<Self> {
        let mode = match self.mode {
            DerivativeMode::FiniteDifference { step } if step == default_fd_step(&self.domain) => DerivativeMode::FiniteDifference {
                step: default_fd_step(&domain),
            },
            m => m,
        };
        let patch = Self {
            domain,
            map: self.map.clone(),
            mode,
        };
        patch.position(domain.grid(2).first().copied().unwrap_or_default())?;
        Ok(patch)
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    fn slack(&self) -> f64 {
        1e-9 * self.domain.diameter()
    }

    pub fn position(&self, p: Param) -> Result<LVector3> {
        if !self.domain.contains(p, self.slack()) {
            return Err(GeometryError::OutsideDomain { u: p.u, v: p.v });
        }
        let x = self.map.position(p);
        if x.is_finite() {
            Ok(x)
        } else {
            Err(GeometryError::NonFinite)
        }
    }

    /// `X, X_u, X_v, X_uu, X_uv, X_vv` at `p`.
    pub fn evaluate_derivatives(&self, p: Param) -> Result<Jet> {
        if !self.domain.contains(p, self.slack()) {
            return Err(GeometryError::OutsideDomain { u: p.u, v: p.v });
        }
        let jet = match self.mode {
            DerivativeMode::Analytic => self.map.jet(p).ok_or(GeometryError::InvalidParameter(
                "immersion has no closed-form derivatives",
            ))?,
            DerivativeMode::FiniteDifference { step } => self.finite_difference_jet(p, step),
        };
        if jet.is_finite() {
            Ok(jet)
        } else {
            Err(GeometryError::NonFinite)
        }
    }

    fn fits(&self, p: Param, axis: Param, step: f64, offsets: &[i32]) -> bool {
        offsets
            .iter()
            .all(|&k| self.domain.contains(p + axis * (k as f64 * step), self.slack()))
    }

    fn choose(&self, p: Param, axis: Param, step: f64) -> Side {
        if self.fits(p, axis, step, &[-1, 1]) {
            Side::Centered
        } else if self.fits(p, axis, step, &[1, 2, 3]) {
            Side::Forward
        } else {
            Side::Backward
        }
    }

    fn finite_difference_jet(&self, p: Param, h: f64) -> Jet {
        let eu = Param::new(1.0, 0.0);
        let ev = Param::new(0.0, 1.0);
        let su = self.choose(p, eu, h);
        let sv = self.choose(p, ev, h);
        let at = |i: i32, j: i32| self.map.position(p + Param::new(i as f64 * h, j as f64 * h));

        let mut xu = LVector3::ZERO;
        for &(k, w) in su.first() {
            xu += at(k, 0) * w;
        }
        let mut xv = LVector3::ZERO;
        for &(k, w) in sv.first() {
            xv += at(0, k) * w;
        }
        let mut xuu = LVector3::ZERO;
        for &(k, w) in su.second() {
            xuu += at(k, 0) * w;
        }
        let mut xvv = LVector3::ZERO;
        for &(k, w) in sv.second() {
            xvv += at(0, k) * w;
        }
        let mut xuv = LVector3::ZERO;
        for &(i, wi) in su.first() {
            for &(j, wj) in sv.first() {
                xuv += at(i, j) * (wi * wj);
            }
        }
        Jet {
            x: at(0, 0),
            xu: xu / h,
            xv: xv / h,
            xuu: xuu / (h * h),
            xuv: xuv / (h * h),
            xvv: xvv / (h * h),
        }
    }
}

/// Second-order stencils for one axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Centered,
    Forward,
    Backward,
}

impl Side {
    fn first(self) -> &'static [(i32, f64)] {
        match self {
            Side::Centered => &[(-1, -0.5), (1, 0.5)],
            Side::Forward => &[(0, -1.5), (1, 2.0), (2, -0.5)],
            Side::Backward => &[(-2, 0.5), (-1, -2.0), (0, 1.5)],
        }
    }

    fn second(self) -> &'static [(i32, f64)] {
        match self {
            Side::Centered => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
            Side::Forward => &[(0, 2.0), (1, -5.0), (2, 4.0), (3, -1.0)],
            Side::Backward => &[(-3, -1.0), (-2, 4.0), (-1, -5.0), (0, 2.0)],
        }
    }
}
