//! Default numerical tolerances, gathered in one place so the CLI can
//! override them.

/// Tolerances and sampling defaults used across the analysis pipeline.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerances {
    /// A chart is isothermal when `(|E−G|+|F|)/max(E,G)` stays below this.
    pub isothermal: f64,
    /// Normalized `|∂Φ/∂z̄|` below which a chart is certified CMC.
    pub cr: f64,
    /// Relative threshold on `|κ₁−κ₂|` for a refined umbilic.
    pub umbilic: f64,
    /// Relative threshold on `|κ₁−κ₂|` below which principal directions are withheld.
    pub principal_degenerate: f64,
    /// Slack allowed on rotation-index bounds and index sums.
    pub index: f64,
    /// Relative spread of contact angles accepted as constant.
    pub capillary_spread: f64,
    /// Relative gate on `|II(τ,ν)|` certifying a line of curvature.
    pub joachimsthal: f64,
    /// Ambient residual for a boundary sample to count as on the support.
    pub support_membership: f64,
    /// Largest trihedra reconstruction residual accepted.
    pub trihedra: f64,
    /// Corners within this angle of 0 or 2π are rejected.
    pub degenerate_corner: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            isothermal: 1e-6,
            cr: 1e-3,
            umbilic: 1e-6,
            principal_degenerate: 1e-8,
            index: 0.05,
            capillary_spread: 1e-4,
            joachimsthal: 1e-5,
            support_membership: 1e-6,
            trihedra: 1e-4,
            degenerate_corner: 0.05,
        }
    }
}

/// Default grid resolution per axis.
pub const DEFAULT_GRID: usize = 129;

/// Largest argument jump tolerated between consecutive loop samples.
pub const MAX_ARGUMENT_JUMP: f64 = core::f64::consts::FRAC_PI_2;

/// Initial and maximal number of samples on a winding loop.
pub const LOOP_SAMPLES: usize = 64;
pub const MAX_LOOP_SAMPLES: usize = 4096;

/// Default samples per boundary edge for capillary checks.
pub const EDGE_SAMPLES: usize = 128;

/// Minimal samples per boundary component.
pub const MIN_EDGE_SAMPLES: usize = 16;
