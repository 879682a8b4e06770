//! Analytic Gaussian states: coherent, ideal squeezed and the quartic-system
//! coherent family, with closed-form moments.

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::grid::{rasterize_real, GridField, PhaseGrid};
use std::sync::Arc;

/// Gaussian state with independent q and p marginals.
///
/// Variances are stored directly so the three constructor families share one
/// type; the squeezing parameter is recovered as a ratio when needed. No
/// cross-correlation term is representable here: correlated Gaussians arise
/// only through evolution and live on grids or in covariance matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub q0: f64,
    pub p0: f64,
    pub var_q: f64,
    pub var_p: f64,
}

impl GaussianState {
    /// Heisenberg-admissible Gaussian with the given moments.
    pub fn new(q0: f64, p0: f64, var_q: f64, var_p: f64, cfg: &SimConfig) -> Result<Self> {
        if !(var_q > 0.0) || !(var_p > 0.0) {
            return Err(Error::Domain(format!(
                "variances must be positive, got ({var_q}, {var_p})"
            )));
        }
        let min = cfg.hbar * cfg.hbar / 4.0;
        if var_q * var_p < min * (1.0 - 1e-12) {
            return Err(Error::Domain(format!(
                "variance product {} violates the Heisenberg bound {min}",
                var_q * var_p
            )));
        }
        Ok(Self {
            q0,
            p0,
            var_q,
            var_p,
        })
    }

    /// Pure within tolerance: var_q · var_p = ħ²/4.
    pub fn is_pure(&self, cfg: &SimConfig) -> bool {
        let min = cfg.hbar * cfg.hbar / 4.0;
        (self.var_q * self.var_p - min).abs() <= cfg.default_tolerance * min.max(1.0)
    }

    /// Grid covering at least eight standard deviations in each direction,
    /// centered on the state.
    pub fn default_grid(&self, n: usize) -> Result<Arc<PhaseGrid>> {
        let half_q = 8.0 * (2.0 * self.var_q).sqrt();
        let half_p = 8.0 * (2.0 * self.var_p).sqrt();
        Ok(Arc::new(PhaseGrid::centered(
            self.q0, self.p0, half_q, half_p, n, n,
        )?))
    }

    /// Rasterize the density onto a grid.
    pub fn rasterize(&self, grid: &Arc<PhaseGrid>, cfg: &SimConfig) -> Result<GridField> {
        let s = *self;
        let cfg = *cfg;
        rasterize_real(move |q, p| density(&s, q, p, &cfg), grid)
    }
}

/// Coherent state: var_q = var_p = ħ/2.
pub fn coherent(q0: f64, p0: f64, cfg: &SimConfig) -> GaussianState {
    GaussianState {
        q0,
        p0,
        var_q: cfg.hbar / 2.0,
        var_p: cfg.hbar / 2.0,
    }
}

/// Ideal squeezed state: var_q = ħγ⁻¹/2, var_p = ħγ/2.
pub fn squeezed(q0: f64, p0: f64, gamma: f64, cfg: &SimConfig) -> Result<GaussianState> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!(
            "squeezing parameter must be positive, got {gamma}"
        )));
    }
    Ok(GaussianState {
        q0,
        p0,
        var_q: cfg.hbar / (2.0 * gamma),
        var_p: cfg.hbar * gamma / 2.0,
    })
}

/// Coherent state of the quartic system, width w: var_q = ħw/2, var_p = ħ/(2w).
pub fn quartic_coherent(q0: f64, p0: f64, w: f64, cfg: &SimConfig) -> Result<GaussianState> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::Domain(format!("width must be positive, got {w}")));
    }
    Ok(GaussianState {
        q0,
        p0,
        var_q: cfg.hbar * w / 2.0,
        var_p: cfg.hbar / (2.0 * w),
    })
}

/// Density value, normalized so ∫ρ dl = 1; pure states peak at 2.
pub fn density(s: &GaussianState, q: f64, p: f64, cfg: &SimConfig) -> f64 {
    let dq = q - s.q0;
    let dp = p - s.p0;
    let peak = cfg.hbar / (s.var_q * s.var_p).sqrt();
    peak * (-dq * dq / (2.0 * s.var_q)).exp() * (-dp * dp / (2.0 * s.var_p)).exp()
}
