//! Global simulation configuration.

use crate::error::{Error, Result};

/// Deformation parameter and numerical tolerance shared by all operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Deformation parameter (Planck's constant in normalized coordinates).
    pub hbar: f64,
    /// Default tolerance used by normalization and support checks.
    pub default_tolerance: f64,
}

impl SimConfig {
    pub fn new(hbar: f64, default_tolerance: f64) -> Result<Self> {
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
        }
        if !(default_tolerance > 0.0) || !default_tolerance.is_finite() {
            return Err(Error::Domain(format!(
                "tolerance must be positive, got {default_tolerance}"
            )));
        }
        Ok(Self {
            hbar,
            default_tolerance,
        })
    }

    /// ħ = 1, tolerance 1e-10.
    pub fn with_hbar(hbar: f64) -> Result<Self> {
        Self::new(hbar, 1e-10)
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            default_tolerance: 1e-10,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_hbar() {
        assert!(SimConfig::new(0.0, 1e-10).is_err());
        assert!(SimConfig::new(-1.0, 1e-10).is_err());
        assert!(SimConfig::new(f64::NAN, 1e-10).is_err());
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        assert!(SimConfig::new(1.0, 0.0).is_err());
    }
}
