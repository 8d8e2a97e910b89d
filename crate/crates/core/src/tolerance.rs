//! Numerical thresholds shared by every detector.
//!
//! `tau_zero` decides when an equation "holds"; `tau_violation` is the
//! strictly larger margin a detector needs before it reports a violation.
//! Margins falling between the two are reported as indeterminate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TAU_ZERO: f64 = 1e-9;
pub const TAU_VIOLATION: f64 = 1e-6;
pub const TAU_EIG: f64 = 1e-8;
pub const GAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub tau_zero: f64,
    pub tau_violation: f64,
    pub tau_eig: f64,
    pub gap_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tau_zero: TAU_ZERO,
            tau_violation: TAU_VIOLATION,
            tau_eig: TAU_EIG,
            gap_tol: GAP_TOL,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tau_zero", self.tau_zero),
            ("tau_violation", self.tau_violation),
            ("tau_eig", self.tau_eig),
            ("gap_tol", self.gap_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.tau_zero >= self.tau_violation {
            return Err(Error::Config(format!(
                "tau_zero ({:e}) must be smaller than tau_violation ({:e})",
                self.tau_zero, self.tau_violation
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Tolerances::default().validate().unwrap();
    }

    #[test]
    fn inverted_band_is_rejected() {
        let tol = Tolerances {
            tau_violation: 1e-12,
            ..Tolerances::default()
        };
        assert!(matches!(tol.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn non_positive_is_rejected() {
        let tol = Tolerances {
            gap_tol: 0.0,
            ..Tolerances::default()
        };
        assert!(tol.validate().is_err());
    }
}
