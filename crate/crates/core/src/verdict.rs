//! Three-valued detector outcomes shared by the Curie, Kabir and Wigner
//! detectors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::C64;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Violation,
    NoConclusion,
}

/// Why a detector drew no conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    /// The hypotheses of the principle are not met by the inputs.
    PremiseUnmet,
    /// Hypotheses met, but the decisive quantity is zero within `tau_zero`.
    BelowThreshold,
    /// The decisive quantity sits between `tau_zero` and `tau_violation`.
    Indeterminate,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::PremiseUnmet => "premise-unmet",
            Reason::BelowThreshold => "below-threshold",
            Reason::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Real(f64),
    Complex([f64; 2]),
}

impl From<f64> for Quantity {
    fn from(x: f64) -> Self {
        Quantity::Real(x)
    }
}

impl From<C64> for Quantity {
    fn from(z: C64) -> Self {
        Quantity::Complex([z.re, z.im])
    }
}

/// Evidence attached to a verdict: a short note plus the numbers behind it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    pub note: String,
    pub values: BTreeMap<String, Quantity>,
}

impl Witness {
    pub fn new(note: impl Into<String>) -> Self {
        Self {
            note: note.into(),
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Quantity>) -> Self {
        self.values.insert(key.to_string(), value.into());
        self
    }

    pub fn is_empty(&self) -> bool {
        self.note.is_empty() && self.values.is_empty()
    }

    pub fn real(&self, key: &str) -> Option<f64> {
        match self.values.get(key)? {
            Quantity::Real(x) => Some(*x),
            Quantity::Complex(_) => None,
        }
    }

    pub fn complex(&self, key: &str) -> Option<C64> {
        match self.values.get(key)? {
            Quantity::Complex([re, im]) => Some(C64::new(*re, *im)),
            Quantity::Real(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub outcome: Outcome,
    pub symmetry: String,
    pub margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<Reason>,
    pub witness: Witness,
}

impl Verdict {
    pub fn violation(symmetry: impl Into<String>, margin: f64, witness: Witness) -> Self {
        debug_assert!(!witness.is_empty());
        Self {
            outcome: Outcome::Violation,
            symmetry: symmetry.into(),
            margin,
            reason: None,
            witness,
        }
    }

    pub fn no_conclusion(symmetry: impl Into<String>, reason: Reason, margin: f64, witness: Witness) -> Self {
        Self {
            outcome: Outcome::NoConclusion,
            symmetry: symmetry.into(),
            margin,
            reason: Some(reason),
            witness,
        }
    }

    /// Violation when `margin > tau_violation`; otherwise no conclusion with
    /// `BelowThreshold` (margin ≤ `tau_zero`) or `Indeterminate`.
    pub fn from_margin(symmetry: impl Into<String>, margin: f64, witness: Witness, tol: &Tolerances) -> Self {
        match classify(margin, tol) {
            None => Self::violation(symmetry, margin, witness),
            Some(reason) => Self::no_conclusion(symmetry, reason, margin, witness),
        }
    }

    pub fn is_violation(&self) -> bool {
        self.outcome == Outcome::Violation
    }
}

/// `None` means the margin is large enough to report a violation.
pub fn classify(margin: f64, tol: &Tolerances) -> Option<Reason> {
    if margin > tol.tau_violation {
        None
    } else if margin <= tol.tau_zero {
        Some(Reason::BelowThreshold)
    } else {
        Some(Reason::Indeterminate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hysteresis_band() {
        let tol = Tolerances::default();
        assert_eq!(classify(2e-6, &tol), None);
        assert_eq!(classify(1e-6, &tol), Some(Reason::Indeterminate));
        assert_eq!(classify(1e-8, &tol), Some(Reason::Indeterminate));
        assert_eq!(classify(1e-9, &tol), Some(Reason::BelowThreshold));
        assert_eq!(classify(0.0, &tol), Some(Reason::BelowThreshold));
    }

    #[test]
    fn reason_codes_serialize_kebab() {
        let s = serde_json::to_string(&Reason::PremiseUnmet).unwrap();
        assert_eq!(s, "\"premise-unmet\"");
        assert_eq!(Reason::BelowThreshold.as_str(), "below-threshold");
    }
}
