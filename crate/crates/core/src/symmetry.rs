//! Unitary and antiunitary transformations.
//!
//! An antiunitary `g` is stored as `U∘K`, where `K` conjugates components in
//! the computational basis. With that representation composition and the
//! adjoint action `A ↦ gAg⁻¹` have closed forms.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{evolution, ComplexMatrix, StateVector};
use crate::tolerance::{Tolerances, TAU_ZERO};
use crate::verdict::{Reason, Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetryTransform {
    pub label: String,
    pub unitary_part: ComplexMatrix,
    pub antilinear: bool,
}

impl SymmetryTransform {
    pub fn new(label: impl Into<String>, unitary_part: ComplexMatrix, antilinear: bool) -> Result<Self> {
        let label = label.into();
        unitary_part.require_unitary(&format!("unitary part of {label}"), TAU_ZERO)?;
        Ok(Self {
            label,
            unitary_part,
            antilinear,
        })
    }

    pub fn linear(label: impl Into<String>, unitary_part: ComplexMatrix) -> Result<Self> {
        Self::new(label, unitary_part, false)
    }

    pub fn antiunitary(label: impl Into<String>, unitary_part: ComplexMatrix) -> Result<Self> {
        Self::new(label, unitary_part, true)
    }

    /// Bare complex conjugation `K`.
    pub fn conjugation(dim: usize) -> Self {
        Self {
            label: "K".into(),
            unitary_part: ComplexMatrix::identity(dim),
            antilinear: true,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            label: "I".into(),
            unitary_part: ComplexMatrix::identity(dim),
            antilinear: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.unitary_part.dim()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn require_antilinear(&self, context: &str) -> Result<()> {
        if self.antilinear {
            Ok(())
        } else {
            Err(Error::Misuse(format!(
                "{context} needs an antilinear transformation, {} is linear",
                self.label
            )))
        }
    }

    pub fn require_linear(&self, context: &str) -> Result<()> {
        if self.antilinear {
            Err(Error::Misuse(format!(
                "{context} needs a linear transformation, {} is antilinear",
                self.label
            )))
        } else {
            Ok(())
        }
    }

    /// `Uψ`, or `U·conj(ψ)` when antilinear.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if self.antilinear {
            self.unitary_part.apply(&psi.conj())
        } else {
            self.unitary_part.apply(psi)
        }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Result<Self> {
        other.unitary_part.require_dim(self.dim())?;
        let right = if self.antilinear {
            other.unitary_part.conj()
        } else {
            other.unitary_part.clone()
        };
        // (U_g K^a)(U_h K^b) = U_g conj^a(U_h) K^{a⊕b}
        Ok(Self {
            label: format!("{}{}", self.label, other.label),
            unitary_part: &self.unitary_part * &right,
            antilinear: self.antilinear ^ other.antilinear,
        })
    }

    /// `g A g⁻¹` as a linear operator: `U A U†`, or `U conj(A) U†`.
    pub fn conjugate_operator(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        a.require_dim(self.dim())?;
        let u = &self.unitary_part;
        let inner = if self.antilinear { a.conj() } else { a.clone() };
        Ok(&(u * &inner) * &u.adjoint())
    }

    /// Unitary part of `g²`.
    pub fn square(&self) -> ComplexMatrix {
        if self.antilinear {
            &self.unitary_part * &self.unitary_part.conj()
        } else {
            &self.unitary_part * &self.unitary_part
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonKind {
    /// `‖gAg⁻¹ − A‖_F / max(1, ‖A‖_F)`
    Commutant,
    /// `‖T e^{−itH} T⁻¹ − e^{itH}‖_F / max(1, dim)`
    TimeReversalUnitary,
    /// `‖T S T⁻¹ − S⁻¹‖_F / max(1, dim)`
    TimeReversalSmatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceMargin {
    pub value: f64,
    pub kind: ComparisonKind,
}

impl InvarianceMargin {
    pub fn holds(&self, tol: &Tolerances) -> bool {
        self.value <= tol.tau_zero
    }
}

pub fn invariance_margin(g: &SymmetryTransform, a: &ComplexMatrix) -> Result<InvarianceMargin> {
    let moved = g.conjugate_operator(a)?;
    Ok(InvarianceMargin {
        value: (&moved - a).frobenius_norm() / a.frobenius_norm().max(1.0),
        kind: ComparisonKind::Commutant,
    })
}

/// Compares `T e^{−itH} T⁻¹` against `e^{+itH}`; zero exactly when the
/// evolution is consistent with `[T, H] = 0` at time `t`.
pub fn time_reversal_consistency(
    t_op: &SymmetryTransform,
    h: &ComplexMatrix,
    t: f64,
    tol: &Tolerances,
) -> Result<InvarianceMargin> {
    t_op.require_antilinear("time_reversal_consistency")?;
    h.require_dim(t_op.dim())?;
    h.require_hermitian("Hamiltonian", tol.tau_zero)?;
    let forward = evolution(h, t);
    let reversed = t_op.conjugate_operator(&forward)?;
    let backward = evolution(h, -t);
    Ok(InvarianceMargin {
        value: (&reversed - &backward).frobenius_norm() / (h.dim() as f64).max(1.0),
        kind: ComparisonKind::TimeReversalUnitary,
    })
}

/// `‖T S T⁻¹ − S⁻¹‖_F / max(1, dim)`, with `S⁻¹ = S†` for unitary `S`.
pub fn smatrix_reversal_margin(
    t_op: &SymmetryTransform,
    s: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<InvarianceMargin> {
    t_op.require_antilinear("smatrix_reversal_margin")?;
    s.require_dim(t_op.dim())?;
    s.require_unitary("S-matrix", tol.tau_zero)?;
    let reversed = t_op.conjugate_operator(s)?;
    Ok(InvarianceMargin {
        value: (&reversed - &s.adjoint()).frobenius_norm() / (s.dim() as f64).max(1.0),
        kind: ComparisonKind::TimeReversalSmatrix,
    })
}

/// If CPT holds but CP fails, T must fail.
pub fn cpt_link_inference(cpt_margin: InvarianceMargin, cp_margin: InvarianceMargin, tol: &Tolerances) -> Verdict {
    let witness = Witness::new("CPT invariance with CP violation forces T violation")
        .with("cpt_margin", cpt_margin.value)
        .with("cp_margin", cp_margin.value);
    if cpt_margin.value > tol.tau_zero {
        let witness = Witness {
            note: "CPT not invariant".into(),
            ..witness
        };
        return Verdict::no_conclusion("T", Reason::PremiseUnmet, cp_margin.value, witness);
    }
    if cp_margin.value <= tol.tau_violation {
        let reason = if cp_margin.value <= tol.tau_zero {
            Reason::BelowThreshold
        } else {
            Reason::Indeterminate
        };
        let witness = Witness {
            note: "CP not violated".into(),
            ..witness
        };
        return Verdict::no_conclusion("T", reason, cp_margin.value, witness);
    }
    Verdict::violation("T", cp_margin.value, witness)
}

/// Checks `invariance_margin(T, H) ≈ 0 ⟺ time_reversal_consistency(T, H, t) ≈ 0`
/// over `samples` random times in `[−5, 5]`. Returns whether the two agree.
pub fn margins_agree(
    t_op: &SymmetryTransform,
    h: &ComplexMatrix,
    samples: usize,
    rng: &mut impl Rng,
    tol: &Tolerances,
) -> Result<bool> {
    let static_holds = invariance_margin(t_op, h)?.holds(tol);
    let mut all_hold = true;
    for _ in 0..samples {
        let t = rng.random_range(-5.0..=5.0);
        all_hold &= time_reversal_consistency(t_op, h, t, tol)?.holds(tol);
    }
    Ok(static_holds == all_hold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli, C64, I};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn spin_half_t() -> SymmetryTransform {
        SymmetryTransform::antiunitary("T", pauli::i_y()).unwrap()
    }

    #[test]
    fn apply_identity() {
        let psi = StateVector::new(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        assert_eq!(SymmetryTransform::identity(2).apply(&psi).unwrap(), psi);
    }

    #[test]
    fn apply_conjugation() {
        let s = FRAC_1_SQRT_2;
        let psi = StateVector::new(vec![C64::new(s, 0.0), C64::new(0.0, s)]).unwrap();
        let out = SymmetryTransform::conjugation(2).apply(&psi).unwrap();
        assert_eq!(out.amplitudes(), &[C64::new(s, 0.0), C64::new(0.0, -s)]);
    }

    #[test]
    fn apply_spin_half_t_to_up() {
        let out = spin_half_t().apply(&StateVector::basis(2, 0)).unwrap();
        assert_eq!(out, StateVector::basis(2, 1).scale(C64::new(-1.0, 0.0)));
    }

    #[test]
    fn apply_dimension_mismatch() {
        let err = spin_half_t().apply(&StateVector::basis(3, 0));
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn compose_examples() {
        let k = SymmetryTransform::conjugation(2);
        let kk = k.compose(&k).unwrap();
        assert!(!kk.antilinear);
        assert_eq!(kk.unitary_part, ComplexMatrix::identity(2));

        let t = spin_half_t();
        let tt = t.compose(&t).unwrap();
        assert!(!tt.antilinear);
        assert_eq!(tt.unitary_part, ComplexMatrix::identity(2).scale_real(-1.0));

        let u = SymmetryTransform::linear("U", pauli::x()).unwrap();
        let ui = u.compose(&SymmetryTransform::identity(2)).unwrap();
        assert!(!ui.antilinear);
        assert_eq!(ui.unitary_part, pauli::x());
    }

    #[test]
    fn conjugate_operator_examples() {
        let k = SymmetryTransform::conjugation(2);
        let real = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [2.0, -3.0]]).unwrap();
        assert_eq!(k.conjugate_operator(&real).unwrap(), real);
        assert_eq!(k.conjugate_operator(&pauli::y()).unwrap(), -&pauli::y());
        let z = SymmetryTransform::linear("Z", pauli::z()).unwrap();
        assert_eq!(z.conjugate_operator(&pauli::x()).unwrap(), -&pauli::x());
    }

    #[test]
    fn invariance_margin_examples() {
        let z = SymmetryTransform::linear("Z", pauli::z()).unwrap();
        assert_eq!(invariance_margin(&z, &pauli::z()).unwrap().value, 0.0);
        let k = SymmetryTransform::conjugation(2);
        let real = ComplexMatrix::from_real_rows(&[[1.0, 0.5], [0.5, 2.0]]).unwrap();
        assert_eq!(invariance_margin(&k, &real).unwrap().value, 0.0);
        let m = invariance_margin(&spin_half_t(), &pauli::z()).unwrap();
        assert!((m.value - 2.0).abs() < 1e-15);
        assert_eq!(m.kind, ComparisonKind::Commutant);
    }

    #[test]
    fn time_reversal_consistency_examples() {
        let tol = Tolerances::default();
        let k = SymmetryTransform::conjugation(2);
        let real = ComplexMatrix::from_real_rows(&[[0.3, -1.2], [-1.2, 0.7]]).unwrap();
        assert!(time_reversal_consistency(&k, &real, 1.0, &tol).unwrap().value < 1e-14);
        let h = crate::linalg::random_hermitian(3, 1).unwrap();
        let t3 = SymmetryTransform::conjugation(3);
        assert_eq!(time_reversal_consistency(&t3, &h, 0.0, &tol).unwrap().value, 0.0);
        // conj(e^{−iσy}) = e^{−iσy} ≠ e^{+iσy}: ‖2 sin(1) iσy‖_F / 2 = √2·sin(1)
        let v = time_reversal_consistency(&k, &pauli::y(), 1.0, &tol).unwrap().value;
        assert!((v - 2f64.sqrt() * 1f64.sin()).abs() < 1e-12, "{v}");
    }

    #[test]
    fn time_reversal_consistency_rejects_linear() {
        let z = SymmetryTransform::linear("Z", pauli::z()).unwrap();
        let err = time_reversal_consistency(&z, &pauli::z(), 1.0, &Tolerances::default());
        assert!(matches!(err, Err(Error::Misuse(_))));
    }

    #[test]
    fn cpt_link_gates() {
        let tol = Tolerances::default();
        let m = |value| InvarianceMargin {
            value,
            kind: ComparisonKind::Commutant,
        };
        let v = cpt_link_inference(m(0.0), m(2.0), &tol);
        assert!(v.is_violation());
        assert_eq!(v.symmetry, "T");
        let v = cpt_link_inference(m(0.5), m(2.0), &tol);
        assert_eq!(v.reason, Some(Reason::PremiseUnmet));
        assert_eq!(v.witness.note, "CPT not invariant");
        let v = cpt_link_inference(m(0.0), m(0.0), &tol);
        assert_eq!(v.reason, Some(Reason::BelowThreshold));
        assert_eq!(v.witness.note, "CP not violated");
    }

    #[test]
    fn cpt_link_toy() {
        let tol = Tolerances::default();
        let h = ComplexMatrix::from_rows(&[[C64::new(1.0, 0.0), I], [-I, C64::new(1.0, 0.0)]]).unwrap();
        let cpt = SymmetryTransform::antiunitary("CPT", pauli::x()).unwrap();
        let cp = SymmetryTransform::linear("CP", pauli::x()).unwrap();
        let cpt_m = invariance_margin(&cpt, &h).unwrap();
        let cp_m = invariance_margin(&cp, &h).unwrap();
        assert!(cpt_m.value < 1e-15);
        assert!(cp_m.value > tol.tau_violation);
        assert!(cpt_link_inference(cpt_m, cp_m, &tol).is_violation());
        let k_m = invariance_margin(&SymmetryTransform::conjugation(2), &h).unwrap();
        assert!(k_m.value > tol.tau_violation);
    }

    #[test]
    fn non_unitary_rejected() {
        let err = SymmetryTransform::linear("R", ComplexMatrix::diag(&[1.0, 2.0]));
        assert!(matches!(err, Err(Error::Classification { .. })));
    }
}
