//! Forward versus time-reversed amplitudes on a unitary S-matrix.
//!
//! If `T S T⁻¹ = S⁻¹` and `S` is unitary then
//! `⟨ψout, S ψin⟩ = ⟨Tψin, S Tψout⟩` for every pair of states, so any
//! difference between the two amplitudes witnesses T violation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector, C64};
use crate::symmetry::SymmetryTransform;
use crate::tolerance::Tolerances;
use crate::verdict::{Verdict, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudePair {
    /// `⟨ψout, S ψin⟩`
    pub forward: C64,
    /// `⟨Tψin, S Tψout⟩`
    pub reversed: C64,
    pub asymmetry: f64,
}

pub fn amplitude_pair(
    s: &ComplexMatrix,
    t_op: &SymmetryTransform,
    psi_in: &StateVector,
    psi_out: &StateVector,
) -> Result<AmplitudePair> {
    s.require_dim(t_op.dim())?;
    psi_in.require_dim(t_op.dim())?;
    psi_out.require_dim(t_op.dim())?;
    let forward = psi_out.inner(&s.apply(psi_in)?);
    let reversed = t_op.apply(psi_in)?.inner(&s.apply(&t_op.apply(psi_out)?)?);
    Ok(AmplitudePair {
        forward,
        reversed,
        asymmetry: (forward - reversed).norm(),
    })
}

pub fn kabir_check(
    s: &ComplexMatrix,
    t_op: &SymmetryTransform,
    psi_in: &StateVector,
    psi_out: &StateVector,
    tol: &Tolerances,
) -> Result<Verdict> {
    t_op.require_antilinear("Kabir check")?;
    s.require_dim(t_op.dim())?;
    let deviation = s.unitary_deviation();
    if deviation > tol.tau_zero {
        return Err(Error::Premise(format!(
            "the amplitude comparison is only valid for unitary dynamics (‖S†S − I‖_F = {deviation:.3e})"
        )));
    }
    let pair = amplitude_pair(s, t_op, psi_in, psi_out)?;
    let witness = Witness::new("forward and time-reversed amplitudes")
        .with("forward", pair.forward)
        .with("reversed", pair.reversed);
    Ok(Verdict::from_margin(
        format!("{} on S", t_op.label),
        pair.asymmetry,
        witness,
        tol,
    ))
}

/// `|⟨ψout, M ψin⟩|²`
pub fn transition_probability(m: &ComplexMatrix, psi_in: &StateVector, psi_out: &StateVector) -> Result<f64> {
    psi_out.require_dim(m.dim())?;
    Ok(psi_out.inner(&m.apply(psi_in)?).norm_sqr())
}

/// `|P(a → b) − P(b → a)|`
///
/// For any 2×2 unitary this vanishes between the two basis states, since
/// unitarity forces `|M₁₂| = |M₂₁|`; a probability-level asymmetry needs at
/// least three levels.
pub fn probability_asymmetry(m: &ComplexMatrix, a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok((transition_probability(m, a, b)? - transition_probability(m, b, a)?).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{evolution, mat_exp, pauli, random_real_symmetric, random_unitary, I, ONE, ZERO};
    use crate::verdict::Reason;
    use std::f64::consts::FRAC_PI_4;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn swap_with_phase_violates() {
        let s = ComplexMatrix::from_rows(&[[ZERO, I], [ONE, ZERO]]).unwrap();
        let k = SymmetryTransform::conjugation(2);
        let e1 = StateVector::basis(2, 0);
        let e2 = StateVector::basis(2, 1);
        let pair = amplitude_pair(&s, &k, &e1, &e2).unwrap();
        assert_eq!(pair.forward, ONE);
        assert_eq!(pair.reversed, I);
        let v = kabir_check(&s, &k, &e1, &e2, &tol()).unwrap();
        assert!(v.is_violation());
        assert!((v.margin - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(v.symmetry, "K on S");
        assert!((&s.conj() - &s.adjoint()).frobenius_norm() > 1e-6);
    }

    #[test]
    fn real_symmetric_generator_is_invariant() {
        let g = random_real_symmetric(4, 3).unwrap();
        let s = mat_exp(&g, C64::new(0.0, -1.0));
        let k = SymmetryTransform::conjugation(4);
        for i in 0..4 {
            for j in 0..4 {
                let v = kabir_check(&s, &k, &StateVector::basis(4, i), &StateVector::basis(4, j), &tol()).unwrap();
                assert!(v.margin <= 1e-12);
                assert_eq!(v.reason, Some(Reason::BelowThreshold));
            }
        }
    }

    #[test]
    fn same_real_state_is_symmetric() {
        let s = random_unitary(3, 8).unwrap();
        let psi = StateVector::from_real(&[0.6, 0.0, 0.8]).unwrap();
        let k = SymmetryTransform::conjugation(3);
        let pair = amplitude_pair(&s, &k, &psi, &psi).unwrap();
        assert_eq!(pair.forward, pair.reversed);
    }

    #[test]
    fn rejects_non_unitary_and_linear() {
        let k = SymmetryTransform::conjugation(2);
        let e = StateVector::basis(2, 0);
        let err = kabir_check(&ComplexMatrix::diag(&[1.0, 0.9]), &k, &e, &e, &tol());
        assert!(matches!(err, Err(Error::Premise(_))));
        let lin = SymmetryTransform::identity(2);
        let err = kabir_check(&ComplexMatrix::identity(2), &lin, &e, &e, &tol());
        assert!(matches!(err, Err(Error::Misuse(_))));
    }

    #[test]
    fn transition_probabilities() {
        let e1 = StateVector::basis(2, 0);
        let e2 = StateVector::basis(2, 1);
        let id = ComplexMatrix::identity(2);
        assert_eq!(transition_probability(&id, &e1, &e1).unwrap(), 1.0);
        assert_eq!(transition_probability(&id, &e1, &e2).unwrap(), 0.0);
        let u = evolution(&pauli::x(), FRAC_PI_4);
        assert!((transition_probability(&u, &e1, &e2).unwrap() - 0.5).abs() < 1e-15);
        let err = transition_probability(&id, &e1, &StateVector::basis(3, 0));
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn two_level_asymmetry_vanishes() {
        let e1 = StateVector::basis(2, 0);
        let e2 = StateVector::basis(2, 1);
        for seed in 0..20 {
            let u = random_unitary(2, seed).unwrap();
            assert!(probability_asymmetry(&u, &e1, &e2).unwrap() <= 1e-12);
        }
        assert_eq!(
            probability_asymmetry(&ComplexMatrix::identity(2), &e1, &e2).unwrap(),
            0.0
        );
    }

    #[test]
    fn open_chain_generator_has_no_asymmetry() {
        // A chain coupling is gauge-equivalent to a real one, so |S₁₂| = |S₂₁|.
        let c = |re: f64, im: f64| C64::new(re, im);
        let g = ComplexMatrix::from_rows(&[
            [c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)],
            [c(0.0, -1.0), c(0.0, 0.0), c(1.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let s = mat_exp(&g, c(0.0, -1.0));
        let a = probability_asymmetry(&s, &StateVector::basis(3, 0), &StateVector::basis(3, 1)).unwrap();
        assert!(a < 1e-12, "{a:e}");
    }

    #[test]
    fn triangle_generator_asymmetry_matches_reference() {
        // Reference value from a 40-digit evaluation of e^{−iG}.
        let c = |re: f64, im: f64| C64::new(re, im);
        let g = ComplexMatrix::from_rows(&[
            [c(0.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)],
            [c(0.0, -1.0), c(0.0, 0.0), c(1.0, 0.0)],
            [c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let s = mat_exp(&g, c(0.0, -1.0));
        let e1 = StateVector::basis(3, 0);
        let e2 = StateVector::basis(3, 1);
        let forward = transition_probability(&s, &e1, &e2).unwrap();
        let backward = transition_probability(&s, &e2, &e1).unwrap();
        assert!((forward - 0.915_298_384_229_526_5).abs() < 1e-12);
        assert!((backward - 0.033_491_898_657_408_82).abs() < 1e-12);
        let a = probability_asymmetry(&s, &e1, &e2).unwrap();
        assert!((a - 0.881_806_485_572_117_7).abs() < 1e-12, "{a}");
    }
}
