//! Curie-style detectors: an asymmetry in states that a symmetric law could
//! not produce.
//!
//! Both detectors accept linear symmetries only. For antilinear symmetries
//! the principle is false (a T-invariant law happily evolves a T-fixed state
//! into one that is not), so those are rejected with [`Error::Misuse`].

use crate::error::Result;
use crate::linalg::{evolution, ComplexMatrix, StateVector};
use crate::symmetry::{InvarianceMargin, SymmetryTransform};
use crate::tolerance::Tolerances;
use crate::verdict::{classify, Reason, Verdict, Witness};

/// Evolves `psi_i` for time `t` under `H` and looks for a state that is
/// `R`-symmetric at one end of the evolution but not at the other.
pub fn unitary_curie_check(
    h: &ComplexMatrix,
    r: &SymmetryTransform,
    psi_i: &StateVector,
    t: f64,
    tol: &Tolerances,
) -> Result<Verdict> {
    r.require_linear("unitary Curie check")?;
    h.require_dim(r.dim())?;
    psi_i.require_dim(r.dim())?;
    h.require_hermitian("Hamiltonian", tol.tau_zero)?;
    psi_i.require_normalized("initial state", tol.tau_zero)?;

    let psi_f = evolution(h, t).apply(psi_i)?;
    let dev_initial = r.apply(psi_i)?.sub(psi_i).norm();
    let dev_final = r.apply(&psi_f)?.sub(&psi_f).norm();

    let (branch, offending) = if dev_initial <= tol.tau_zero {
        ("initial-but-not-final", dev_final)
    } else if dev_final <= tol.tau_zero {
        ("final-but-not-initial", dev_initial)
    } else {
        ("neither end symmetric", 0.0)
    };
    let witness = Witness::new(branch)
        .with("t", t)
        .with("deviation_initial", dev_initial)
        .with("deviation_final", dev_final);

    if offending <= tol.tau_zero {
        // Either no end is symmetric, or both are.
        let witness = if dev_initial <= tol.tau_zero && dev_final <= tol.tau_zero {
            Witness {
                note: "both ends symmetric".into(),
                ..witness
            }
        } else {
            witness
        };
        return Ok(Verdict::no_conclusion(
            &r.label,
            Reason::PremiseUnmet,
            offending,
            witness,
        ));
    }
    Ok(match classify(offending, tol) {
        None => Verdict::violation(&r.label, offending, witness),
        Some(reason) => Verdict::no_conclusion(&r.label, reason, offending, witness),
    })
}

/// Looks for an `R`-even in-state scattering into an `R`-odd out-state (or the
/// reverse), which an `R`-commuting S-matrix forbids.
pub fn scattering_curie_check(
    s: &ComplexMatrix,
    r: &SymmetryTransform,
    psi_in: &StateVector,
    psi_out: &StateVector,
    tol: &Tolerances,
) -> Result<Verdict> {
    r.require_linear("scattering Curie check")?;
    s.require_dim(r.dim())?;
    psi_in.require_dim(r.dim())?;
    psi_out.require_dim(r.dim())?;
    s.require_unitary("S-matrix", tol.tau_zero)?;

    let r_in = r.apply(psi_in)?;
    let r_out = r.apply(psi_out)?;
    let in_even = r_in.sub(psi_in).norm() <= tol.tau_zero;
    let in_odd = r_in.add(psi_in).norm() <= tol.tau_zero;
    let out_even = r_out.sub(psi_out).norm() <= tol.tau_zero;
    let out_odd = r_out.add(psi_out).norm() <= tol.tau_zero;

    let amplitude = psi_out.inner(&s.apply(psi_in)?);
    let magnitude = amplitude.norm();
    let branch = match (in_even && out_odd, in_odd && out_even) {
        (true, _) => "in-but-not-out",
        (_, true) => "out-but-not-in",
        _ => {
            let witness =
                Witness::new("in/out states are not opposite-parity eigenstates").with("amplitude", amplitude);
            return Ok(Verdict::no_conclusion(
                &r.label,
                Reason::PremiseUnmet,
                magnitude,
                witness,
            ));
        }
    };
    let witness = Witness::new(branch).with("amplitude", amplitude);
    Ok(Verdict::from_margin(&r.label, magnitude, witness, tol))
}

/// `[R, S] ≠ 0` with `[R, H₀] = 0` means the interaction itself breaks `R`.
pub fn s_matrix_inference(
    label: &str,
    r_h0_margin: InvarianceMargin,
    r_s_margin: InvarianceMargin,
    tol: &Tolerances,
) -> Verdict {
    let symmetry = format!("{label} on H");
    let witness = Witness::new("R commutes with the free Hamiltonian but not with S")
        .with("free_margin", r_h0_margin.value)
        .with("smatrix_margin", r_s_margin.value);
    if r_h0_margin.value > tol.tau_zero {
        let witness = Witness {
            note: "R does not commute with H0".into(),
            ..witness
        };
        return Verdict::no_conclusion(symmetry, Reason::PremiseUnmet, r_s_margin.value, witness);
    }
    match classify(r_s_margin.value, tol) {
        None => Verdict::violation(symmetry, r_s_margin.value, witness),
        Some(reason) => {
            let witness = Witness {
                note: "R commutes with S".into(),
                ..witness
            };
            Verdict::no_conclusion(symmetry, reason, r_s_margin.value, witness)
        }
    }
}
