//! Degeneracy, Kramers pairs and the non-degenerate-ray detector.
//!
//! Exact multiplicity has no floating-point meaning, so eigenvalues are
//! grouped by a relative gap tolerance. A level counts as cleanly
//! non-degenerate only when its neighbours sit a further
//! `tau_violation / tau_zero` factor beyond that gap; levels inside the
//! band never produce a violation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig_with, ComplexMatrix, EigenDecomposition, StateVector};
use crate::symmetry::{invariance_margin, SymmetryTransform};
use crate::tolerance::Tolerances;
use crate::verdict::{Reason, Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumClusters {
    pub clusters: Vec<Cluster>,
    /// Absolute gap used for grouping: `gap_tol · max(1, spectral range)`.
    pub gap: f64,
}

impl SpectrumClusters {
    pub fn total_multiplicity(&self) -> usize {
        self.clusters.iter().map(|c| c.multiplicity).sum()
    }

    /// Smallest distance from cluster `k` to a neighbouring cluster.
    pub fn isolation(&self, k: usize) -> f64 {
        let v = self.clusters[k].value;
        let left = k.checked_sub(1).map(|j| v - self.clusters[j].value);
        let right = self.clusters.get(k + 1).map(|c| c.value - v);
        match (left, right) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => f64::INFINITY,
        }
    }
}

/// Greedy ascending clustering: neighbours join when their gap is at most
/// `gap_tol · max(1, λ_max − λ_min)`.
pub fn spectrum_clusters(eig: &EigenDecomposition, gap_tol: f64) -> SpectrumClusters {
    let values = &eig.eigenvalues;
    let n = values.len();
    let range = if n > 0 { values[n - 1] - values[0] } else { 0.0 };
    let gap = gap_tol * range.max(1.0);
    let mut clusters: Vec<Cluster> = Vec::new();
    for (k, &v) in values.iter().enumerate() {
        let joins = k > 0 && v - values[k - 1] <= gap;
        match clusters.last_mut() {
            Some(c) if joins => c.members.push(k),
            _ => clusters.push(Cluster {
                value: v,
                multiplicity: 0,
                members: vec![k],
            }),
        }
    }
    for c in &mut clusters {
        c.multiplicity = c.members.len();
        c.value = c.members.iter().map(|&k| values[k]).sum::<f64>() / c.multiplicity as f64;
    }
    SpectrumClusters { clusters, gap }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TSquare {
    PlusIdentity,
    MinusIdentity,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TSquareClass {
    pub classification: TSquare,
    /// Distance (Frobenius) of `T²` to `±I`, whichever is closer.
    pub deviation: f64,
}

pub fn kramers_square(t_op: &SymmetryTransform, tol: &Tolerances) -> Result<TSquareClass> {
    t_op.require_antilinear("kramers_square")?;
    Ok(square_class(&t_op.square(), tol.tau_zero))
}

pub(crate) fn square_class(square: &ComplexMatrix, tau_zero: f64) -> TSquareClass {
    let id = ComplexMatrix::identity(square.dim());
    let plus = (square - &id).frobenius_norm();
    let minus = (square + &id).frobenius_norm();
    let classification = if plus <= tau_zero {
        TSquare::PlusIdentity
    } else if minus <= tau_zero {
        TSquare::MinusIdentity
    } else {
        TSquare::Other
    };
    TSquareClass {
        classification,
        deviation: plus.min(minus),
    }
}

/// `1 − |⟨Tψ, ψ⟩|`: zero exactly when `Tψ` lies on the ray of `ψ`.
pub fn ray_displacement(t_op: &SymmetryTransform, psi: &StateVector, tol: &Tolerances) -> Result<f64> {
    t_op.require_antilinear("ray_displacement")?;
    psi.require_dim(t_op.dim())?;
    psi.require_normalized("state", tol.tau_zero)?;
    let overlap = t_op.apply(psi)?.inner(psi).norm();
    Ok((1.0 - overlap).clamp(0.0, 1.0))
}

fn require_nonzero(h: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    if h.frobenius_norm() <= tol.tau_zero {
        Err(Error::Premise("the Hamiltonian must not be the zero operator".into()))
    } else {
        Ok(())
    }
}

/// Decomposes `h` and clusters its spectrum; shared by both Wigner routines.
fn spectrum(
    h: &ComplexMatrix,
    t_op: &SymmetryTransform,
    gap_tol: f64,
    tol: &Tolerances,
) -> Result<(EigenDecomposition, SpectrumClusters)> {
    t_op.require_antilinear("Wigner analysis")?;
    h.require_dim(t_op.dim())?;
    h.require_hermitian("Hamiltonian", tol.tau_zero)?;
    require_nonzero(h, tol)?;
    let eig = herm_eig_with(h, tol.tau_zero)?;
    let clusters = spectrum_clusters(&eig, gap_tol);
    Ok((eig, clusters))
}

/// A non-degenerate eigenvector whose ray `T` moves proves `[T, H] ≠ 0`.
pub fn wigner_principle_check(
    h: &ComplexMatrix,
    t_op: &SymmetryTransform,
    gap_tol: f64,
    tol: &Tolerances,
) -> Result<Verdict> {
    let (eig, clusters) = spectrum(h, t_op, gap_tol, tol)?;
    let clean_gap = clusters.gap * (tol.tau_violation / tol.tau_zero);
    let label = t_op.label.clone();

    // (eigenvalue, displacement, cleanly isolated)
    let mut singles = Vec::new();
    for (k, c) in clusters.clusters.iter().enumerate() {
        if c.multiplicity == 1 {
            let idx = c.members[0];
            let delta = ray_displacement(t_op, &eig.eigenvectors[idx], tol)?;
            singles.push((eig.eigenvalues[idx], delta, clusters.isolation(k) > clean_gap));
        }
    }
    if singles.is_empty() {
        let witness = Witness::new("no non-degenerate energy level").with("clusters", clusters.clusters.len() as f64);
        return Ok(Verdict::no_conclusion(label, Reason::PremiseUnmet, 0.0, witness));
    }

    let best_clean = singles.iter().filter(|s| s.2).max_by(|a, b| a.1.total_cmp(&b.1));
    if let Some(&(energy, delta, _)) = best_clean {
        if delta > tol.tau_violation {
            let witness = Witness::new("non-degenerate eigenstate mapped to a different ray")
                .with("eigenvalue", energy)
                .with("ray_displacement", delta);
            return Ok(Verdict::violation(label, delta, witness));
        }
    }

    let &(energy, delta, _) = singles.iter().max_by(|a, b| a.1.total_cmp(&b.1)).expect("non-empty");
    let witness = Witness::new("largest displacement among non-degenerate levels")
        .with("eigenvalue", energy)
        .with("ray_displacement", delta);
    let reason = if delta <= tol.tau_zero {
        Reason::BelowThreshold
    } else {
        Reason::Indeterminate
    };
    Ok(Verdict::no_conclusion(label, reason, delta, witness))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KramersStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterParity {
    pub value: f64,
    pub multiplicity: usize,
    pub even: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KramersReport {
    pub status: KramersStatus,
    pub t_square: TSquareClass,
    pub invariance_margin: f64,
    pub clusters: Vec<ClusterParity>,
    /// Index into `clusters` of the first odd-multiplicity cluster.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offending: Option<usize>,
    pub note: String,
}

/// With `T² = −I` and `[T, H] = 0` every level must be evenly degenerate.
pub fn kramers_degeneracy_verify(
    h: &ComplexMatrix,
    t_op: &SymmetryTransform,
    gap_tol: f64,
    tol: &Tolerances,
) -> Result<KramersReport> {
    let (_, clusters) = spectrum(h, t_op, gap_tol, tol)?;
    let t_square = kramers_square(t_op, tol)?;
    let margin = invariance_margin(t_op, h)?.value;
    let parities: Vec<ClusterParity> = clusters
        .clusters
        .iter()
        .map(|c| ClusterParity {
            value: c.value,
            multiplicity: c.multiplicity,
            even: c.multiplicity % 2 == 0,
        })
        .collect();

    let (status, offending, note) = if t_square.classification != TSquare::MinusIdentity {
        (KramersStatus::NotApplicable, None, "T² is not −I".to_string())
    } else if margin > tol.tau_zero {
        (KramersStatus::NotApplicable, None, "[T, H] ≠ 0".to_string())
    } else if let Some(k) = parities.iter().position(|p| !p.even) {
        let note = format!(
            "level {:.12e} has odd multiplicity {}",
            parities[k].value, parities[k].multiplicity
        );
        (KramersStatus::Fail, Some(k), note)
    } else {
        (KramersStatus::Pass, None, "every level evenly degenerate".to_string())
    };
    Ok(KramersReport {
        status,
        t_square,
        invariance_margin: margin,
        clusters: parities,
        offending,
        note,
    })
}
