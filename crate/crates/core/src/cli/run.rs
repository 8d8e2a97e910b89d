//! Executes scenario requests against the detectors.

use std::fmt::Write as _;

use crate::curie::{s_matrix_inference, scattering_curie_check, unitary_curie_check};
use crate::kabir::{kabir_check, probability_asymmetry};
use crate::linalg::{evolution, ComplexMatrix, StateVector};
use crate::models::build_s_matrix;
use crate::scenario_io::{MatrixName, Record, RecordBody, Request, Scenario, ScenarioError};
use crate::symmetry::{cpt_link_inference, invariance_margin, time_reversal_consistency, SymmetryTransform};
use crate::tolerance::Tolerances;
use crate::verdict::{Outcome, Quantity};
use crate::wigner::{kramers_degeneracy_verify, wigner_principle_check};

/// Borrowed views into a validated scenario.
pub(crate) struct Resolver<'a> {
    pub scenario: &'a Scenario,
}

impl<'a> Resolver<'a> {
    pub fn matrix(&self, name: MatrixName) -> &'a ComplexMatrix {
        self.scenario
            .matrices
            .get(name)
            .expect("matrix references are checked at parse time")
    }

    pub fn matrix_or(&self, name: Option<MatrixName>, default: MatrixName) -> &'a ComplexMatrix {
        self.matrix(name.unwrap_or(default))
    }

    pub fn symmetry(&self, label: &str) -> &'a SymmetryTransform {
        self.scenario
            .symmetry(label)
            .expect("symmetry references are checked at parse time")
    }

    pub fn state(&self, name: &str) -> &'a StateVector {
        &self.scenario.states[name]
    }
}

/// Runs every request in order. The first detector error aborts the run and
/// is reported against the offending request.
pub fn run_requests(scenario: &Scenario, tol: &Tolerances) -> Result<Vec<Record>, ScenarioError> {
    let r = Resolver { scenario };
    scenario
        .requests
        .iter()
        .enumerate()
        .map(|(index, req)| {
            let result = run_one(&r, req, tol).map_err(|e| ScenarioError {
                path: format!("requests[{index}]"),
                message: format!("{}: {e}", req.detector()),
            })?;
            Ok(Record {
                index,
                detector: req.detector().to_string(),
                result,
            })
        })
        .collect()
}

fn run_one(r: &Resolver, req: &Request, tol: &Tolerances) -> crate::Result<RecordBody> {
    use MatrixName::*;
    Ok(match req {
        Request::UnitaryCurie {
            symmetry,
            state,
            t,
            matrix,
        } => RecordBody::Verdict(unitary_curie_check(
            r.matrix_or(*matrix, Hamiltonian),
            r.symmetry(symmetry),
            r.state(state),
            *t,
            tol,
        )?),
        Request::ScatteringCurie {
            symmetry,
            state_in,
            state_out,
        } => RecordBody::Verdict(scattering_curie_check(
            r.matrix(Smatrix),
            r.symmetry(symmetry),
            r.state(state_in),
            r.state(state_out),
            tol,
        )?),
        Request::SMatrixInference { symmetry, window } => {
            let g = r.symmetry(symmetry);
            let h0 = r.matrix(H0);
            let s = match window {
                Some(w) => build_s_matrix(h0, r.matrix(V), w.ti, w.tf, tol)?,
                None => r.matrix(Smatrix).clone(),
            };
            RecordBody::Verdict(s_matrix_inference(
                &g.label,
                invariance_margin(g, h0)?,
                invariance_margin(g, &s)?,
                tol,
            ))
        }
        Request::Kabir {
            symmetry,
            state_in,
            state_out,
            matrix,
            t,
        } => {
            let s = amplitude_operator(r.matrix_or(*matrix, Smatrix), *t);
            RecordBody::Verdict(kabir_check(
                &s,
                r.symmetry(symmetry),
                r.state(state_in),
                r.state(state_out),
                tol,
            )?)
        }
        Request::ProbabilityAsymmetry {
            state_a,
            state_b,
            matrix,
            t,
        } => {
            let s = amplitude_operator(r.matrix_or(*matrix, Smatrix), *t);
            RecordBody::Value {
                name: "probability_asymmetry".into(),
                value: probability_asymmetry(&s, r.state(state_a), r.state(state_b))?,
            }
        }
        Request::InvarianceMargin { symmetry, matrix } => {
            let m = invariance_margin(r.symmetry(symmetry), r.matrix_or(*matrix, Hamiltonian))?;
            RecordBody::Margin {
                value: m.value,
                comparison: m.kind,
            }
        }
        Request::TimeReversalConsistency { symmetry, t, matrix } => {
            let m = time_reversal_consistency(r.symmetry(symmetry), r.matrix_or(*matrix, Hamiltonian), *t, tol)?;
            RecordBody::Margin {
                value: m.value,
                comparison: m.kind,
            }
        }
        Request::CptLink { cpt, cp, matrix } => {
            let h = r.matrix_or(*matrix, Hamiltonian);
            RecordBody::Verdict(cpt_link_inference(
                invariance_margin(r.symmetry(cpt), h)?,
                invariance_margin(r.symmetry(cp), h)?,
                tol,
            ))
        }
        Request::Wigner {
            symmetry,
            matrix,
            gap_tol,
        } => RecordBody::Verdict(wigner_principle_check(
            r.matrix_or(*matrix, Hamiltonian),
            r.symmetry(symmetry),
            gap_tol.unwrap_or(tol.gap_tol),
            tol,
        )?),
        Request::KramersVerify {
            symmetry,
            matrix,
            gap_tol,
        } => RecordBody::Kramers(kramers_degeneracy_verify(
            r.matrix_or(*matrix, Hamiltonian),
            r.symmetry(symmetry),
            gap_tol.unwrap_or(tol.gap_tol),
            tol,
        )?),
    })
}

fn amplitude_operator(m: &ComplexMatrix, t: Option<f64>) -> ComplexMatrix {
    match t {
        Some(t) => evolution(m, t),
        None => m.clone(),
    }
}

/// One human-readable line per record.
pub fn render_text(records: &[Record]) -> String {
    let mut out = String::new();
    for rec in records {
        write!(out, "[{}] {:<26} ", rec.index, rec.detector).unwrap();
        match &rec.result {
            RecordBody::Verdict(v) => {
                let outcome = match (v.outcome, v.reason) {
                    (Outcome::Violation, _) => "VIOLATION".to_string(),
                    (Outcome::NoConclusion, Some(reason)) => format!("no-conclusion ({})", reason.as_str()),
                    (Outcome::NoConclusion, None) => "no-conclusion".to_string(),
                };
                write!(
                    out,
                    "{outcome} of {} margin={:.6e} | {}",
                    v.symmetry, v.margin, v.witness.note
                )
                .unwrap();
                for (key, q) in &v.witness.values {
                    match q {
                        Quantity::Real(x) => write!(out, " {key}={x:.6e}").unwrap(),
                        Quantity::Complex([re, im]) => write!(out, " {key}=({re:.6e}, {im:.6e})").unwrap(),
                    }
                }
            }
            RecordBody::Margin { value, comparison } => {
                let kind = serde_json::to_value(comparison).expect("enum");
                write!(out, "margin={value:.6e} ({})", kind.as_str().unwrap_or("")).unwrap();
            }
            RecordBody::Value { name, value } => write!(out, "{name}={value:.6e}").unwrap(),
            RecordBody::Kramers(k) => {
                let status = serde_json::to_value(k.status).expect("enum");
                let sizes: Vec<String> = k.clusters.iter().map(|c| c.multiplicity.to_string()).collect();
                write!(
                    out,
                    "kramers {} | {} | multiplicities [{}]",
                    status.as_str().unwrap_or(""),
                    k.note,
                    sizes.join(", ")
                )
                .unwrap();
            }
        }
        out.push('\n');
    }
    out
}
