//! Brute-force cross-checks of detector records.
//!
//! Everything here is recomputed from the raw scenario entries with plain
//! loops: operator conjugation, commutant margins, amplitudes and state
//! deviations. Time evolution goes through the spectral decomposition rather
//! than the Taylor exponential the detectors use. Outcomes are re-derived
//! from these numbers whenever they are not within rounding of a threshold.

use crate::linalg::{herm_eig, ComplexMatrix, C64};
use crate::scenario_io::{MatrixName, OracleRecord, Record, RecordBody, Request, Scenario};
use crate::symmetry::SymmetryTransform;
use crate::tolerance::Tolerances;
use crate::verdict::{Outcome, Verdict};
use crate::wigner::KramersStatus;

use super::run::Resolver;

type Mat = Vec<C64>;

fn raw(m: &ComplexMatrix) -> (Mat, usize) {
    (m.as_slice().to_vec(), m.dim())
}

fn mul(a: &[C64], b: &[C64], n: usize) -> Mat {
    let mut c = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

fn dagger(a: &[C64], n: usize) -> Mat {
    let mut c = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            c[j * n + i] = a[i * n + j].conj();
        }
    }
    c
}

fn dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `U A U†` or `U conj(A) U†`.
fn moved(g: &SymmetryTransform, a: &[C64], n: usize) -> Mat {
    let u = g.unitary_part.as_slice();
    let a: Mat = if g.antilinear {
        a.iter().map(|z| z.conj()).collect()
    } else {
        a.to_vec()
    };
    mul(&mul(u, &a, n), &dagger(u, n), n)
}

fn commutant(g: &SymmetryTransform, a: &ComplexMatrix) -> f64 {
    let (a, n) = raw(a);
    dist(&moved(g, &a, n), &a) / norm(&a).max(1.0)
}

fn apply_sym(g: &SymmetryTransform, psi: &[C64]) -> Vec<C64> {
    let n = psi.len();
    let u = g.unitary_part.as_slice();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| u[i * n + k] * if g.antilinear { psi[k].conj() } else { psi[k] })
                .sum()
        })
        .collect()
}

fn mat_vec(m: &[C64], psi: &[C64]) -> Vec<C64> {
    let n = psi.len();
    (0..n).map(|i| (0..n).map(|k| m[i * n + k] * psi[k]).sum()).collect()
}

/// `⟨a, b⟩`, antilinear in `a`.
fn braket(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `e^{−itH}` assembled from eigenpairs.
fn spectral_evolution(h: &ComplexMatrix, t: f64) -> crate::Result<Mat> {
    let n = h.dim();
    let eig = herm_eig(h)?;
    let mut u = vec![C64::new(0.0, 0.0); n * n];
    for (lambda, v) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
        let phase = C64::from_polar(1.0, -lambda * t);
        let v = v.amplitudes();
        for i in 0..n {
            for j in 0..n {
                u[i * n + j] += phase * v[i] * v[j].conj();
            }
        }
    }
    Ok(u)
}

fn operator(m: &ComplexMatrix, t: Option<f64>) -> crate::Result<Mat> {
    match t {
        Some(t) => spectral_evolution(m, t),
        None => Ok(m.as_slice().to_vec()),
    }
}

/// Tolerance for comparing a detector number with its recomputation.
fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-8 * a.abs().max(b.abs()).max(1.0)
}

/// Width of the band around each threshold inside which rounding could
/// legitimately flip a classification.
fn near(q: f64, threshold: f64) -> bool {
    (q - threshold).abs() <= 1e-10 * q.abs().max(threshold).max(1e-12) + 1e-15
}

/// Expected outcome of a plain margin comparison, if not borderline.
fn classify(q: f64, tol: &Tolerances) -> Option<Outcome> {
    if near(q, tol.tau_violation) {
        None
    } else if q > tol.tau_violation {
        Some(Outcome::Violation)
    } else {
        Some(Outcome::NoConclusion)
    }
}

struct Finding {
    ground_truth: f64,
    /// Outcome the oracle arrives at, when it is not borderline.
    expected: Option<Outcome>,
    /// Margin the oracle arrives at, when it is comparable.
    margin: Option<f64>,
    what: &'static str,
}

impl Finding {
    fn judge(self, tol: &Tolerances, v: &Verdict) -> (bool, f64, String) {
        let mut problems = Vec::new();
        if v.is_violation() && self.ground_truth <= tol.tau_zero {
            problems.push(format!(
                "violation reported but {} is {:.3e}",
                self.what, self.ground_truth
            ));
        }
        if let Some(expected) = self.expected {
            if expected != v.outcome {
                problems.push(format!("expected {expected:?}, report says {:?}", v.outcome));
            }
        }
        if let Some(m) = self.margin {
            if !close(m, v.margin) {
                problems.push(format!("margin {:.12e} recomputed as {m:.12e}", v.margin));
            }
        }
        let detail = if problems.is_empty() {
            format!("{} = {:.6e}; {:?} confirmed", self.what, self.ground_truth, v.outcome)
        } else {
            problems.join("; ")
        };
        (problems.is_empty(), self.ground_truth, detail)
    }
}

pub fn cross_check(scenario: &Scenario, records: &[Record], tol: &Tolerances) -> Vec<OracleRecord> {
    let r = Resolver { scenario };
    scenario
        .requests
        .iter()
        .enumerate()
        .map(|(index, req)| {
            let record = records.iter().find(|rec| rec.index == index);
            let (agrees, ground_truth, detail) = match record {
                None => (false, f64::NAN, "no record for this request".to_string()),
                Some(rec) if rec.detector != req.detector() => (
                    false,
                    f64::NAN,
                    format!("record is for {}, request is {}", rec.detector, req.detector()),
                ),
                Some(rec) => match check_one(&r, req, &rec.result, tol) {
                    Ok(x) => x,
                    Err(e) => (false, f64::NAN, format!("oracle could not evaluate: {e}")),
                },
            };
            OracleRecord {
                index,
                detector: req.detector().to_string(),
                agrees,
                ground_truth: ground_truth.is_finite().then_some(ground_truth),
                detail,
            }
        })
        .collect()
}

fn mismatch(body: &RecordBody) -> (bool, f64, String) {
    let kind = match body {
        RecordBody::Verdict(_) => "verdict",
        RecordBody::Margin { .. } => "margin",
        RecordBody::Value { .. } => "value",
        RecordBody::Kramers(_) => "kramers",
    };
    (false, f64::NAN, format!("unexpected {kind} record"))
}

fn check_value(what: &str, reported: f64, truth: f64) -> (bool, f64, String) {
    if close(reported, truth) {
        (true, truth, format!("{what} = {truth:.6e} confirmed"))
    } else {
        (
            false,
            truth,
            format!("{what} {reported:.12e} recomputed as {truth:.12e}"),
        )
    }
}

fn check_one(r: &Resolver, req: &Request, body: &RecordBody, tol: &Tolerances) -> crate::Result<(bool, f64, String)> {
    use MatrixName::*;
    let verdict = match body {
        RecordBody::Verdict(v) => Some(v),
        _ => None,
    };
    let finding = match req {
        Request::UnitaryCurie {
            symmetry,
            state,
            t,
            matrix,
        } => {
            if verdict.is_none() {
                return Ok(mismatch(body));
            }
            let g = r.symmetry(symmetry);
            let h = r.matrix_or(*matrix, Hamiltonian);
            let psi_i = r.state(state).amplitudes();
            let psi_f = mat_vec(&spectral_evolution(h, *t)?, psi_i);
            let dev_i = dist(&apply_sym(g, psi_i), psi_i);
            let dev_f = dist(&apply_sym(g, &psi_f), &psi_f);
            let borderline = near(dev_i, tol.tau_zero) || near(dev_f, tol.tau_zero);
            let offending = if dev_i <= tol.tau_zero {
                dev_f
            } else if dev_f <= tol.tau_zero {
                dev_i
            } else {
                0.0
            };
            let expected = if borderline {
                None
            } else if offending <= tol.tau_zero {
                Some(Outcome::NoConclusion)
            } else {
                classify(offending, tol)
            };
            Finding {
                ground_truth: commutant(g, h),
                expected,
                margin: (!borderline).then_some(offending),
                what: "commutant margin of R on H",
            }
        }
        Request::ScatteringCurie {
            symmetry,
            state_in,
            state_out,
        } => {
            if verdict.is_none() {
                return Ok(mismatch(body));
            }
            let g = r.symmetry(symmetry);
            let s = r.matrix(Smatrix);
            let a = r.state(state_in).amplitudes();
            let b = r.state(state_out).amplitudes();
            let parity = |x: &[C64]| {
                let gx = apply_sym(g, x);
                let neg: Vec<C64> = x.iter().map(|z| -z).collect();
                (dist(&gx, x), dist(&gx, &neg))
            };
            let (a_even, a_odd) = parity(a);
            let (b_even, b_odd) = parity(b);
            let borderline = [a_even, a_odd, b_even, b_odd].iter().any(|&d| near(d, tol.tau_zero));
            let opposite =
                (a_even <= tol.tau_zero && b_odd <= tol.tau_zero) || (a_odd <= tol.tau_zero && b_even <= tol.tau_zero);
            let amplitude = braket(b, &mat_vec(s.as_slice(), a)).norm();
            let expected = if borderline {
                None
            } else if !opposite {
                Some(Outcome::NoConclusion)
            } else {
                classify(amplitude, tol)
            };
            Finding {
                ground_truth: commutant(g, s),
                expected,
                margin: Some(amplitude),
                what: "commutant margin of R on S",
            }
        }
        Request::SMatrixInference { symmetry, window } => {
            if verdict.is_none() {
                return Ok(mismatch(body));
            }
            let g = r.symmetry(symmetry);
            let h0 = r.matrix(H0);
            let n = h0.dim();
            let (s, truth) = match window {
                Some(w) => {
                    let full = h0 + r.matrix(V);
                    let s = mul(
                        &mul(
                            &spectral_evolution(h0, -w.tf)?,
                            &spectral_evolution(&full, w.tf - w.ti)?,
                            n,
                        ),
                        &spectral_evolution(h0, w.ti)?,
                        n,
                    );
                    (s, commutant(g, &full))
                }
                None => {
                    let s = r.matrix(Smatrix).as_slice().to_vec();
                    let m = commutant(g, r.matrix(Smatrix));
                    (s, m)
                }
            };
            let free = commutant(g, h0);
            let s_margin = dist(&moved(g, &s, n), &s) / norm(&s).max(1.0);
            let expected = if near(free, tol.tau_zero) {
                None
            } else if free > tol.tau_zero {
                Some(Outcome::NoConclusion)
            } else {
                classify(s_margin, tol)
            };
            Finding {
                ground_truth: truth,
                expected,
                margin: Some(s_margin),
                what: "commutant margin of R on the full dynamics",
            }
        }
        Request::Kabir {
            symmetry,
            state_in,
            state_out,
            matrix,
            t,
        } => {
            if verdict.is_none() {
                return Ok(mismatch(body));
            }
            let g = r.symmetry(symmetry);
            let m = r.matrix_or(*matrix, Smatrix);
            let n = m.dim();
            let s = operator(m, *t)?;
            let a = r.state(state_in).amplitudes();
            let b = r.state(state_out).amplitudes();
            let forward = braket(b, &mat_vec(&s, a));
            let reversed = braket(&apply_sym(g, a), &mat_vec(&s, &apply_sym(g, b)));
            let asym = (forward - reversed).norm();
            Finding {
                ground_truth: dist(&moved(g, &s, n), &dagger(&s, n)) / (n as f64).max(1.0),
                expected: classify(asym, tol),
                margin: Some(asym),
                what: "‖TST⁻¹ − S⁻¹‖ per dimension",
            }
        }
        Request::ProbabilityAsymmetry {
            state_a,
            state_b,
            matrix,
            t,
        } => {
            let RecordBody::Value { value, .. } = body else {
                return Ok(mismatch(body));
            };
            let s = operator(r.matrix_or(*matrix, Smatrix), *t)?;
            let a = r.state(state_a).amplitudes();
            let b = r.state(state_b).amplitudes();
            let ab = braket(b, &mat_vec(&s, a)).norm_sqr();
            let ba = braket(a, &mat_vec(&s, b)).norm_sqr();
            return Ok(check_value("probability asymmetry", *value, (ab - ba).abs()));
        }
        Request::InvarianceMargin { symmetry, matrix } => {
            let RecordBody::Margin { value, .. } = body else {
                return Ok(mismatch(body));
            };
            let truth = commutant(r.symmetry(symmetry), r.matrix_or(*matrix, Hamiltonian));
            return Ok(check_value("commutant margin", *value, truth));
        }
        Request::TimeReversalConsistency { symmetry, t, matrix } => {
            let RecordBody::Margin { value, .. } = body else {
                return Ok(mismatch(body));
            };
            let h = r.matrix_or(*matrix, Hamiltonian);
            let n = h.dim();
            let forward = spectral_evolution(h, *t)?;
            let backward = spectral_evolution(h, -*t)?;
            let truth = dist(&moved(r.symmetry(symmetry), &forward, n), &backward) / (n as f64).max(1.0);
            return Ok(check_value("reversed-evolution margin", *value, truth));
        }
        Request::CptLink { cpt, cp, matrix } => {
            if verdict.is_none() {
                return Ok(mismatch(body));
            }
            let h = r.matrix_or(*matrix, Hamiltonian);
            let (cpt, cp) = (r.symmetry(cpt), r.symmetry(cp));
            let cpt_margin = commutant(cpt, h);
            let cp_margin = commutant(cp, h);
            // T = (CP)⁻¹ ∘ CPT, built entry by entry.
            let n = h.dim();
            let u = mul(&dagger(cp.unitary_part.as_slice(), n), cpt.unitary_part.as_slice(), n);
            let t_op = SymmetryTransform {
                label: "T".into(),
                unitary_part: ComplexMatrix::from_row_major(u)?,
                antilinear: cpt.antilinear != cp.antilinear,
            };
            let expected = if near(cpt_margin, tol.tau_zero) {
                None
            } else if cpt_margin > tol.tau_zero {
                Some(Outcome::NoConclusion)
            } else {
                classify(cp_margin, tol)
            };
            Finding {
                ground_truth: commutant(&t_op, h),
                expected,
                margin: Some(cp_margin),
                what: "commutant margin of T on H",
            }
        }
        Request::Wigner {
            symmetry,
            matrix,
            gap_tol,
        } => {
            if verdict.is_none() {
                return Ok(mismatch(body));
            }
            let g = r.symmetry(symmetry);
            let h = r.matrix_or(*matrix, Hamiltonian);
            let eig = herm_eig(h)?;
            let values = &eig.eigenvalues;
            let range = values.last().unwrap() - values[0];
            let gap = gap_tol.unwrap_or(tol.gap_tol) * range.max(1.0);
            let clean = gap * (tol.tau_violation / tol.tau_zero);
            let mut expected = Some(Outcome::NoConclusion);
            for (k, psi) in eig.eigenvectors.iter().enumerate() {
                let isolation = values
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(_, x)| (x - values[k]).abs())
                    .fold(f64::INFINITY, f64::min);
                if isolation <= clean {
                    continue;
                }
                let p = psi.amplitudes();
                let delta = 1.0 - braket(&apply_sym(g, p), p).norm();
                if near(delta, tol.tau_violation) || near(isolation, clean) {
                    expected = None;
                } else if delta > tol.tau_violation {
                    expected = Some(Outcome::Violation);
                    break;
                }
            }
            // The reported margin depends on eigenvector phases inside the
            // detector's clustering, so only the outcome is compared.
            Finding {
                ground_truth: commutant(g, h),
                expected,
                margin: None,
                what: "commutant margin of T on H",
            }
        }
        Request::KramersVerify {
            symmetry,
            matrix,
            gap_tol,
        } => {
            let RecordBody::Kramers(k) = body else {
                return Ok(mismatch(body));
            };
            let g = r.symmetry(symmetry);
            let h = r.matrix_or(*matrix, Hamiltonian);
            let n = h.dim();
            let u = g.unitary_part.as_slice();
            let conj_u: Mat = u.iter().map(|z| z.conj()).collect();
            let square = mul(u, &conj_u, n);
            let minus_id: Mat = (0..n * n)
                .map(|i| {
                    if i % (n + 1) == 0 {
                        C64::new(-1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
                .collect();
            let is_minus = dist(&square, &minus_id) <= tol.tau_zero;
            let margin = commutant(g, h);
            // Multiplicities by counting eigenvalues within the gap of each other.
            let values = herm_eig(h)?.eigenvalues;
            let range = values.last().unwrap() - values[0];
            let gap = gap_tol.unwrap_or(tol.gap_tol) * range.max(1.0);
            let mut sizes = vec![1usize];
            for w in values.windows(2) {
                if w[1] - w[0] <= gap {
                    *sizes.last_mut().unwrap() += 1;
                } else {
                    sizes.push(1);
                }
            }
            let expected = if !is_minus || margin > tol.tau_zero {
                KramersStatus::NotApplicable
            } else if sizes.iter().all(|s| s % 2 == 0) {
                KramersStatus::Pass
            } else {
                KramersStatus::Fail
            };
            let reported: Vec<usize> = k.clusters.iter().map(|c| c.multiplicity).collect();
            let truth = sizes.len() as f64;
            return Ok(if k.status != expected {
                (
                    false,
                    truth,
                    format!("expected {expected:?}, report says {:?}", k.status),
                )
            } else if reported != sizes {
                (
                    false,
                    truth,
                    format!("multiplicities {reported:?} recounted as {sizes:?}"),
                )
            } else {
                (
                    true,
                    truth,
                    format!(
                        "{} levels, multiplicities {sizes:?}; {expected:?} confirmed",
                        sizes.len()
                    ),
                )
            });
        }
    };
    let v = verdict.expect("verdict branches return early otherwise");
    Ok(finding.judge(tol, v))
}

pub fn count_disagreements(records: &[OracleRecord]) -> usize {
    records.iter().filter(|r| !r.agrees).count()
}
