//! Seeded invariant suites behind `tvd selftest`.

use std::fmt;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cli::{build_model, count_disagreements, cross_check, run_requests};
use crate::curie::{scattering_curie_check, unitary_curie_check};
use crate::error::Result;
use crate::kabir::{kabir_check, probability_asymmetry, transition_probability};
use crate::linalg::{
    commutator, evolution, herm_eig, mat_exp, pauli, random_hermitian_with, random_state_with, random_unitary_with,
    seeded_rng, ComplexMatrix, StateVector, C64,
};
use crate::models::{
    edm_model, kaon_decay_scattering_model, spin_operators, symmetrize_invariant, t_symmetric_smatrix,
};
use crate::scenario_io::{parse_scenario, serialize_report, serialize_scenario, Provenance, Report};
use crate::symmetry::{invariance_margin, margins_agree, SymmetryTransform};
use crate::tolerance::Tolerances;
use crate::wigner::{
    kramers_degeneracy_verify, kramers_square, ray_displacement, spectrum_clusters, wigner_principle_check,
    KramersStatus, TSquare,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub millis: u128,
    /// First failing trial, if any.
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.passed == self.total && self.total > 0
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAIL" };
        write!(
            f,
            "{status:<4} {:<40} {:>5}/{:<5} {:>6} ms",
            self.name, self.passed, self.total, self.millis
        )?;
        if let Some(why) = &self.first_failure {
            write!(f, "  first failure: {why}")?;
        }
        Ok(())
    }
}

/// Runs `check` for trials `0..n`; a trial fails when it returns `Ok(false)`
/// or an error.
fn suite(name: &'static str, n: usize, mut check: impl FnMut(usize) -> Result<bool>) -> SuiteResult {
    let start = Instant::now();
    let mut passed = 0;
    let mut first_failure = None;
    for k in 0..n {
        match check(k) {
            Ok(true) => passed += 1,
            Ok(false) => {
                first_failure.get_or_insert_with(|| format!("trial {k}"));
            }
            Err(e) => {
                first_failure.get_or_insert_with(|| format!("trial {k}: {e}"));
            }
        }
    }
    SuiteResult {
        name,
        passed,
        total: n,
        millis: start.elapsed().as_millis(),
        first_failure,
    }
}

fn rng_for(seed: u64, suite_id: u64) -> ChaCha8Rng {
    seeded_rng(seed.wrapping_mul(1_000_003).wrapping_add(suite_id))
}

fn dim_in(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    rng.random_range(lo..=hi)
}

fn random_symmetry(rng: &mut ChaCha8Rng, dim: usize, antilinear: bool) -> Result<SymmetryTransform> {
    SymmetryTransform::new("G", random_unitary_with(dim, rng)?, antilinear)
}

/// Random linear involution `V diag(±1) V†`, one eigenvalue flipped.
fn random_involution(rng: &mut ChaCha8Rng, dim: usize) -> Result<SymmetryTransform> {
    let v = random_unitary_with(dim, rng)?;
    let flip = rng.random_range(0..dim.max(1));
    let signs: Vec<f64> = (0..dim).map(|k| if k == flip { -1.0 } else { 1.0 }).collect();
    let r = &(&v * &ComplexMatrix::diag(&signs)) * &v.adjoint();
    SymmetryTransform::linear("R", r)
}

/// Random antiunitary `W K` with `W conj(W) = sign·I`.
fn random_time_reversal(rng: &mut ChaCha8Rng, dim: usize, minus: bool) -> Result<SymmetryTransform> {
    let v = random_unitary_with(dim, rng)?;
    let core = if minus {
        pauli::i_y().kron(&ComplexMatrix::identity(dim / 2))
    } else {
        ComplexMatrix::identity(dim)
    };
    let w = &(&v * &core) * &v.transpose();
    SymmetryTransform::antiunitary("T", w)
}

fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).frobenius_norm()
}

pub fn run_all(tol: &Tolerances, seed: u64) -> Vec<SuiteResult> {
    let mut out = Vec::new();

    let mut rng = rng_for(seed, 1);
    out.push(suite("linalg: exponential is unitary", 100, |_| {
        let d = dim_in(&mut rng, 1, 8);
        let h = random_hermitian_with(d, &mut rng)?.scale_real(rng.random_range(0.1..20.0));
        let t = rng.random_range(-5.0..5.0);
        Ok(evolution(&h, t).unitary_deviation() <= 1e-10)
    }));

    let mut rng = rng_for(seed, 2);
    out.push(suite("linalg: exponential group law", 100, |_| {
        let d = dim_in(&mut rng, 1, 8);
        let h = random_hermitian_with(d, &mut rng)?;
        let (s, t) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let lhs = evolution(&h, s + t);
        let rhs = &evolution(&h, s) * &evolution(&h, t);
        Ok(max_abs_diff(&lhs, &rhs) <= 1e-10)
    }));

    let mut rng = rng_for(seed, 3);
    out.push(suite("linalg: eigen reconstruction", 100, |_| {
        let d = dim_in(&mut rng, 1, 10);
        let a = random_hermitian_with(d, &mut rng)?;
        let eig = herm_eig(&a)?;
        Ok(max_abs_diff(&eig.reconstruct(), &a) <= tol.tau_eig * a.frobenius_norm().max(1.0))
    }));

    let mut rng = rng_for(seed, 4);
    out.push(suite("linalg: commutator antisymmetry", 100, |_| {
        let d = dim_in(&mut rng, 1, 8);
        let a = random_hermitian_with(d, &mut rng)?;
        let b = random_unitary_with(d, &mut rng)?;
        let sum = &commutator(&a, &b)? + &commutator(&b, &a)?;
        Ok(sum.frobenius_norm() <= 1e-15 * (1.0 + a.frobenius_norm() * b.frobenius_norm()))
    }));

    let mut rng = rng_for(seed, 5);
    out.push(suite("symmetry: norm preservation", 200, |k| {
        let d = dim_in(&mut rng, 1, 8);
        let g = random_symmetry(&mut rng, d, k % 2 == 0)?;
        let psi = random_state_with(d, &mut rng)?;
        Ok((g.apply(&psi)?.norm() - 1.0).abs() <= 1e-12)
    }));

    let mut rng = rng_for(seed, 6);
    out.push(suite("symmetry: antiunitarity", 200, |_| {
        let d = dim_in(&mut rng, 1, 8);
        let g = random_symmetry(&mut rng, d, true)?;
        let psi = random_state_with(d, &mut rng)?;
        let phi = random_state_with(d, &mut rng)?;
        let lhs = g.apply(&psi)?.inner(&g.apply(&phi)?);
        Ok((lhs - psi.inner(&phi).conj()).norm() <= 1e-12)
    }));

    let mut rng = rng_for(seed, 7);
    out.push(suite("symmetry: conjugation is a morphism", 200, |k| {
        let d = dim_in(&mut rng, 1, 8);
        let g = random_symmetry(&mut rng, d, k % 2 == 1)?;
        let a = random_hermitian_with(d, &mut rng)?;
        let b = random_unitary_with(d, &mut rng)?;
        let lhs = g.conjugate_operator(&(&a * &b))?;
        let rhs = &g.conjugate_operator(&a)? * &g.conjugate_operator(&b)?;
        Ok(max_abs_diff(&lhs, &rhs) <= 1e-10)
    }));

    let mut rng = rng_for(seed, 8);
    out.push(suite("symmetry: static vs dynamic margin", 60, |k| {
        let d = dim_in(&mut rng, 2, 6);
        let t_op = random_time_reversal(&mut rng, d, false)?;
        let h = random_hermitian_with(d, &mut rng)?;
        let h = if k % 2 == 0 {
            symmetrize_invariant(&h, &t_op, tol)?
        } else {
            h
        };
        margins_agree(&t_op, &h, 10, &mut rng, tol)
    }));

    let mut rng = rng_for(seed, 9);
    out.push(suite("curie: violations imply broken law", 500, |_| {
        let d = dim_in(&mut rng, 2, 6);
        let h = random_hermitian_with(d, &mut rng)?;
        let r = random_involution(&mut rng, d)?;
        // Start from an R-eigenstate so the premise is usually met.
        let psi = symmetric_part(&r, &random_state_with(d, &mut rng)?)?;
        let t = rng.random_range(-5.0..5.0);
        let v = unitary_curie_check(&h, &r, &psi, t, tol)?;
        Ok(!v.is_violation() || invariance_margin(&r, &h)?.value > tol.tau_violation)
    }));

    let mut rng = rng_for(seed, 10);
    out.push(suite("curie: invariant laws never flagged", 1000, |_| {
        let d = dim_in(&mut rng, 2, 6);
        let r = random_involution(&mut rng, d)?;
        let h = symmetrize_invariant(&random_hermitian_with(d, &mut rng)?, &r, tol)?;
        let psi = symmetric_part(&r, &random_state_with(d, &mut rng)?)?;
        let t = rng.random_range(-5.0..5.0);
        Ok(!unitary_curie_check(&h, &r, &psi, t, tol)?.is_violation())
    }));

    let mut rng = rng_for(seed, 11);
    out.push(suite("curie: commuting S keeps parity", 100, |_| {
        let d = dim_in(&mut rng, 2, 6);
        let signs: Vec<f64> = (0..d).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let r = SymmetryTransform::linear("R", ComplexMatrix::diag(&signs))?;
        let gen = symmetrize_invariant(&random_hermitian_with(d, &mut rng)?, &r, tol)?;
        let s = mat_exp(&gen, C64::new(0.0, -1.0));
        let mut ok = true;
        for a in (0..d).step_by(2) {
            for b in (1..d).step_by(2) {
                let (even, odd) = (StateVector::basis(d, a), StateVector::basis(d, b));
                ok &= odd.inner(&s.apply(&even)?).norm() <= 1e-10;
                ok &= !scattering_curie_check(&s, &r, &even, &odd, tol)?.is_violation();
            }
        }
        Ok(ok)
    }));

    let mut rng = rng_for(seed, 12);
    out.push(suite("kabir: violations imply broken law", 500, |_| {
        let d = dim_in(&mut rng, 2, 6);
        let s = random_unitary_with(d, &mut rng)?;
        let t_op = random_symmetry(&mut rng, d, true)?;
        let a = random_state_with(d, &mut rng)?;
        let b = random_state_with(d, &mut rng)?;
        let v = kabir_check(&s, &t_op, &a, &b, tol)?;
        let direct = (&t_op.conjugate_operator(&s)? - &s.adjoint()).frobenius_norm();
        Ok(!v.is_violation() || direct > tol.tau_zero)
    }));

    out.push(suite("kabir: symmetric S has equal amplitudes", 500, |k| {
        let d = 2 + k % 5;
        let s = t_symmetric_smatrix(d, seed + k as u64)?;
        let t_op = SymmetryTransform::conjugation(d);
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                let v = kabir_check(&s, &t_op, &StateVector::basis(d, a), &StateVector::basis(d, b), tol)?;
                worst = worst.max(v.margin);
            }
        }
        Ok(worst <= 1e-10)
    }));

    let mut rng = rng_for(seed, 13);
    out.push(suite("kabir: two-level transition symmetry", 1000, |_| {
        let m = random_unitary_with(2, &mut rng)?;
        Ok((m[(0, 1)].norm() - m[(1, 0)].norm()).abs() <= 1e-12
            && probability_asymmetry(&m, &StateVector::basis(2, 0), &StateVector::basis(2, 1))? <= 1e-12)
    }));

    let mut rng = rng_for(seed, 14);
    out.push(suite("kabir: probabilities bounded", 300, |_| {
        let d = dim_in(&mut rng, 1, 8);
        let m = random_unitary_with(d, &mut rng)?;
        let p = transition_probability(&m, &random_state_with(d, &mut rng)?, &random_state_with(d, &mut rng)?)?;
        Ok((0.0..=1.0 + 1e-9).contains(&p))
    }));

    let mut rng = rng_for(seed, 15);
    out.push(suite("wigner: singlet under T²=−I breaks T", 200, |k| {
        let d = 2 * dim_in(&mut rng, 1, 3);
        let t_op = random_time_reversal(&mut rng, d, true)?;
        let h = random_hermitian_with(d, &mut rng)?;
        let h = if k % 2 == 0 {
            symmetrize_invariant(&h, &t_op, tol)?
        } else {
            h
        };
        if kramers_square(&t_op, tol)?.classification != TSquare::MinusIdentity {
            return Ok(false);
        }
        let clusters = spectrum_clusters(&herm_eig(&h)?, tol.gap_tol);
        let has_single = clusters.clusters.iter().any(|c| c.multiplicity == 1);
        Ok(!has_single || invariance_margin(&t_op, &h)?.value > tol.tau_zero)
    }));

    let mut rng = rng_for(seed, 16);
    out.push(suite("wigner: invariant law keeps rays", 200, |_| {
        let d = dim_in(&mut rng, 2, 6);
        let t_op = random_time_reversal(&mut rng, d, false)?;
        let h = symmetrize_invariant(&random_hermitian_with(d, &mut rng)?, &t_op, tol)?;
        let eig = herm_eig(&h)?;
        let clusters = spectrum_clusters(&eig, tol.gap_tol);
        let mut ok = !wigner_principle_check(&h, &t_op, tol.gap_tol, tol)?.is_violation();
        for c in clusters.clusters.iter().filter(|c| c.multiplicity == 1) {
            ok &= ray_displacement(&t_op, &eig.eigenvectors[c.members[0]], tol)? <= 1e-8;
        }
        Ok(ok)
    }));

    let mut rng = rng_for(seed, 17);
    out.push(suite("wigner: ray displacement phase-free", 200, |_| {
        let d = dim_in(&mut rng, 1, 8);
        let t_op = random_symmetry(&mut rng, d, true)?;
        let psi = random_state_with(d, &mut rng)?;
        let phased = psi.scale(C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)));
        Ok((ray_displacement(&t_op, &psi, tol)? - ray_displacement(&t_op, &phased, tol)?).abs() <= 1e-12)
    }));

    let mut rng = rng_for(seed, 18);
    out.push(suite("wigner: multiplicities sum to dim", 200, |k| {
        let d = dim_in(&mut rng, 1, 8);
        let h = random_hermitian_with(d, &mut rng)?;
        // Every fourth case is heavily degenerate.
        let h = if k % 4 == 0 {
            ComplexMatrix::diag(&vec![1.5; d])
        } else {
            h
        };
        Ok(spectrum_clusters(&herm_eig(&h)?, tol.gap_tol).total_multiplicity() == d)
    }));

    let mut rng = rng_for(seed, 19);
    out.push(suite("wigner: Kramers pairs", 200, |k| {
        let d = [2, 4, 6][k % 3];
        let t_op = random_time_reversal(&mut rng, d, true)?;
        let h = symmetrize_invariant(&random_hermitian_with(d, &mut rng)?, &t_op, tol)?;
        Ok(kramers_degeneracy_verify(&h, &t_op, tol.gap_tol, tol)?.status == KramersStatus::Pass)
    }));

    out.push(suite("models: spin algebra", 5, |k| {
        let s = spin_operators([0.0, 0.5, 1.0, 1.5, 2.0][k])?;
        let [jx, jy, jz] = s.components();
        let i = C64::new(0.0, 1.0);
        let mut ok = max_abs_diff(&commutator(jx, jy)?, &jz.scale(i)) <= 1e-10
            && max_abs_diff(&commutator(jy, jz)?, &jx.scale(i)) <= 1e-10
            && max_abs_diff(&commutator(jz, jx)?, &jy.scale(i)) <= 1e-10;
        for c in s.components() {
            ok &= max_abs_diff(&s.t_conv.conjugate_operator(c)?, &c.scale_real(-1.0)) <= 1e-10;
        }
        let sign = if s.is_half_integer() { -1.0 } else { 1.0 };
        ok &= max_abs_diff(&s.t_conv.square(), &ComplexMatrix::identity(s.dim()).scale_real(sign)) <= 1e-10;
        Ok(ok)
    }));

    out.push(suite("models: EDM detector/oracle agreement", 18, |k| {
        let j = [0.5, 1.0, 1.5][k / 6];
        let g = [0.1, 1.0][(k / 3) % 2];
        let mut e = [0.0; 3];
        e[k % 3] = 1.0;
        let m = edm_model(j, 0.0, g, e, 1.0)?;
        let t_op = &m.spin.t_conv;
        let v = wigner_principle_check(&m.hamiltonian, t_op, tol.gap_tol, tol)?;
        let flat = edm_model(j, 0.0, 0.0, e, 1.0)?;
        Ok(v.is_violation()
            && invariance_margin(t_op, &m.hamiltonian)?.value > tol.tau_violation
            && invariance_margin(t_op, &flat.hamiltonian)?.value <= tol.tau_zero)
    }));

    out.push(suite("models: dipole proportionality chain", 18, |k| {
        let j = [0.5, 1.0, 1.5][k / 6];
        let g = [0.1, 1.0][(k / 3) % 2];
        let mut e = [0.0; 3];
        e[k % 3] = 1.0;
        let m = edm_model(j, 0.0, g, e, 0.7)?;
        let Some(c) = m.wigner_eckart_constant(tol)? else {
            return Ok(false);
        };
        let mut ok = m.dipole_parity_defect()? <= 1e-10;
        for row in m.eigen_dipoles(tol)? {
            ok &= (row.dipole - c * row.angular).abs() <= 1e-10;
            ok &= (row.reversed_dipole + c * row.reversed_angular).abs() <= 1e-10;
            ok &= (row.reversed_angular + row.angular).abs() <= 1e-10;
        }
        Ok(ok)
    }));

    let mut rng = rng_for(seed, 20);
    out.push(suite("models: T-fixed rays carry no dipole", 100, |k| {
        let j = [1.0, 2.0][k % 2];
        let m = edm_model(j, 0.0, 1.0, [0.3, -0.2, 0.9], 1.0)?;
        let t_op = &m.spin.t_conv;
        let psi = random_state_with(m.spin.dim(), &mut rng)?;
        // For T² = +I, ψ + Tψ spans a T-fixed ray.
        let fixed = psi.add(&t_op.apply(&psi)?).normalize()?;
        Ok(ray_displacement(t_op, &fixed, tol)? <= tol.tau_zero && fixed.expectation(&m.dipole)?.norm() <= 1e-9)
    }));

    out.push(suite("models: kaon decay S is unitary", 100, |k| {
        let eps = k as f64 / 100.0;
        Ok(kaon_decay_scattering_model(eps)?.smatrix.unitary_deviation() <= 1e-12)
    }));

    out.push(suite("scenario_io: round trip and determinism", 40, |k| {
        let params = model_params(k);
        let s = build_model(params.0, &params.1)?;
        let back = parse_scenario(&serialize_scenario(&s)).map_err(|e| crate::Error::Config(e.to_string()))?;
        let report = |scenario: &crate::scenario_io::Scenario| -> Result<Vec<u8>> {
            let mut r = Report::new(Provenance {
                tolerances: *tol,
                seed: scenario.seed,
                tool_version: env!("CARGO_PKG_VERSION").into(),
            });
            r.records = run_requests(scenario, tol).map_err(|e| crate::Error::Config(e.to_string()))?;
            Ok(serialize_report(&r))
        };
        Ok(back == s && report(&s)? == report(&back)?)
    }));

    out.push(suite("cli: oracle agrees on generated models", 50, |k| {
        let params = model_params(k);
        let s = build_model(params.0, &params.1)?;
        let records = run_requests(&s, tol).map_err(|e| crate::Error::Config(e.to_string()))?;
        Ok(count_disagreements(&cross_check(&s, &records, tol)) == 0)
    }));

    out
}

/// Projection `(ψ + Rψ)/‖·‖` onto the +1 eigenspace of an involution, or
/// onto the −1 eigenspace when the first vanishes.
fn symmetric_part(r: &SymmetryTransform, psi: &StateVector) -> Result<StateVector> {
    let rpsi = r.apply(psi)?;
    let plus = psi.add(&rpsi);
    if plus.norm() > 1e-6 {
        plus.normalize()
    } else {
        psi.sub(&rpsi).normalize()
    }
}

/// A seeded spread of built-in model parameters.
fn model_params(k: usize) -> (&'static str, Vec<String>) {
    let x = k as f64;
    match k % 5 {
        0 => ("kaon-decay", vec![format!("eps={}", (x * 0.019) % 0.99)]),
        1 => (
            "kaon-oscillation",
            vec![
                format!("m1={}", 0.5 + x * 0.1),
                format!("m2={}", 1.0 - x * 0.05),
                format!("w={}{:+}i", (x * 0.37).sin(), (x * 0.11).cos()),
                format!("t={}", 0.3 + x * 0.07),
            ],
        ),
        2 => (
            "edm",
            vec![
                format!("j={}/2", 1 + k % 4),
                format!("g={}", 0.1 + x * 0.02),
                ["E=x", "E=y", "E=z", "E=1,2,-1"][k % 4].to_string(),
            ],
        ),
        3 => ("t-symmetric-s", vec![format!("dim={}", 2 + k % 5), format!("seed={k}")]),
        _ => ("kramers", vec![format!("dim={}", 2 * (1 + k % 3)), format!("seed={k}")]),
    }
}
