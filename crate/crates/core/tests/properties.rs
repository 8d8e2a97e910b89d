mod common;

use common::*;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use tvd::cli::{cross_check, run_requests};
use tvd::linalg::{evolution, herm_eig};
use tvd::scenario_io::{
    parse_report, parse_scenario, serialize_report, serialize_scenario, MatrixName, Provenance, Report, Request,
    Scenario,
};
use tvd::symmetry::invariance_margin;
use tvd::{ComplexMatrix, StateVector, SymmetryTransform, Tolerances};

fn entries(n: usize) -> impl Strategy<Value = Vec<C>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| C::new(a, b)), n * n)
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    entries(n).prop_map(move |d| {
        let m = ComplexMatrix::from_row_major(d).unwrap();
        (&m + &m.adjoint()).scale_real(0.5)
    })
}

fn state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n)
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| {
            StateVector::new(v.into_iter().map(|(a, b)| C::new(a, b)).collect())
                .unwrap()
                .normalize()
                .unwrap()
        })
}

/// A signed permutation, so the unitary part is exactly unitary.
fn symmetry(n: usize) -> impl Strategy<Value = SymmetryTransform> {
    (
        Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        prop::collection::vec(any::<bool>(), n),
        any::<bool>(),
    )
        .prop_map(move |(perm, signs, antilinear)| {
            let mut u = ComplexMatrix::zeros(n);
            for (i, &j) in perm.iter().enumerate() {
                u[(i, j)] = C::new(if signs[i] { -1.0 } else { 1.0 }, 0.0);
            }
            SymmetryTransform::new("g", u, antilinear).unwrap()
        })
}

fn scenario() -> impl Strategy<Value = Scenario> {
    (2usize..5).prop_flat_map(|n| {
        (
            hermitian(n),
            symmetry(n),
            prop::collection::vec(state(n), 1..4),
            -3.0..3.0f64,
        )
            .prop_map(move |(h, g, states, t)| {
                let mut s = Scenario::new(n);
                s.matrices.hamiltonian = Some(h);
                s.symmetries.push(g);
                for (k, psi) in states.into_iter().enumerate() {
                    s.states.insert(format!("s{k}"), psi);
                }
                let last = format!("s{}", s.states.len() - 1);
                s.requests.push(Request::InvarianceMargin {
                    symmetry: "g".into(),
                    matrix: None,
                });
                s.requests.push(Request::ProbabilityAsymmetry {
                    state_a: "s0".into(),
                    state_b: last,
                    matrix: Some(MatrixName::Hamiltonian),
                    t: Some(t),
                });
                s
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(h in (1usize..6).prop_flat_map(hermitian)) {
        let eig = herm_eig(&h).unwrap();
        let err = frob(&sub(&from_lib(&eig.reconstruct()), &from_lib(&h)));
        prop_assert!(err < 1e-10 * frob(&from_lib(&h)).max(1.0), "err {err}");
        for w in eig.eigenvalues.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        for (a, va) in eig.eigenvectors.iter().enumerate() {
            for (b, vb) in eig.eigenvectors.iter().enumerate() {
                let ip = braket(va.amplitudes(), vb.amplitudes()).norm();
                let expected = if a == b { 1.0 } else { 0.0 };
                prop_assert!((ip - expected).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn evolution_matches_taylor_series(h in (1usize..5).prop_flat_map(hermitian), t in -2.0..2.0f64) {
        let u = evolution(&h, t);
        let reference = expm(&from_lib(&h), C::new(0.0, -t));
        prop_assert!(frob(&sub(&from_lib(&u), &reference)) < 1e-9);
        prop_assert!(u.unitary_deviation() < 1e-10);
    }

    #[test]
    fn invariance_margin_matches_direct_commutant(
        (h, g) in (1usize..5).prop_flat_map(|n| (hermitian(n), symmetry(n)))
    ) {
        let lib = invariance_margin(&g, &h).unwrap().value;
        let direct = commutant_margin(&g, &h);
        prop_assert!((lib - direct).abs() < 1e-12, "{lib} vs {direct}");
    }

    #[test]
    fn antiunitary_conjugates_overlaps(
        (g, a, b) in (1usize..5).prop_flat_map(|n| (symmetry(n), state(n), state(n)))
    ) {
        let ga = g.apply(&a).unwrap();
        let gb = g.apply(&b).unwrap();
        prop_assert!(vdist(ga.amplitudes(), &apply(&g, a.amplitudes())) < 1e-14);
        let before = braket(a.amplitudes(), b.amplitudes());
        let after = braket(ga.amplitudes(), gb.amplitudes());
        let expected = if g.antilinear { before.conj() } else { before };
        prop_assert!((after - expected).norm() < 1e-12);
    }

    #[test]
    fn scenario_round_trips_exactly(s in scenario()) {
        let bytes = serialize_scenario(&s);
        let back = parse_scenario(&bytes).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(serialize_scenario(&back), bytes);
    }

    #[test]
    fn reports_are_deterministic_and_round_trip(s in scenario()) {
        let tol = Tolerances::default();
        let build = || {
            let mut r = Report::new(Provenance { tolerances: tol, seed: None, tool_version: "test".into() });
            r.records = run_requests(&s, &tol).unwrap();
            r.oracle = Some(cross_check(&s, &r.records, &tol));
            r
        };
        let first = serialize_report(&build());
        prop_assert_eq!(&first, &serialize_report(&build()));
        let parsed = parse_report(&first).unwrap();
        prop_assert!(parsed.oracle.as_ref().unwrap().iter().all(|o| o.agrees));
        prop_assert_eq!(serialize_report(&parsed), first);
    }
}
