//! Model zoo: spin algebras, elementary electric dipoles, neutral-kaon toys,
//! and constructors for symmetric instances used as oracles.

use crate::error::{Error, Result};
use crate::linalg::{evolution, mat_exp, random_real_symmetric, ComplexMatrix, StateVector, C64, I, ONE};
use crate::symmetry::SymmetryTransform;
use crate::tolerance::Tolerances;
use crate::wigner::{ray_displacement, square_class, TSquare};

/// Angular momentum matrices for spin `j` in the basis `m = j, j−1, …, −j`,
/// plus the conventional time reversal `e^{−iπJy}·K`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinAlgebra {
    twice_j: u32,
    pub jx: ComplexMatrix,
    pub jy: ComplexMatrix,
    pub jz: ComplexMatrix,
    pub t_conv: SymmetryTransform,
}

impl SpinAlgebra {
    pub fn from_twice_j(twice_j: u32) -> Result<Self> {
        let dim = twice_j as usize + 1;
        let j = twice_j as f64 / 2.0;
        let m_of = |k: usize| j - k as f64;

        let jz = ComplexMatrix::diag(&(0..dim).map(m_of).collect::<Vec<_>>());
        // ⟨m+1| J+ |m⟩ = √(j(j+1) − m(m+1)); row k−1 holds m+1 when column k holds m.
        let mut raise = ComplexMatrix::zeros(dim);
        for k in 1..dim {
            let m = m_of(k);
            raise[(k - 1, k)] = C64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
        let lower = raise.adjoint();
        let jx = (&raise + &lower).scale_real(0.5);
        let jy = (&raise - &lower).scale(C64::new(0.0, -0.5));

        let rotation = mat_exp(&jy, C64::new(0.0, -std::f64::consts::PI));
        // e^{−iπJy} is real in this basis up to rounding; keep it exactly real.
        let rotation = clean_real(&rotation);
        let t_conv = SymmetryTransform::antiunitary("T", rotation)?;
        Ok(Self {
            twice_j,
            jx,
            jy,
            jz,
            t_conv,
        })
    }

    pub fn twice_j(&self) -> u32 {
        self.twice_j
    }

    pub fn j(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    pub fn is_half_integer(&self) -> bool {
        self.twice_j % 2 == 1
    }

    /// `J·n`
    pub fn along(&self, n: [f64; 3]) -> ComplexMatrix {
        let x = self.jx.scale_real(n[0]);
        let y = self.jy.scale_real(n[1]);
        let z = self.jz.scale_real(n[2]);
        &(&x + &y) + &z
    }

    pub fn components(&self) -> [&ComplexMatrix; 3] {
        [&self.jx, &self.jy, &self.jz]
    }
}

fn clean_real(m: &ComplexMatrix) -> ComplexMatrix {
    let data = m
        .as_slice()
        .iter()
        .map(|z| {
            let re = if z.re.abs() < 1e-14 { 0.0 } else { z.re };
            C64::new(re, 0.0)
        })
        .collect();
    ComplexMatrix::from_row_major(data).expect("same shape")
}

/// Validates `2j ∈ ℕ` and builds the algebra.
pub fn spin_operators(j: f64) -> Result<SpinAlgebra> {
    let twice = 2.0 * j;
    if !(twice.is_finite() && twice >= 0.0 && (twice - twice.round()).abs() < 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "spin j must be a non-negative half-integer, got {j}"
        )));
    }
    if twice.round() > 200.0 {
        return Err(Error::InvalidParameter(format!("spin j = {j} is too large")));
    }
    SpinAlgebra::from_twice_j(twice.round() as u32)
}

/// Elementary electric dipole: `H = h0·I + g·(J·E)` with dipole operator
/// `D = d·(J·ê)`, `ê` the field direction.
#[derive(Debug, Clone, PartialEq)]
pub struct EdmModel {
    pub spin: SpinAlgebra,
    pub h0: f64,
    pub g: f64,
    pub e_field: [f64; 3],
    pub d: f64,
    pub hamiltonian: ComplexMatrix,
    pub dipole: ComplexMatrix,
}

/// Per-eigenvector data for the dipole permanence argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenDipole {
    pub energy: f64,
    pub ray_displacement: f64,
    /// `⟨ψ, Dψ⟩`
    pub dipole: f64,
    /// `⟨ψ, (J·ê)ψ⟩`
    pub angular: f64,
    /// `⟨Tψ, (TDT⁻¹) Tψ⟩`
    pub reversed_dipole: f64,
    /// `⟨Tψ, (J·ê) Tψ⟩`
    pub reversed_angular: f64,
}

impl EdmModel {
    /// Unit vector along the field, or `ẑ` when the field vanishes.
    pub fn axis(&self) -> [f64; 3] {
        unit_axis(self.e_field)
    }

    pub fn angular_along_axis(&self) -> ComplexMatrix {
        self.spin.along(self.axis())
    }

    /// Expectation values of `D` and `J·ê` in every eigenvector of `H`, and of
    /// the time-reversed operators in its time-reversed image.
    pub fn eigen_dipoles(&self, tol: &Tolerances) -> Result<Vec<EigenDipole>> {
        let eig = crate::linalg::herm_eig_with(&self.hamiltonian, tol.tau_zero)?;
        let j_axis = self.angular_along_axis();
        let t = &self.spin.t_conv;
        let moved_dipole = t.conjugate_operator(&self.dipole)?;
        eig.eigenvalues
            .iter()
            .zip(&eig.eigenvectors)
            .map(|(&energy, psi)| {
                let t_psi = t.apply(psi)?;
                Ok(EigenDipole {
                    energy,
                    ray_displacement: ray_displacement(t, psi, tol)?,
                    dipole: psi.expectation(&self.dipole)?.re,
                    angular: psi.expectation(&j_axis)?.re,
                    reversed_dipole: t_psi.expectation(&moved_dipole)?.re,
                    reversed_angular: t_psi.expectation(&j_axis)?.re,
                })
            })
            .collect()
    }

    /// `‖TDT⁻¹ + D‖_F`. Within one spin irrep `D ∝ J`, so the dipole is
    /// T-odd and this vanishes; a T-even dipole would have to be zero.
    pub fn dipole_parity_defect(&self) -> Result<f64> {
        let moved = self.spin.t_conv.conjugate_operator(&self.dipole)?;
        Ok((&moved + &self.dipole).frobenius_norm())
    }

    /// The constant `c` in `⟨ψ, Dψ⟩ = c⟨ψ, (J·ê)ψ⟩`, read off from the
    /// eigenvector with the largest `|⟨J·ê⟩|`. `None` when all vanish (j = 0).
    pub fn wigner_eckart_constant(&self, tol: &Tolerances) -> Result<Option<f64>> {
        let rows = self.eigen_dipoles(tol)?;
        Ok(rows
            .iter()
            .max_by(|a, b| a.angular.abs().total_cmp(&b.angular.abs()))
            .filter(|r| r.angular.abs() > 1e-9)
            .map(|r| r.dipole / r.angular))
    }
}

fn unit_axis(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n == 0.0 {
        [0.0, 0.0, 1.0]
    } else {
        [v[0] / n, v[1] / n, v[2] / n]
    }
}

pub fn edm_model(j: f64, h0: f64, g: f64, e_field: [f64; 3], d: f64) -> Result<EdmModel> {
    let spin = spin_operators(j)?;
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "dipole strength d must be positive, got {d}"
        )));
    }
    if !(h0.is_finite() && g.is_finite() && e_field.iter().all(|x| x.is_finite())) {
        return Err(Error::InvalidParameter("non-finite model parameter".into()));
    }
    let id = ComplexMatrix::identity(spin.dim());
    let hamiltonian = &id.scale_real(h0) + &spin.along(e_field).scale_real(g);
    let dipole = spin.along(unit_axis(e_field)).scale_real(d);
    Ok(EdmModel {
        spin,
        h0,
        g,
        e_field,
        d,
        hamiltonian,
        dipole,
    })
}

/// Two-level neutral-kaon oscillation in the strangeness basis (K⁰, K̄⁰),
/// with phases chosen so that plain conjugation `K` fixes both basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct KaonModel {
    pub hamiltonian: ComplexMatrix,
    pub t_conv: SymmetryTransform,
}

impl KaonModel {
    pub const STRANGENESS: [i8; 2] = [1, -1];

    pub fn k0() -> StateVector {
        StateVector::basis(2, 0)
    }

    pub fn k0_bar() -> StateVector {
        StateVector::basis(2, 1)
    }

    /// `(K⁰ + K̄⁰)/√2`
    pub fn k1() -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_real(&[s, s]).expect("finite")
    }

    /// `(K⁰ − K̄⁰)/√2`
    pub fn k2() -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_real(&[s, -s]).expect("finite")
    }

    pub fn evolution(&self, t: f64) -> ComplexMatrix {
        evolution(&self.hamiltonian, t)
    }
}

pub fn kaon_oscillation_model(m1: f64, m2: f64, w: C64) -> KaonModel {
    let hamiltonian = ComplexMatrix::from_rows(&[[C64::new(m1, 0.0), w], [w.conj(), C64::new(m2, 0.0)]]).expect("2x2");
    KaonModel {
        hamiltonian,
        t_conv: SymmetryTransform::conjugation(2).with_label("T"),
    }
}

/// `K_L → ππ` as a two-channel scattering toy in the basis (K_L, ππ).
#[derive(Debug, Clone, PartialEq)]
pub struct KaonDecay {
    pub smatrix: ComplexMatrix,
    pub cp: SymmetryTransform,
    /// CP-odd in-state.
    pub k_long: StateVector,
    /// CP-even out-state.
    pub two_pion: StateVector,
}

pub fn kaon_decay_scattering_model(eps: f64) -> Result<KaonDecay> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in [0, 1), got {eps}"
        )));
    }
    let c = (1.0 - eps * eps).sqrt();
    let smatrix = ComplexMatrix::from_real_rows(&[[c, eps], [-eps, c]])?;
    let cp = SymmetryTransform::linear("CP", ComplexMatrix::diag(&[-1.0, 1.0]))?;
    Ok(KaonDecay {
        smatrix,
        cp,
        k_long: StateVector::basis(2, 0),
        two_pion: StateVector::basis(2, 1),
    })
}

/// `(H + gHg⁻¹)/2`, which commutes with `g` whenever `g² = ±I`.
///
/// Works for linear involutions as well as antiunitaries.
pub fn symmetrize_invariant(h: &ComplexMatrix, g: &SymmetryTransform, tol: &Tolerances) -> Result<ComplexMatrix> {
    h.require_dim(g.dim())?;
    h.require_hermitian("Hamiltonian", tol.tau_zero)?;
    let class = square_class(&g.square(), tol.tau_zero);
    if class.classification == TSquare::Other {
        return Err(Error::Premise(format!(
            "{}² is not ±I (deviation {:.3e})",
            g.label, class.deviation
        )));
    }
    let moved = g.conjugate_operator(h)?;
    let sym = (h + &moved).scale_real(0.5);
    // Exact Hermiticity.
    Ok((&sym + &sym.adjoint()).scale_real(0.5))
}

/// `e^{−iG}` for seeded real symmetric `G`: satisfies `conj(S) = S⁻¹`.
pub fn t_symmetric_smatrix(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    let g = random_real_symmetric(dim, seed)?;
    let s = mat_exp(&g, C64::new(0.0, -1.0));
    // e^{−iG} is symmetric for symmetric G; remove rounding asymmetry.
    Ok((&s + &s.transpose()).scale_real(0.5))
}

/// Finite-time interaction-picture S-matrix
/// `e^{iH₀ tf} · e^{−i(H₀+V)(tf−ti)} · e^{−iH₀ ti}`.
pub fn build_s_matrix(
    h0: &ComplexMatrix,
    v: &ComplexMatrix,
    ti: f64,
    tf: f64,
    tol: &Tolerances,
) -> Result<ComplexMatrix> {
    v.require_dim(h0.dim())?;
    h0.require_hermitian("free Hamiltonian", tol.tau_zero)?;
    v.require_hermitian("interaction", tol.tau_zero)?;
    if !(ti.is_finite() && tf.is_finite() && ti <= tf) {
        return Err(Error::InvalidParameter(format!(
            "time window must satisfy ti <= tf, got [{ti}, {tf}]"
        )));
    }
    let full = h0 + v;
    let out = evolution(h0, -tf);
    let mid = evolution(&full, tf - ti);
    let inp = evolution(h0, ti);
    Ok(&(&out * &mid) * &inp)
}

/// Matrix `[[a, b], [c, d]]` helper for small fixtures.
pub fn mat2(a: C64, b: C64, c: C64, d: C64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[a, b], [c, d]]).expect("2x2")
}

/// `H = [[1, i], [−i, 1]]`: invariant under `σx·K` but not under `σx`.
pub fn cpt_link_toy() -> ComplexMatrix {
    mat2(ONE, I, -I, ONE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kabir::{kabir_check, probability_asymmetry};
    use crate::linalg::{commutator, pauli, random_hermitian};
    use crate::symmetry::invariance_margin;
    use crate::wigner::{kramers_square, wigner_principle_check};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn spin_half_is_half_pauli() {
        let s = spin_operators(0.5).unwrap();
        assert!((&s.jx - &pauli::x().scale_real(0.5)).frobenius_norm() < 1e-15);
        assert!((&s.jy - &pauli::y().scale_real(0.5)).frobenius_norm() < 1e-15);
        assert!((&s.jz - &pauli::z().scale_real(0.5)).frobenius_norm() < 1e-15);
    }

    #[test]
    fn spin_one_jz() {
        let s = spin_operators(1.0).unwrap();
        assert_eq!(s.jz, ComplexMatrix::diag(&[1.0, 0.0, -1.0]));
    }

    #[test]
    fn spin_zero_is_trivial() {
        let s = spin_operators(0.0).unwrap();
        for m in s.components() {
            assert_eq!(*m, ComplexMatrix::zeros(1));
        }
        assert_eq!(s.t_conv.unitary_part, ComplexMatrix::identity(1));
        assert!(s.t_conv.antilinear);
    }

    #[test]
    fn invalid_spin_rejected() {
        assert!(spin_operators(0.3).is_err());
        assert!(spin_operators(-0.5).is_err());
        assert!(spin_operators(f64::NAN).is_err());
    }

    #[test]
    fn spin_algebra_invariants() {
        for twice in 0..=4 {
            let s = SpinAlgebra::from_twice_j(twice).unwrap();
            let comm = commutator(&s.jx, &s.jy).unwrap();
            assert!((&comm - &s.jz.scale(I)).frobenius_norm() < 1e-10);
            for m in s.components() {
                let moved = s.t_conv.conjugate_operator(m).unwrap();
                assert!((&moved + m).frobenius_norm() < 1e-10);
            }
            let class = kramers_square(&s.t_conv, &tol()).unwrap().classification;
            let expected = if twice % 2 == 1 {
                TSquare::MinusIdentity
            } else {
                TSquare::PlusIdentity
            };
            assert_eq!(class, expected, "2j = {twice}");
        }
    }

    #[test]
    fn edm_spin_half_along_z() {
        let m = edm_model(0.5, 0.0, 1.0, [0.0, 0.0, 1.0], 1.0).unwrap();
        assert!((&m.hamiltonian - &pauli::z().scale_real(0.5)).frobenius_norm() < 1e-15);
        let v = wigner_principle_check(&m.hamiltonian, &m.spin.t_conv, 1e-8, &tol()).unwrap();
        assert!(v.is_violation());
    }

    #[test]
    fn edm_without_coupling_is_invariant() {
        let m = edm_model(0.5, 1.0, 0.0, [0.0, 0.0, 1.0], 1.0).unwrap();
        assert_eq!(m.hamiltonian, ComplexMatrix::identity(2));
        assert_eq!(invariance_margin(&m.spin.t_conv, &m.hamiltonian).unwrap().value, 0.0);
    }

    #[test]
    fn edm_permanence_spin_half() {
        let m = edm_model(0.5, 0.0, 1.0, [0.0, 0.0, 1.0], 0.7).unwrap();
        let c = m.wigner_eckart_constant(&tol()).unwrap().unwrap();
        assert!((c - 0.7).abs() < 1e-12);
        for row in m.eigen_dipoles(&tol()).unwrap() {
            assert!(row.ray_displacement > tol().tau_violation);
            assert!((row.dipole - c * row.angular).abs() < 1e-10);
            assert!((row.reversed_dipole + c * row.reversed_angular).abs() < 1e-10);
        }
        assert!(m.dipole_parity_defect().unwrap() < 1e-10);
    }

    #[test]
    fn edm_rejects_bad_parameters() {
        assert!(edm_model(0.3, 0.0, 1.0, [0.0, 0.0, 1.0], 1.0).is_err());
        assert!(edm_model(0.5, 0.0, 1.0, [0.0, 0.0, 1.0], 0.0).is_err());
    }

    #[test]
    fn kaon_real_mixing_is_t_invariant() {
        let k = kaon_oscillation_model(1.0, 1.3, C64::new(0.4, 0.0));
        assert_eq!(invariance_margin(&k.t_conv, &k.hamiltonian).unwrap().value, 0.0);
        for t in [0.3, 1.0, 4.2] {
            let u = k.evolution(t);
            let v = kabir_check(&u, &k.t_conv, &KaonModel::k0(), &KaonModel::k0_bar(), &tol()).unwrap();
            assert!(!v.is_violation());
        }
    }

    #[test]
    fn kaon_imaginary_mixing_is_t_violating() {
        let k = kaon_oscillation_model(1.0, 2.0, I);
        assert!(invariance_margin(&k.t_conv, &k.hamiltonian).unwrap().value > 0.0);
        let u = k.evolution(1.0);
        let forward = KaonModel::k0_bar().inner(&u.apply(&KaonModel::k0()).unwrap());
        let reversed = KaonModel::k0().inner(&u.apply(&KaonModel::k0_bar()).unwrap());
        // Reference from scipy.linalg.expm.
        assert!((forward - C64::new(-0.056_894_400_092_016_83, 0.802_291_828_339_935_3)).norm() < 1e-12);
        assert!((forward.norm() - reversed.norm()).abs() < 1e-12);
        assert!((forward - reversed).norm() > 1e-3);
        assert!(probability_asymmetry(&u, &KaonModel::k0(), &KaonModel::k0_bar()).unwrap() <= 1e-12);
    }

    #[test]
    fn kaon_t_fixes_strangeness_states() {
        let k = kaon_oscillation_model(0.0, 0.0, ONE);
        assert_eq!(k.t_conv.apply(&KaonModel::k0()).unwrap(), KaonModel::k0());
        assert_eq!(k.t_conv.apply(&KaonModel::k0_bar()).unwrap(), KaonModel::k0_bar());
        assert!((KaonModel::k1().inner(&KaonModel::k2())).norm() < 1e-16);
    }

    #[test]
    fn kaon_decay_model() {
        let m = kaon_decay_scattering_model(0.0).unwrap();
        assert_eq!(
            commutator(&m.cp.unitary_part, &m.smatrix).unwrap().frobenius_norm(),
            0.0
        );
        let m = kaon_decay_scattering_model(0.2).unwrap();
        let c = commutator(&m.cp.unitary_part, &m.smatrix).unwrap().frobenius_norm();
        assert!((c - 2.0 * 2f64.sqrt() * 0.2).abs() < 1e-12);
        let m = kaon_decay_scattering_model(0.999).unwrap();
        assert!(m.smatrix.unitary_deviation() <= 1e-12);
        assert!(kaon_decay_scattering_model(1.0).is_err());
        assert!(kaon_decay_scattering_model(-0.1).is_err());
    }

    #[test]
    fn symmetrize_examples() {
        let k = SymmetryTransform::conjugation(2);
        let real = ComplexMatrix::from_real_rows(&[[1.0, 0.3], [0.3, -2.0]]).unwrap();
        assert_eq!(symmetrize_invariant(&real, &k, &tol()).unwrap(), real);
        assert_eq!(
            symmetrize_invariant(&pauli::y(), &k, &tol()).unwrap(),
            ComplexMatrix::zeros(2)
        );
        let t = SymmetryTransform::antiunitary("T", pauli::i_y()).unwrap();
        let h = symmetrize_invariant(&random_hermitian(2, 5).unwrap(), &t, &tol()).unwrap();
        assert!(invariance_margin(&t, &h).unwrap().value <= 1e-12);
        assert!(h.hermitian_deviation() == 0.0);
    }

    #[test]
    fn symmetrize_rejects_generic_antiunitary() {
        let w = crate::linalg::random_unitary(3, 2).unwrap();
        let t = SymmetryTransform::antiunitary("T", w).unwrap();
        let err = symmetrize_invariant(&random_hermitian(3, 1).unwrap(), &t, &tol());
        assert!(matches!(err, Err(Error::Premise(_))));
    }

    #[test]
    fn t_symmetric_smatrix_contract() {
        let s1 = t_symmetric_smatrix(1, 4).unwrap();
        assert!((s1[(0, 0)].norm() - 1.0).abs() < 1e-15);
        for dim in 2..=5 {
            let s = t_symmetric_smatrix(dim, 9).unwrap();
            assert!((&s.conj() - &s.adjoint()).frobenius_norm() <= 1e-10);
            assert!(s.unitary_deviation() <= 1e-10);
        }
        assert!(t_symmetric_smatrix(0, 1).is_err());
    }

    #[test]
    fn s_matrix_free_evolution_is_identity() {
        let h0 = random_hermitian(3, 2).unwrap();
        let s = build_s_matrix(&h0, &ComplexMatrix::zeros(3), -1.0, 2.0, &tol()).unwrap();
        assert!((&s - &ComplexMatrix::identity(3)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn s_matrix_commuting_interaction() {
        let h0 = ComplexMatrix::diag(&[1.0, 2.0, 3.0]);
        let v = ComplexMatrix::diag(&[0.1, -0.4, 0.25]);
        let s = build_s_matrix(&h0, &v, -0.5, 1.5, &tol()).unwrap();
        let expected = evolution(&v, 2.0);
        assert!((&s - &expected).frobenius_norm() < 1e-12);
    }

    #[test]
    fn s_matrix_rejects_bad_inputs() {
        let h0 = ComplexMatrix::diag(&[1.0, 2.0]);
        assert!(build_s_matrix(&h0, &pauli::x(), 1.0, 0.0, &tol()).is_err());
        let bad = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(build_s_matrix(&h0, &bad, 0.0, 1.0, &tol()).is_err());
    }

    #[test]
    fn cpt_toy_margins() {
        let h = cpt_link_toy();
        let cpt = SymmetryTransform::antiunitary("CPT", pauli::x()).unwrap();
        assert!(invariance_margin(&cpt, &h).unwrap().value < 1e-15);
        let cp = SymmetryTransform::linear("CP", pauli::x()).unwrap();
        assert!(invariance_margin(&cp, &h).unwrap().value > 0.1);
    }
}
