//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Matrices are stored row-major and are always square. Everything here is
//! sized for dimensions up to a few dozen, so clarity wins over blocking or
//! SIMD tricks.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::{GAP_TOL, TAU_ZERO};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries; `data.len()` must be a
    /// nonzero perfect square.
    pub fn from_row_major(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if dim * dim != data.len() {
            return Err(Error::NotSquare {
                rows: dim,
                row: 0,
                len: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite(k));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        let mut data = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row,
                    len: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(data)
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (k, &v) in values.iter().enumerate() {
            m[(k, k)] = C64::new(v, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Entrywise complex conjugate (conjugation in the computational basis).
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    /// ‖A − A†‖_F
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// ‖A†A − I‖_F
    pub fn unitary_deviation(&self) -> f64 {
        (&(&self.adjoint() * self) - &Self::identity(self.dim)).frobenius_norm()
    }

    pub fn is_hermitian(&self, tau_zero: f64) -> bool {
        self.hermitian_deviation() <= tau_zero
    }

    pub fn is_unitary(&self, tau_zero: f64) -> bool {
        self.unitary_deviation() <= tau_zero
    }

    pub fn require_hermitian(&self, what: &str, tau_zero: f64) -> Result<()> {
        let deviation = self.hermitian_deviation();
        if deviation <= tau_zero {
            Ok(())
        } else {
            Err(Error::Classification {
                what: what.to_string(),
                property: "Hermitian",
                deviation,
            })
        }
    }

    pub fn require_unitary(&self, what: &str, tau_zero: f64) -> Result<()> {
        let deviation = self.unitary_deviation();
        if deviation <= tau_zero {
            Ok(())
        } else {
            Err(Error::Classification {
                what: what.to_string(),
                property: "unitary",
                deviation,
            })
        }
    }

    pub fn require_dim(&self, expected: usize) -> Result<()> {
        if self.dim == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.dim,
            })
        }
    }

    /// Matrix product with a dimension check.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        rhs.require_dim(self.dim)?;
        Ok(self * rhs)
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        v.require_dim(self.dim)?;
        let n = self.dim;
        let amps = (0..n)
            .map(|i| self.row(i).iter().zip(v.amplitudes()).map(|(a, b)| a * b).sum())
            .collect();
        Ok(StateVector { amps })
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (n, m) = (self.dim, rhs.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// Operators panic on dimension mismatch, like slices do on bad indices.
// Use `try_mul` or the checked free functions at API boundaries.

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.dim)
            .map(|i| self.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(deserializer)?;
        let rows: Vec<Vec<C64>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|[re, im]| C64::new(re, im)).collect())
            .collect();
        ComplexMatrix::from_rows(&rows).map_err(de::Error::custom)
    }
}

/// Complex state vector. Normalization is not enforced by the type; call
/// [`StateVector::normalize`] or check [`StateVector::norm`].
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if let Some(k) = amps.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite(k));
        }
        Ok(Self { amps })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// `k`-th computational basis vector.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut amps = vec![ZERO; dim];
        amps[k] = ONE;
        Self { amps }
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::InvalidParameter("cannot normalize the zero vector".into()));
        }
        for z in &mut self.amps {
            *z /= n;
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self, tau_zero: f64) -> bool {
        (self.norm() - 1.0).abs() <= tau_zero
    }

    pub fn require_normalized(&self, what: &str, tau_zero: f64) -> Result<()> {
        let deviation = (self.norm() - 1.0).abs();
        if deviation <= tau_zero {
            Ok(())
        } else {
            Err(Error::Classification {
                what: what.to_string(),
                property: "normalized",
                deviation,
            })
        }
    }

    pub fn require_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }

    /// ⟨self, other⟩, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn conj(&self) -> Self {
        Self {
            amps: self.amps.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            amps: self.amps.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector difference dimension mismatch");
        Self {
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector sum dimension mismatch");
        Self {
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
        }
    }

    /// ⟨self, A self⟩
    pub fn expectation(&self, a: &ComplexMatrix) -> Result<C64> {
        Ok(self.inner(&a.apply(self)?))
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let amps: Vec<[f64; 2]> = self.amps.iter().map(|z| [z.re, z.im]).collect();
        amps.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let amps = Vec::<[f64; 2]>::deserialize(deserializer)?;
        StateVector::new(amps.into_iter().map(|[re, im]| C64::new(re, im)).collect()).map_err(de::Error::custom)
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<StateVector>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Σ λ_k v_k v_k†
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let a = v.amplitudes();
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += a[i] * a[j].conj() * *lambda;
                }
            }
        }
        out
    }

    /// Σ f(λ_k) v_k v_k†
    pub fn spectral_function(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let fl = f(*lambda);
            let a = v.amplitudes();
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += a[i] * a[j].conj() * fl;
                }
            }
        }
        out
    }
}

/// `AB − BA`
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    b.require_dim(a.dim())?;
    Ok(&(a * b) - &(b * a))
}

const TAYLOR_DEGREE: usize = 18;
const SCALED_NORM_TARGET: f64 = 0.5;

/// `e^{scale·A}` by scaling and squaring around a degree-18 Taylor core.
///
/// The argument is halved until its 1-norm is at most 1/2, where the Taylor
/// remainder is below 1e-22, then squared back up.
pub fn mat_exp(a: &ComplexMatrix, scale: C64) -> ComplexMatrix {
    let n = a.dim();
    let b = a.scale(scale);
    let norm = b.one_norm();
    let squarings = if norm > SCALED_NORM_TARGET {
        (norm / SCALED_NORM_TARGET).log2().ceil() as u32
    } else {
        0
    };
    let b = b.scale_real(0.5f64.powi(squarings as i32));

    // Horner: I + B(I + B/2(I + B/3(...)))
    let id = ComplexMatrix::identity(n);
    let mut acc = id.clone();
    for k in (1..=TAYLOR_DEGREE).rev() {
        acc = &id + &(&b * &acc).scale_real(1.0 / k as f64);
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}

/// `e^{−itH}`
pub fn evolution(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    mat_exp(h, C64::new(0.0, -t))
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Eigenvalues ascend. Within a cluster of (numerically) equal eigenvalues the
/// vectors are re-orthonormalized in index order, and every vector is phased
/// so that its largest-magnitude component is real and positive.
pub fn herm_eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    herm_eig_with(a, TAU_ZERO)
}

pub fn herm_eig_with(a: &ComplexMatrix, tau_zero: f64) -> Result<EigenDecomposition> {
    a.require_hermitian("matrix", tau_zero)?;
    let n = a.dim();
    // Work on the exactly Hermitian part.
    let mut m = (a + &a.adjoint()).scale_real(0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * 1e-2 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].re.total_cmp(&m[(y, y)].re).then(x.cmp(&y)));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| m[(k, k)].re).collect();
    let mut eigenvectors: Vec<StateVector> = order
        .iter()
        .map(|&k| StateVector {
            amps: (0..n).map(|i| v[(i, k)]).collect(),
        })
        .collect();

    canonicalize_clusters(&eigenvalues, &mut eigenvectors);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn jacobi_rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let g = m[(p, q)];
    let abs_g = g.norm();
    if abs_g == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Negligible against both diagonal entries: rotating would only add noise.
    if abs_g < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[(p, q)] = ZERO;
        m[(q, p)] = ZERO;
        return;
    }
    let phase = g / abs_g;
    let tau = (aqq - app) / (2.0 * abs_g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let pc = phase.conj();
    let n = m.dim();

    // A ← A J, with J = [[c, s], [−s·ē, c·ē]] on columns (p, q).
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * c - akq * pc * s;
        m[(k, q)] = akp * s + akq * pc * c;
    }
    // A ← J† A
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = apk * c - aqk * phase * s;
        m[(q, k)] = apk * s + aqk * phase * c;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * pc * s;
        v[(k, q)] = vkp * s + vkq * pc * c;
    }
}

fn canonicalize_clusters(values: &[f64], vectors: &mut [StateVector]) {
    let n = values.len();
    if n == 0 {
        return;
    }
    let range = values[n - 1] - values[0];
    let gap = GAP_TOL * range.max(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] <= gap {
            end += 1;
        }
        // Modified Gram–Schmidt in index order.
        for k in start..end {
            for prev in start..k {
                let (head, tail) = vectors.split_at_mut(k);
                let overlap = head[prev].inner(&tail[0]);
                tail[0] = tail[0].sub(&head[prev].scale(overlap));
            }
            let norm = vectors[k].norm();
            vectors[k] = vectors[k].scale(C64::new(1.0 / norm, 0.0));
        }
        start = end;
    }
    for v in vectors.iter_mut() {
        fix_phase(v);
    }
}

/// Rotates `v` so that its largest-magnitude component (first one, up to
/// rounding) is real and positive.
fn fix_phase(v: &mut StateVector) {
    let max = v.amps.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v.amps.iter().position(|z| z.norm() >= max * (1.0 - 1e-10)).unwrap_or(0);
    let z = v.amps[pivot];
    let rot = z.conj() / z.norm();
    for a in &mut v.amps {
        *a *= rot;
    }
    v.amps[pivot] = C64::new(v.amps[pivot].norm(), 0.0);
}

const STREAM_UNITARY: u64 = 1;
const STREAM_HERMITIAN: u64 = 2;
const STREAM_REAL_SYMMETRIC: u64 = 3;
const STREAM_STATE: u64 = 4;

fn seeded(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Matrix of independent standard complex Gaussians (real and imaginary
/// parts each N(0, 1/2)).
pub fn gaussian_matrix(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let data = (0..dim * dim)
        .map(|_| C64::new(gaussian(rng) * s, gaussian(rng) * s))
        .collect();
    ComplexMatrix { dim, data }
}

/// Haar-distributed unitary: Gram–Schmidt on the columns of a complex
/// Gaussian matrix (the R factor comes out with a positive diagonal).
pub fn random_unitary_with(dim: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    let g = gaussian_matrix(dim, rng);
    let mut cols: Vec<Vec<C64>> = (0..dim).map(|j| (0..dim).map(|i| g[(i, j)]).collect()).collect();
    for k in 0..dim {
        // Two passes keep orthogonality at machine precision.
        for _ in 0..2 {
            for prev in 0..k {
                let overlap: C64 = cols[prev].iter().zip(&cols[k]).map(|(a, b)| a.conj() * b).sum();
                let (head, tail) = cols.split_at_mut(k);
                for (x, y) in tail[0].iter_mut().zip(&head[prev]) {
                    *x -= overlap * y;
                }
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut cols[k] {
            *x /= norm;
        }
    }
    let mut u = ComplexMatrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    Ok(u)
}

pub fn random_unitary(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    random_unitary_with(dim, &mut seeded(seed, STREAM_UNITARY))
}

/// `(G + G†)/2` for a complex Gaussian `G`.
pub fn random_hermitian_with(dim: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    let g = gaussian_matrix(dim, rng);
    let mut h = (&g + &g.adjoint()).scale_real(0.5);
    // Make the diagonal exactly real.
    for k in 0..dim {
        h[(k, k)].im = 0.0;
    }
    Ok(h)
}

pub fn random_hermitian(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    random_hermitian_with(dim, &mut seeded(seed, STREAM_HERMITIAN))
}

/// Real symmetric Gaussian matrix `(G + Gᵀ)/2`.
pub fn random_real_symmetric_with(dim: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in i..dim {
            let x = gaussian(rng);
            m[(i, j)] = C64::new(x, 0.0);
            m[(j, i)] = C64::new(x, 0.0);
        }
    }
    Ok(m)
}

pub fn random_real_symmetric(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    random_real_symmetric_with(dim, &mut seeded(seed, STREAM_REAL_SYMMETRIC))
}

pub fn random_state_with(dim: usize, rng: &mut impl Rng) -> Result<StateVector> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    let amps = (0..dim).map(|_| C64::new(gaussian(rng), gaussian(rng))).collect();
    StateVector { amps }.normalize()
}

pub fn random_state(dim: usize, seed: u64) -> Result<StateVector> {
    random_state_with(dim, &mut seeded(seed, STREAM_STATE))
}

/// A deterministic generator for property suites.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Pauli matrices and friends.
pub mod pauli {
    use super::{ComplexMatrix, C64, I, ONE, ZERO};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[[ZERO, -I], [I, ZERO]]).unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::diag(&[1.0, -1.0])
    }

    /// `iσy = [[0, 1], [−1, 0]]`, the unitary part of spin-½ time reversal.
    pub fn i_y() -> ComplexMatrix {
        y().scale(I)
    }

    pub fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }
}
