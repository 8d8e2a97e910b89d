//! Brute-force reference arithmetic for the integration tests. Nothing here
//! calls back into the library's own operator algebra.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use tvd::{ComplexMatrix, StateVector, SymmetryTransform};

pub type Mat = Vec<Vec<C>>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn from_lib(m: &ComplexMatrix) -> Mat {
    let n = m.dim();
    (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect()
}

pub fn vec_of(s: &StateVector) -> Vec<C> {
    s.amplitudes().to_vec()
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect())
        .collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn sub(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn scale(a: &Mat, f: C) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * f).collect()).collect()
}

pub fn conj(a: &Mat) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x.conj()).collect()).collect()
}

pub fn dagger(a: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn frob(a: &Mat) -> f64 {
    a.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn mat_vec(a: &Mat, v: &[C]) -> Vec<C> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// `⟨a, b⟩`, antilinear in `a`.
pub fn braket(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vdist(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// `g A g⁻¹` from the raw unitary part.
pub fn moved(g: &SymmetryTransform, a: &Mat) -> Mat {
    let u = from_lib(&g.unitary_part);
    let a = if g.antilinear { conj(a) } else { a.clone() };
    mul(&mul(&u, &a), &dagger(&u))
}

pub fn apply(g: &SymmetryTransform, v: &[C]) -> Vec<C> {
    let u = from_lib(&g.unitary_part);
    let v: Vec<C> = if g.antilinear {
        v.iter().map(|x| x.conj()).collect()
    } else {
        v.to_vec()
    };
    mat_vec(&u, &v)
}

/// `‖gAg⁻¹ − A‖_F / max(1, ‖A‖_F)`
pub fn commutant_margin(g: &SymmetryTransform, a: &ComplexMatrix) -> f64 {
    let a = from_lib(a);
    frob(&sub(&moved(g, &a), &a)) / frob(&a).max(1.0)
}

/// `e^{zA}` by a plain Taylor sum with repeated squaring; adequate for the
/// small norms used in the tests.
pub fn expm(a: &Mat, z: C) -> Mat {
    let n = a.len();
    let norm = frob(a) * z.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let x = scale(a, z / 2f64.powi(squarings));
    let mut term = identity(n);
    let mut sum = identity(n);
    for k in 1..40 {
        term = scale(&mul(&term, &x), c(1.0 / k as f64, 0.0));
        sum = add(&sum, &term);
    }
    for _ in 0..squarings {
        sum = mul(&sum, &sum);
    }
    sum
}

/// Spin-j matrices in the basis `m = j, j−1, …, −j` from the ladder formula.
pub fn spin_matrices(twice_j: u32) -> [Mat; 3] {
    let j = twice_j as f64 / 2.0;
    let n = twice_j as usize + 1;
    let m = |k: usize| j - k as f64;
    let mut jp = vec![vec![c(0.0, 0.0); n]; n];
    for k in 1..n {
        // ⟨m+1| J₊ |m⟩ with |m⟩ = index k, |m+1⟩ = index k−1.
        let mk = m(k);
        jp[k - 1][k] = c((j * (j + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
    }
    let jm = dagger(&jp);
    let jx = scale(&add(&jp, &jm), c(0.5, 0.0));
    let jy = scale(&sub(&jp, &jm), c(0.0, -0.5));
    let jz = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| if a == b { c(m(a), 0.0) } else { c(0.0, 0.0) })
                .collect()
        })
        .collect();
    [jx, jy, jz]
}
