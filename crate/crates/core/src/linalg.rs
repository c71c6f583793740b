//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |U^dagger U - I|`, the unitarity defect used throughout the tests.
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let n = m.ncols();
    max_abs(&(m.adjoint() * m - identity(n)))
}

/// Singular values in ascending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    s
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Right singular vector belonging to the smallest singular value, together
/// with that singular value. Phase is fixed so the largest component is real
/// and positive, which keeps eigenvectors reproducible.
pub fn smallest_singular_pair(m: &CMatrix) -> (f64, CVector) {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let (idx, smin) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    // Row `idx` of V^dagger is the conjugate of the right singular vector.
    let v: CVector = v_t.row(idx).adjoint().into_owned();
    (smin, fix_phase(v))
}

pub fn fix_phase(mut v: CVector) -> CVector {
    let norm = v.norm();
    if norm == 0.0 {
        return v;
    }
    let pivot = v
        .iter()
        .copied()
        .fold(C64::new(0.0, 0.0), |acc, z| if z.norm() > acc.norm() + 1e-12 { z } else { acc });
    let phase = pivot.conj() / pivot.norm();
    v *= phase / C64::from(norm);
    v
}

/// Eigenvalues of a general complex square matrix via the Schur form.
pub fn eigenvalues(m: &CMatrix) -> Vec<C64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let schur = nalgebra::linalg::Schur::new(m.clone());
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Solve `A X = B` by LU. Returns `None` when a pivot vanishes exactly.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Option<CMatrix> {
    if a.nrows() == 0 {
        return Some(CMatrix::zeros(0, b.ncols()));
    }
    a.clone().lu().solve(b)
}

/// Orthonormal basis of the complement of a unit vector `b`, as the last
/// `n - 1` columns of the Householder reflector mapping `b` onto the first
/// coordinate axis.
pub fn complement_basis(b: &CVector) -> CMatrix {
    let n = b.len();
    let b0 = b[0];
    let alpha = if b0.norm() > 0.0 {
        -b0 / b0.norm()
    } else {
        C64::new(-1.0, 0.0)
    };
    let mut w = b.clone();
    w[0] -= alpha;
    let wn = w.norm_squared();
    let mut h = identity(n);
    if wn > 0.0 {
        h -= (&w * w.adjoint()) * C64::from(2.0 / wn);
    }
    h.columns(1, n - 1).into_owned()
}

/// Multiply row `i` of `m` by `z` in place.
pub fn scale_row(m: &mut CMatrix, i: usize, z: C64) {
    for v in m.row_mut(i).iter_mut() {
        *v *= z;
    }
}

pub fn diag(values: &[C64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_row_slice(values))
}

pub fn outer(b: &CVector) -> CMatrix {
    b * b.adjoint()
}
