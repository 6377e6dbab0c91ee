//! Dense complex matrix helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Kronecker product; the left factor carries the slow index.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

/// Largest entrywise modulus of `a - b`. Shapes must agree.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff on mismatched shapes");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff_real(a: &RMatrix, b: &RMatrix) -> f64 {
    assert_eq!(
        a.shape(),
        b.shape(),
        "max_abs_diff_real on mismatched shapes"
    );
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    max_abs_diff(&(m.adjoint() * m), &CMatrix::identity(n, n))
}

/// Eigenvalues of a Hermitian matrix in ascending order. The input is
/// symmetrized first so tiny anti-Hermitian noise does not leak in.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-CLAMP, 0)` are clamped to zero; if the total negative
/// mass exceeds `CLAMP_MASS` the matrix is rejected as not PSD.
/// Eigenvalues at or below this are rounding noise around an exact zero. Their
/// square roots (~1e-8) would otherwise leak into fidelities of low-rank states.
pub(crate) fn eigen_noise_floor(n: usize, largest: f64) -> f64 {
    16.0 * n as f64 * f64::EPSILON * largest.max(1.0)
}

pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let negative: f64 = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l < -tol::CLAMP)
        .map(|l| -l)
        .sum();
    if negative > tol::CLAMP_MASS {
        return Err(Error::Invariant {
            what: "positive semidefiniteness",
            defect: negative,
        });
    }
    let floor = eigen_noise_floor(m.nrows(), eig.eigenvalues.amax());
    let roots = eig.eigenvalues.map(|l| {
        let l = if l <= floor { 0.0 } else { l };
        Complex64::new(l.sqrt(), 0.0)
    });
    let v = &eig.eigenvectors;
    Ok(v * CMatrix::from_diagonal(&roots) * v.adjoint())
}

/// Column-stacking vectorization: entry `(i, j)` lands at `i + n*j`.
pub fn vec_columns(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vec_columns`] for a square `n x n` matrix.
pub fn unvec_columns(v: &CVector, n: usize) -> CMatrix {
    CMatrix::from_column_slice(n, n, v.as_slice())
}

/// Matrix unit `|i><j|` of size `n`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

pub fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `exp(i * phase)`.
pub fn phase(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, phase)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_identity() {
        let i2 = CMatrix::identity(2, 2);
        assert_eq!(tensor_product(&i2, &i2), CMatrix::identity(4, 4));
    }

    #[test]
    fn kron_basis_projectors() {
        let p0 = matrix_unit(2, 0, 0);
        let p1 = matrix_unit(2, 1, 1);
        assert_eq!(tensor_product(&p0, &p1), matrix_unit(4, 1, 1));
    }

    #[test]
    fn kron_x_z() {
        let x = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let z = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
        let k = tensor_product(&x, &z);
        // Kronecker definition evaluated entry by entry.
        let mut expected = CMatrix::zeros(4, 4);
        expected[(0, 2)] = ONE;
        expected[(1, 3)] = -ONE;
        expected[(2, 0)] = ONE;
        expected[(3, 1)] = -ONE;
        assert_eq!(k, expected);
    }

    #[test]
    fn vec_roundtrip_is_column_major() {
        let m = CMatrix::from_fn(3, 3, |i, j| real((i + 10 * j) as f64));
        let v = vec_columns(&m);
        assert_eq!(v[1 + 3 * 2], real(21.0));
        assert_eq!(unvec_columns(&v, 3), m);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let a = CMatrix::from_fn(3, 3, |i, j| {
            Complex64::new((i * j) as f64, i as f64 - j as f64)
        });
        let psd = &a * a.adjoint();
        let s = psd_sqrt(&psd).unwrap();
        assert!(max_abs_diff(&(&s * &s), &psd) < 1e-10);
    }

    #[test]
    fn psd_sqrt_rejects_negative() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![real(1.0), real(-0.1)]));
        assert!(psd_sqrt(&m).is_err());
    }
}
