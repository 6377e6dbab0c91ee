//! Seedable random states and unitaries for tests and sweeps.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{CMatrix, CVector};
use crate::qudit::{DensityMatrix, Ket, SystemLayout, UnitaryOp};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state: a normalized complex Gaussian vector.
pub fn haar_ket<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Ket> {
    Ket::normalized(CVector::from_fn(dim, |_, _| gaussian(rng)))
}

/// Random mixed state: reduced state of a Haar-random pure state on `dim × dim`.
pub fn random_mixed<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityMatrix> {
    let joint = haar_ket(dim * dim, rng)?.projector();
    let layout = SystemLayout::new(vec![dim, dim])?;
    let reduced = layout.partial_trace_matrix(joint.matrix(), &[0])?;
    // Symmetrize away rounding before validation.
    DensityMatrix::new((&reduced + reduced.adjoint()) * Complex64::new(0.5, 0.0))
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<UnitaryOp> {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CVector::from_fn(dim, |i, _| {
        let d = r[(i, i)];
        if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        }
    });
    UnitaryOp::new(q * CMatrix::from_diagonal(&phases))
}
