//! The generalized gate family: DFT-type Hadamard, controlled phase, and the
//! CNOT / SWAP gates composed from them, plus the clock and shift operators.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

use super::state::{DensityMatrix, Ket, UnitaryOp};

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}

/// `H(θ)|j> = (1/√d) Σ_i exp(i·j·θ·ı/d) |i>`. At θ = 2π this is the DFT;
/// at θ = 2dπ − 2π it is its inverse.
///
/// The matrix is unitary only for θ = 2πk with k coprime to d; other angles
/// are rejected.
///
/// ```
/// use std::f64::consts::TAU;
/// use teleflow::qudit::hadamard;
///
/// assert!(hadamard(3, TAU).is_ok());
/// assert!(hadamard(3, 3.0 * TAU).is_err());
/// ```
pub fn hadamard(d: usize, theta: f64) -> Result<UnitaryOp> {
    check_dim(d)?;
    let norm = 1.0 / (d as f64).sqrt();
    let m = CMatrix::from_fn(d, d, |i, j| {
        linalg::phase((i * j) as f64 * theta / d as f64) * norm
    });
    UnitaryOp::new(m)
}

/// `CPhase(φ)|ij> = exp(i·j·φ·ı/d)|ij>`.
pub fn cphase(d: usize, phi: f64) -> Result<UnitaryOp> {
    check_dim(d)?;
    let diag = (0..d * d).map(|k| {
        let (i, j) = (k / d, k % d);
        linalg::phase((i * j) as f64 * phi / d as f64)
    });
    let diag = nalgebra::DVector::from_iterator(d * d, diag);
    Ok(UnitaryOp::new_unchecked(CMatrix::from_diagonal(&diag)))
}

/// `CNOT(φ, θ) = [1 ⊗ H(θ)] CPhase(φ) [1 ⊗ H(θ)]`, control first.
///
/// At φ = θ = 2π this maps `|ij> → |i, −i−j mod d>`, which is the ordinary
/// CNOT for qubits.
pub fn cnot(d: usize, phi: f64, theta: f64) -> Result<UnitaryOp> {
    let h = hadamard(d, theta)?;
    let local = linalg::tensor_product(&CMatrix::identity(d, d), h.matrix());
    let mut m = &local * cphase(d, phi)?.matrix() * &local;
    // Phase sums that cancel analytically leave ~1e-17 residue; make them exact
    // zeros so the gate stays sparse.
    m.apply(|z| {
        if z.norm() < 1e-14 {
            *z = linalg::ZERO;
        }
    });
    Ok(UnitaryOp::new_unchecked(m))
}

/// Same two-qudit gate with the roles of the two qudits exchanged.
pub fn exchange_qudits(gate: &UnitaryOp, d: usize) -> Result<UnitaryOp> {
    crate::error::ensure_dim(d * d, gate.dim())?;
    let flip = |k: usize| (k % d) * d + k / d;
    let g = gate.matrix();
    let m = CMatrix::from_fn(d * d, d * d, |r, c| g[(flip(r), flip(c))]);
    Ok(UnitaryOp::new_unchecked(m))
}

/// Three CNOT(φ, θ) gates with the middle one's control and target exchanged.
pub fn swap(d: usize, phi: f64, theta: f64) -> Result<UnitaryOp> {
    let c = cnot(d, phi, theta)?;
    let middle = exchange_qudits(&c, d)?;
    let m = c.matrix() * middle.matrix() * c.matrix();
    Ok(UnitaryOp::new_unchecked(m))
}

/// Shift `X_d = Σ_i |i ⊕ 1><i|`.
pub fn pauli_x(d: usize) -> Result<UnitaryOp> {
    check_dim(d)?;
    let m = CMatrix::from_fn(d, d, |r, c| {
        if r == (c + 1) % d {
            linalg::ONE
        } else {
            linalg::ZERO
        }
    });
    Ok(UnitaryOp::new_unchecked(m))
}

/// Clock `Z_d = Σ_i exp(2πi·ı/d)|i><i|`.
pub fn pauli_z(d: usize) -> Result<UnitaryOp> {
    check_dim(d)?;
    let diag = nalgebra::DVector::from_iterator(
        d,
        (0..d).map(|i| linalg::phase(TAU * i as f64 / d as f64)),
    );
    Ok(UnitaryOp::new_unchecked(CMatrix::from_diagonal(&diag)))
}

/// `|φ> = (1/√d) Σ_i |ii>`.
pub fn bell_phi(d: usize) -> Result<Ket> {
    check_dim(d)?;
    let mut v = nalgebra::DVector::zeros(d * d);
    let a = linalg::real(1.0 / (d as f64).sqrt());
    for i in 0..d {
        v[i * d + i] = a;
    }
    Ket::new(v)
}

/// Isotropic state `p Φ + (1 − p) I/d²`; the two-qubit Werner state at d = 2.
pub fn werner(d: usize, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            domain: "[0, 1]",
        });
    }
    let phi = bell_phi(d)?.projector().into_matrix();
    let n = d * d;
    let m = phi * linalg::real(p) + CMatrix::identity(n, n) * linalg::real((1.0 - p) / n as f64);
    Ok(DensityMatrix::new_unchecked(m))
}
