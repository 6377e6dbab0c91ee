//! Distinguishability and entanglement quantifiers.

use num_complex::Complex64;

use crate::error::{ensure_dim, Error, Result};
use crate::gaussian::CovMatrix;
use crate::linalg::{self, CMatrix};
use crate::qudit::DensityMatrix;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Fidelity,
    TraceDistance,
    Eof,
}

/// A scalar figure of merit tagged with what it measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricValue {
    pub value: f64,
    pub kind: MetricKind,
}

impl MetricValue {
    /// Checks the range invariant of the kind.
    pub fn new(kind: MetricKind, value: f64) -> Result<Self> {
        let ok = match kind {
            MetricKind::Fidelity | MetricKind::TraceDistance => {
                (0.0..=1.0 + tol::CHANNEL).contains(&value)
            }
            MetricKind::Eof => value >= -1e-12,
        };
        if ok && value.is_finite() {
            Ok(Self { value, kind })
        } else {
            Err(Error::Invariant {
                what: "metric range",
                defect: value,
            })
        }
    }
}

/// `(tr √(√ρ σ √ρ))²`.
pub fn uhlmann_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    ensure_dim(rho.dim(), sigma.dim())?;
    let root = linalg::psd_sqrt(rho.matrix())?;
    let inner = &root * sigma.matrix() * &root;
    let negative: f64 = linalg::hermitian_eigenvalues(&inner)
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
    let spectrum = linalg::hermitian_eigenvalues(&inner);
    let floor = linalg::eigen_noise_floor(
        spectrum.len(),
        spectrum.iter().fold(0.0, |a, l| a.max(l.abs())),
    );
    let tr: f64 = spectrum
        .iter()
        .filter(|&&l| l > floor)
        .map(|l| l.sqrt())
        .sum();
    Ok((tr * tr).min(1.0))
}

/// Fidelity of two zero-mean single-mode Gaussian states,
/// `2 / (√(μ + ν) − √ν)` with `μ = det(Vi + Vj)` and `ν = (det Vi − 1)(det Vj − 1)`.
pub fn gaussian_fidelity_1mode(vi: &CovMatrix, vj: &CovMatrix) -> Result<f64> {
    for v in [vi, vj] {
        if v.modes() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: v.modes(),
            });
        }
    }
    let det = |m: &crate::linalg::RMatrix| m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let mu = det(&(vi.matrix() + vj.matrix()));
    // Physical single-mode states have det ≥ 1; clip rounding below that.
    let nu = ((det(vi.matrix()) - 1.0) * (det(vj.matrix()) - 1.0)).max(0.0);
    Ok(2.0 / ((mu + nu).sqrt() - nu.sqrt()))
}

/// `½ Σ |λ_i(ρ − σ)|`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    ensure_dim(rho.dim(), sigma.dim())?;
    let diff = rho.matrix() - sigma.matrix();
    Ok(0.5
        * linalg::hermitian_eigenvalues(&diff)
            .iter()
            .map(|l| l.abs())
            .sum::<f64>())
}

/// Binary entropy in bits with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Two-qubit concurrence `max(0, λ1 − λ2 − λ3 − λ4)`, with `λ` the decreasing
/// square roots of the spectrum of `√ρ ρ̃ √ρ`, `ρ̃ = (Y⊗Y) ρ* (Y⊗Y)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    ensure_dim(4, rho.dim())?;
    let i = Complex64::new(0.0, 1.0);
    let zero = Complex64::new(0.0, 0.0);
    let y = CMatrix::from_row_slice(2, 2, &[zero, -i, i, zero]);
    let yy = linalg::tensor_product(&y, &y);
    let flipped = &yy * rho.matrix().conjugate() * &yy;
    let root = linalg::psd_sqrt(rho.matrix())?;
    let r = &root * flipped * &root;
    let spectrum = linalg::hermitian_eigenvalues(&r);
    let floor = linalg::eigen_noise_floor(4, spectrum.iter().fold(0.0, |a, l| a.max(l.abs())));
    let mut lambdas: Vec<f64> = spectrum
        .iter()
        .map(|&l| if l > floor { l.sqrt() } else { 0.0 })
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Entanglement of formation of a two-qubit state from its concurrence.
pub fn eof_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    let c = concurrence(rho)?;
    Ok(binary_entropy((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0))
}

/// Entanglement of formation of a two-mode squeezed vacuum,
/// `cosh²r log₂ cosh²r − sinh²r log₂ sinh²r`.
pub fn eof_tmsv(r: f64) -> Result<f64> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain {
            name: "r",
            value: r,
            domain: "r >= 0",
        });
    }
    let c2 = r.cosh().powi(2);
    let s2 = r.sinh().powi(2);
    let xlogx = |x: f64| if x == 0.0 { 0.0 } else { x * x.log2() };
    Ok(xlogx(c2) - xlogx(s2))
}
