use std::fmt;

use num_complex::Complex64;

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::tol;

/// Normalized pure state vector.
#[derive(Clone, PartialEq)]
pub struct Ket {
    amplitudes: CVector,
}

impl Ket {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        let defect = (amplitudes.norm() - 1.0).abs();
        if defect > tol::CONSTRUCT {
            return Err(Error::Invariant {
                what: "ket normalization",
                defect,
            });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales an arbitrary nonzero vector to unit norm.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let n = amplitudes.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Invariant {
                what: "ket normalization",
                defect: 1.0,
            });
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(n),
        })
    }

    /// Computational basis state `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut v = CVector::zeros(dim);
        v[index] = linalg::ONE;
        Ok(Self { amplitudes: v })
    }

    /// Uniform superposition `(1/√d) Σ|i>`.
    pub fn plus(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        let a = linalg::real(1.0 / (dim as f64).sqrt());
        Ok(Self {
            amplitudes: CVector::from_element(dim, a),
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &Ket) -> Ket {
        Ket {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        }
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            entries: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Ket) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

impl fmt::Debug for Ket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Ket")
            .field(&self.amplitudes.as_slice())
            .finish()
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
}

impl DensityMatrix {
    /// Validates hermiticity, trace and positivity before wrapping `entries`.
    pub fn new(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        let herm = linalg::hermiticity_defect(&entries);
        if herm > tol::CONSTRUCT {
            return Err(Error::Invariant {
                what: "density matrix hermiticity",
                defect: herm,
            });
        }
        let tr = entries.trace();
        let trace_defect = (tr - linalg::ONE).norm();
        if trace_defect > tol::CONSTRUCT {
            return Err(Error::Invariant {
                what: "density matrix unit trace",
                defect: trace_defect,
            });
        }
        let min = linalg::hermitian_eigenvalues(&entries)[0];
        if min < -tol::CONSTRUCT {
            return Err(Error::Invariant {
                what: "density matrix positivity",
                defect: -min,
            });
        }
        Ok(Self { entries })
    }

    /// Wraps a matrix known to be a state, e.g. the unitary image of a valid state.
    pub(crate) fn new_unchecked(entries: CMatrix) -> Self {
        Self { entries }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self {
            entries: CMatrix::identity(dim, dim) * linalg::real(1.0 / dim as f64),
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            entries: linalg::tensor_product(&self.entries, &other.entries),
        }
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        // tr(ρρ) = Σ |ρ_ij|² for Hermitian ρ
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.entries)
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &UnitaryOp) -> Result<DensityMatrix> {
        ensure_dim(self.dim(), u.dim())?;
        Ok(DensityMatrix {
            entries: &u.entries * &self.entries * u.entries.adjoint(),
        })
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix{}", self.entries)
    }
}

/// Square matrix with `U†U = I`.
#[derive(Clone, PartialEq)]
pub struct UnitaryOp {
    entries: CMatrix,
}

impl UnitaryOp {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        let defect = linalg::unitarity_defect(&entries);
        if defect > tol::CONSTRUCT {
            return Err(Error::Invariant {
                what: "unitarity",
                defect,
            });
        }
        Ok(Self { entries })
    }

    pub(crate) fn new_unchecked(entries: CMatrix) -> Self {
        Self { entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn dagger(&self) -> UnitaryOp {
        UnitaryOp {
            entries: self.entries.adjoint(),
        }
    }

    /// `self · other`, i.e. `other` acts first.
    pub fn compose(&self, other: &UnitaryOp) -> Result<UnitaryOp> {
        ensure_dim(self.dim(), other.dim())?;
        Ok(UnitaryOp {
            entries: &self.entries * &other.entries,
        })
    }

    pub fn tensor(&self, other: &UnitaryOp) -> UnitaryOp {
        UnitaryOp {
            entries: linalg::tensor_product(&self.entries, &other.entries),
        }
    }

    pub fn apply(&self, ket: &Ket) -> Result<Ket> {
        ensure_dim(self.dim(), ket.dim())?;
        Ok(Ket {
            amplitudes: &self.entries * &ket.amplitudes,
        })
    }

    pub fn unitarity_defect(&self) -> f64 {
        linalg::unitarity_defect(&self.entries)
    }
}

impl fmt::Debug for UnitaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitaryOp{}", self.entries)
    }
}
