use num_complex::Complex64;

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tol;

use super::layout::SystemLayout;
use super::state::{DensityMatrix, Ket, UnitaryOp};

/// Operator-sum representation `ρ ↦ Σ F ρ F†` with `Σ F†F = I`.
#[derive(Debug, Clone)]
pub struct KrausSet {
    ops: Vec<CMatrix>,
}

impl KrausSet {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let first = ops.first().ok_or(Error::EmptySelection)?;
        let (dout, din) = first.shape();
        let mut sum = CMatrix::zeros(din, din);
        for f in &ops {
            ensure_dim(dout, f.nrows())?;
            ensure_dim(din, f.ncols())?;
            sum += f.adjoint() * f;
        }
        let defect = linalg::max_abs_diff(&sum, &CMatrix::identity(din, din));
        if defect > tol::CHANNEL {
            return Err(Error::Invariant {
                what: "Kraus completeness",
                defect,
            });
        }
        Ok(Self { ops })
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn input_dim(&self) -> usize {
        self.ops[0].ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.ops[0].nrows()
    }

    /// Applies the map to any square matrix of the input dimension.
    pub fn apply_matrix(&self, m: &CMatrix) -> Result<CMatrix> {
        ensure_dim(self.input_dim(), m.nrows())?;
        let mut out = CMatrix::zeros(self.output_dim(), self.output_dim());
        for f in &self.ops {
            out += f * m * f.adjoint();
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.apply_matrix(rho.matrix())
            .map(DensityMatrix::new_unchecked)
    }

    /// Depolarizing map `ρ ↦ (1 − w)ρ + w·I/d` as a Kraus set built from the
    /// d² Weyl operators `X^a Z^b`.
    pub fn depolarizing(d: usize, weight: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::Domain {
                name: "weight",
                value: weight,
                domain: "[0, 1]",
            });
        }
        let x = super::gates::pauli_x(d)?;
        let z = super::gates::pauli_z(d)?;
        let n = (d * d) as f64;
        let mut ops = Vec::with_capacity(d * d);
        let mut xa = CMatrix::identity(d, d);
        for a in 0..d {
            let mut w = xa.clone();
            for b in 0..d {
                let p = if a == 0 && b == 0 {
                    1.0 - weight + weight / n
                } else {
                    weight / n
                };
                ops.push(&w * linalg::real(p.sqrt()));
                w *= z.matrix();
            }
            xa = x.matrix() * xa;
        }
        Self::new(ops)
    }
}

/// Kraus operators `F_k = (I ⊗ <k|) U (I ⊗ |env>)` of the channel
/// `ρ ↦ tr_E[U (ρ ⊗ env) U†]`.
///
/// The first subsystem of `layout` is the system; the rest form the environment.
pub fn kraus_from_stinespring(u: &UnitaryOp, env: &Ket, layout: &SystemLayout) -> Result<KrausSet> {
    if layout.len() < 2 {
        return Err(Error::EmptySelection);
    }
    let ds = layout.dims()[0];
    let de: usize = layout.dims()[1..].iter().product();
    ensure_dim(layout.total_dim(), u.dim())?;
    ensure_dim(de, env.dim())?;
    let um = u.matrix();
    let e = env.amplitudes();
    let ops = (0..de)
        .map(|k| {
            CMatrix::from_fn(ds, ds, |i, j| {
                (0..de).fold(Complex64::new(0.0, 0.0), |acc, m| {
                    acc + um[(i * de + k, j * de + m)] * e[m]
                })
            })
        })
        .filter(|f| f.iter().any(|z| z.norm() > 0.0))
        .collect();
    KrausSet::new(ops)
}

pub fn apply_kraus(set: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    set.apply(rho)
}

/// `Σ p_i U_i ρ U_i†`.
pub fn apply_mixed_unitary(
    probs: &[f64],
    unitaries: &[UnitaryOp],
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    ensure_dim(probs.len(), unitaries.len())?;
    if let Some(&p) = probs.iter().find(|&&p| !(0.0..=1.0).contains(&p)) {
        return Err(Error::Domain {
            name: "probability",
            value: p,
            domain: "[0, 1]",
        });
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > tol::CONSTRUCT {
        return Err(Error::Invariant {
            what: "probability normalization",
            defect: (total - 1.0).abs(),
        });
    }
    let mut out = CMatrix::zeros(rho.dim(), rho.dim());
    for (p, u) in probs.iter().zip(unitaries) {
        ensure_dim(rho.dim(), u.dim())?;
        out += u.matrix() * rho.matrix() * u.matrix().adjoint() * linalg::real(*p);
    }
    Ok(DensityMatrix::new_unchecked(out))
}
