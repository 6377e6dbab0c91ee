//! Markovianity analysis of staged processes: transfer-matrix tomography of
//! the prefix channels, Choi-matrix positivity, the divisibility test, and the
//! trace-distance revival witness.
//!
//! Conventions: density matrices are vectorized by stacking columns
//! (`ρ_ij` at index `i + d·j`), and the Choi matrix is the unnormalized
//! `C = Σ_ij |i><j| ⊗ M(|i><j|)` with the input factor first.

use crate::dv::DvTeleport;
use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{self, CMatrix};
use crate::metrics;
use crate::qudit::{DensityMatrix, KrausSet};
use crate::tol;

/// Matrix of a linear map acting on column-vectorized `d × d` operators.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    d: usize,
    entries: CMatrix,
}

impl TransferMatrix {
    /// Validates shape, trace preservation and Hermiticity preservation.
    pub fn new(d: usize, entries: CMatrix) -> Result<Self> {
        ensure_dim(d * d, entries.nrows())?;
        ensure_dim(d * d, entries.ncols())?;
        let t = Self { d, entries };
        let tp = t.trace_preservation_defect();
        if tp > tol::CHANNEL {
            return Err(Error::Invariant {
                what: "trace preservation",
                defect: tp,
            });
        }
        let hp = t.hermiticity_preservation_defect();
        if hp > tol::CHANNEL {
            return Err(Error::Invariant {
                what: "hermiticity preservation",
                defect: hp,
            });
        }
        Ok(t)
    }

    /// Builds the transfer matrix column by column from the images of the
    /// matrix units `|i><j|`.
    pub fn from_map<F>(d: usize, mut map: F) -> Result<Self>
    where
        F: FnMut(&CMatrix) -> Result<CMatrix>,
    {
        let mut entries = CMatrix::zeros(d * d, d * d);
        for j in 0..d {
            for i in 0..d {
                let image = map(&linalg::matrix_unit(d, i, j))?;
                ensure_dim(d, image.nrows())?;
                entries.set_column(i + d * j, &linalg::vec_columns(&image));
            }
        }
        Self::new(d, entries)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            d,
            entries: CMatrix::identity(d * d, d * d),
        }
    }

    pub fn from_kraus(set: &KrausSet) -> Result<Self> {
        ensure_dim(set.input_dim(), set.output_dim())?;
        Self::from_map(set.input_dim(), |m| set.apply_matrix(m))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn apply(&self, m: &CMatrix) -> Result<CMatrix> {
        ensure_dim(self.d, m.nrows())?;
        let v = &self.entries * linalg::vec_columns(m);
        Ok(linalg::unvec_columns(&v, self.d))
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &TransferMatrix) -> Result<TransferMatrix> {
        ensure_dim(self.d, first.d)?;
        Ok(TransferMatrix {
            d: self.d,
            entries: &self.entries * &first.entries,
        })
    }

    /// `max |M†(I) − I|`, read off the transfer matrix directly.
    pub fn trace_preservation_defect(&self) -> f64 {
        let d = self.d;
        let mut worst: f64 = 0.0;
        for j in 0..d {
            for i in 0..d {
                let col = i + d * j;
                let tr: num_complex::Complex64 =
                    (0..d).map(|k| self.entries[(k + d * k, col)]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((tr - linalg::real(want)).norm());
            }
        }
        worst
    }

    /// `max |M(|j><i|) − M(|i><j|)†|`.
    pub fn hermiticity_preservation_defect(&self) -> f64 {
        let d = self.d;
        let mut worst: f64 = 0.0;
        for j in 0..d {
            for i in 0..d {
                let a = linalg::unvec_columns(&self.entries.column(i + d * j).into_owned(), d);
                let b = linalg::unvec_columns(&self.entries.column(j + d * i).into_owned(), d);
                worst = worst.max(linalg::max_abs_diff(&b, &a.adjoint()));
            }
        }
        worst
    }
}

/// Unnormalized Choi matrix `Σ_ij |i><j| ⊗ M(|i><j|)`.
pub fn choi_of(t: &TransferMatrix) -> CMatrix {
    choi_of_matrix(&t.entries, t.d)
}

fn choi_of_matrix(t: &CMatrix, d: usize) -> CMatrix {
    // Row (i, k), column (j, l) holds M(|i><j|)_kl = T[k + d·l, i + d·j].
    CMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, k) = (r / d, r % d);
        let (j, l) = (c / d, c % d);
        t[(k + d * l, i + d * j)]
    })
}

/// Smallest eigenvalue of the Choi matrix; non-negative iff the map is CP.
pub fn cp_min_eigenvalue(t: &TransferMatrix) -> f64 {
    linalg::hermitian_eigenvalues(&choi_of(t))[0]
}

/// Transfer matrix of the map `ρ ↦ ρᵀ` (positive but not completely positive).
pub fn transpose_map(d: usize) -> TransferMatrix {
    TransferMatrix::from_map(d, |m| Ok(m.transpose()))
        .expect("transpose is trace and hermiticity preserving")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Divisible,
    NonDivisible,
    /// The intermediate equation is solvable but not uniquely, and the
    /// minimum-norm solution is not CP; another solution might be.
    RankDeficient,
}

/// Result of testing whether `total = X ∘ prefix` for some CPTP `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivisibilityReport {
    /// `‖X·T_prefix − T_total‖_F / ‖T_total‖_F` at the least-squares optimum.
    pub residual: f64,
    /// Minimum Choi eigenvalue of the recovered intermediate map, when one exists.
    pub intermediate_cp_min_eig: Option<f64>,
    pub verdict: Verdict,
    pub prefix_rank: usize,
}

/// Solves `X · T_prefix = T_total` in the least-squares sense and classifies
/// the process.
///
/// ```
/// use teleflow::nonmarkov::{divisibility_residual, transpose_map, TransferMatrix, Verdict};
///
/// let id = TransferMatrix::identity(2);
/// assert_eq!(divisibility_residual(&id, &id).unwrap().verdict, Verdict::Divisible);
/// // The transpose is reachable from the identity, but only through a non-CP map.
/// let report = divisibility_residual(&id, &transpose_map(2)).unwrap();
/// assert_eq!(report.verdict, Verdict::NonDivisible);
/// ```
pub fn divisibility_residual(
    prefix: &TransferMatrix,
    total: &TransferMatrix,
) -> Result<DivisibilityReport> {
    ensure_dim(prefix.d, total.d)?;
    let n = prefix.d * prefix.d;
    let svd = prefix.entries.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cutoff = smax * 1e-10 * n as f64;
    let prefix_rank = svd.rank(cutoff);
    let pinv = svd.pseudo_inverse(cutoff).map_err(|_| Error::Invariant {
        what: "pseudo-inverse",
        defect: f64::NAN,
    })?;
    let x = &total.entries * pinv;
    let defect = &x * &prefix.entries - &total.entries;
    let residual = defect.norm() / total.entries.norm();

    if residual > tol::DIVISIBILITY {
        return Ok(DivisibilityReport {
            residual,
            intermediate_cp_min_eig: None,
            verdict: Verdict::NonDivisible,
            prefix_rank,
        });
    }
    let min_eig = linalg::hermitian_eigenvalues(&choi_of_matrix(&x, prefix.d))[0];
    let cp = min_eig >= -tol::CHANNEL;
    let verdict = match (cp, prefix_rank == n) {
        (true, _) => Verdict::Divisible,
        (false, true) => Verdict::NonDivisible,
        (false, false) => Verdict::RankDeficient,
    };
    Ok(DivisibilityReport {
        residual,
        intermediate_cp_min_eig: Some(min_eig),
        verdict,
        prefix_rank,
    })
}

/// Transfer matrix of the teleportation process truncated after `upto_stage`
/// stages (1, 2 or 3), with `resource` on `E1 ⊗ E2` in place of `U1`.
pub fn prefix_channel(
    tele: &DvTeleport,
    resource: &DensityMatrix,
    upto_stage: usize,
) -> Result<TransferMatrix> {
    if !(1..=3).contains(&upto_stage) {
        return Err(Error::IndexOutOfRange {
            index: upto_stage,
            len: 4,
        });
    }
    TransferMatrix::from_map(tele.d(), |m| {
        tele.evolve_operator(m, Some(resource.matrix()), upto_stage)
    })
}

/// The three prefix channels of a run.
pub fn prefix_channels(tele: &DvTeleport, resource: &DensityMatrix) -> Result<[TransferMatrix; 3]> {
    Ok([
        prefix_channel(tele, resource, 1)?,
        prefix_channel(tele, resource, 2)?,
        prefix_channel(tele, resource, 3)?,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlpVerdict {
    NonMarkovian,
    Inconclusive,
}

/// Trace distance between two inputs evolved through the teleportation stages.
#[derive(Debug, Clone, PartialEq)]
pub struct BlpTrace {
    /// Distances after preparation and after each of the three stages.
    pub distances: [f64; 4],
    pub verdict: BlpVerdict,
}

/// `NonMarkovian` if the sequence ever grows by more than the channel tolerance.
pub fn blp_verdict(distances: &[f64]) -> BlpVerdict {
    if distances.windows(2).any(|w| w[1] > w[0] + tol::CHANNEL) {
        BlpVerdict::NonMarkovian
    } else {
        BlpVerdict::Inconclusive
    }
}

/// Trace distances between the principal states of two runs that differ only
/// in their input.
pub fn blp_trace(
    tele: &DvTeleport,
    resource: &DensityMatrix,
    input_a: &DensityMatrix,
    input_b: &DensityMatrix,
) -> Result<BlpTrace> {
    let a = tele.run_with_resource(input_a, resource)?;
    let b = tele.run_with_resource(input_b, resource)?;
    let mut distances = [0.0; 4];
    for (k, slot) in distances.iter_mut().enumerate() {
        *slot = metrics::trace_distance(&a.stage_states[k], &b.stage_states[k])?;
    }
    Ok(BlpTrace {
        verdict: blp_verdict(&distances),
        distances,
    })
}
