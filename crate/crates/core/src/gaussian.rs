//! Zero-mean Gaussian states as covariance matrices, symplectic transforms,
//! and the three-stage all-optical teleportation.
//!
//! Quadratures are ordered `x₁, p₁, …, x_n, p_n` and the vacuum has covariance
//! `I₂`. The protocol runs on three modes `(S, E1, E2)`:
//!
//! 1. a two-mode squeezer of gain `g1` on `(E1, E2)` prepares the resource,
//! 2. a two-mode squeezer of gain `g2` on `(S, E1)` amplifies, then `E1` is discarded,
//! 3. a beam splitter of transmissivity `1/g2` on `(S, E2)` recombines, then `E2` is discarded.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{self, RMatrix};
use crate::tol;

/// Gain used to stand in for an infinitely squeezed resource.
pub const IDEAL_G1: f64 = 1e6;

/// Standard symplectic form `⊕ [[0, 1], [−1, 0]]` on `modes` modes.
pub fn symplectic_form(modes: usize) -> RMatrix {
    let mut omega = RMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

fn domain(name: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        domain,
    }
}

/// Covariance matrix of a zero-mean Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix {
    entries: RMatrix,
}

impl CovMatrix {
    /// Validates shape, symmetry and the uncertainty principle `V + iΩ ≥ 0`.
    pub fn new(entries: RMatrix) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 || !entries.nrows().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows() + entries.nrows() % 2,
                found: entries.ncols(),
            });
        }
        let asym = linalg::max_abs_diff_real(&entries, &entries.transpose());
        if asym > tol::SYMMETRIC * entries.amax().max(1.0) {
            return Err(Error::Invariant {
                what: "covariance symmetry",
                defect: asym,
            });
        }
        let cov = Self { entries };
        let min = cov.physicality_margin();
        if min < -cov.physicality_slack() {
            return Err(Error::Invariant {
                what: "covariance physicality",
                defect: -min,
            });
        }
        Ok(cov)
    }

    /// `n`-mode vacuum, the identity.
    pub fn vacuum(modes: usize) -> Self {
        Self {
            entries: RMatrix::identity(2 * modes, 2 * modes),
        }
    }

    /// Single-mode thermal state `v·I₂`, `v ≥ 1`.
    pub fn thermal(v: f64) -> Result<Self> {
        if !(v >= 1.0 && v.is_finite()) {
            return Err(domain("v", v, "v >= 1"));
        }
        Ok(Self {
            entries: RMatrix::identity(2, 2) * v,
        })
    }

    pub fn modes(&self) -> usize {
        self.entries.nrows() / 2
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.entries
    }

    /// Smallest eigenvalue of `V + iΩ`; non-negative for physical states.
    pub fn physicality_margin(&self) -> f64 {
        let omega = symplectic_form(self.modes());
        let m = DMatrix::from_fn(self.entries.nrows(), self.entries.ncols(), |i, j| {
            Complex64::new(self.entries[(i, j)], omega[(i, j)])
        });
        linalg::hermitian_eigenvalues(&m)[0]
    }

    fn physicality_slack(&self) -> f64 {
        tol::PHYSICAL.max(tol::PHYSICAL_REL * self.entries.amax())
    }

    /// Block-diagonal composition `self ⊕ other`.
    pub fn direct_sum(&self, other: &CovMatrix) -> CovMatrix {
        let (a, b) = (self.entries.nrows(), other.entries.nrows());
        let mut m = RMatrix::zeros(a + b, a + b);
        m.view_mut((0, 0), (a, a)).copy_from(&self.entries);
        m.view_mut((a, a), (b, b)).copy_from(&other.entries);
        CovMatrix { entries: m }
    }

    /// Reduced covariance of the modes in `keep` (kept in ascending order).
    pub fn ptrace_modes(&self, keep: &[usize]) -> Result<CovMatrix> {
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        if kept.is_empty() {
            return Err(Error::EmptySelection);
        }
        for (n, &k) in kept.iter().enumerate() {
            if k >= self.modes() {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    len: self.modes(),
                });
            }
            if n > 0 && kept[n - 1] == k {
                return Err(Error::RepeatedIndex(k));
            }
        }
        let idx: Vec<usize> = kept.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        let m = RMatrix::from_fn(idx.len(), idx.len(), |i, j| self.entries[(idx[i], idx[j])]);
        Ok(CovMatrix { entries: m })
    }

    /// `Σ V Σᵀ`, checked for physicality.
    pub fn transform(&self, op: &SymplecticOp) -> Result<CovMatrix> {
        ensure_dim(self.modes(), op.modes())?;
        let m = &op.entries * &self.entries * op.entries.transpose();
        let out = CovMatrix {
            entries: (&m + m.transpose()) * 0.5,
        };
        let margin = out.physicality_margin();
        if margin < -out.physicality_slack() {
            return Err(Error::Invariant {
                what: "covariance physicality",
                defect: -margin,
            });
        }
        Ok(out)
    }
}

/// Free-function form of [`CovMatrix::direct_sum`].
pub fn direct_sum(a: &CovMatrix, b: &CovMatrix) -> CovMatrix {
    a.direct_sum(b)
}

/// Free-function form of [`CovMatrix::ptrace_modes`].
pub fn ptrace_modes(v: &CovMatrix, keep: &[usize]) -> Result<CovMatrix> {
    v.ptrace_modes(keep)
}

/// Real `2n × 2n` matrix with `S Ω Sᵀ = Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticOp {
    entries: RMatrix,
}

impl SymplecticOp {
    pub fn new(entries: RMatrix) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 || !entries.nrows().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows() + entries.nrows() % 2,
                found: entries.ncols(),
            });
        }
        let op = Self { entries };
        let defect = op.symplectic_defect();
        if defect > tol::CONSTRUCT {
            return Err(Error::Invariant {
                what: "symplectic condition",
                defect,
            });
        }
        Ok(op)
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            entries: RMatrix::identity(2 * modes, 2 * modes),
        }
    }

    pub fn modes(&self) -> usize {
        self.entries.nrows() / 2
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.entries
    }

    /// `max |S Ω Sᵀ − Ω|`.
    pub fn symplectic_defect(&self) -> f64 {
        let omega = symplectic_form(self.modes());
        let lhs = &self.entries * &omega * self.entries.transpose();
        linalg::max_abs_diff_real(&lhs, &omega)
    }

    /// Acts as `self` on `targets` (in order) and as the identity elsewhere.
    pub fn embed(&self, targets: &[usize], total_modes: usize) -> Result<SymplecticOp> {
        ensure_dim(self.modes(), targets.len())?;
        for (n, &t) in targets.iter().enumerate() {
            if t >= total_modes {
                return Err(Error::IndexOutOfRange {
                    index: t,
                    len: total_modes,
                });
            }
            if targets[..n].contains(&t) {
                return Err(Error::RepeatedIndex(t));
            }
        }
        let mut m = RMatrix::identity(2 * total_modes, 2 * total_modes);
        for (a, &ta) in targets.iter().enumerate() {
            for (b, &tb) in targets.iter().enumerate() {
                for i in 0..2 {
                    for j in 0..2 {
                        m[(2 * ta + i, 2 * tb + j)] = self.entries[(2 * a + i, 2 * b + j)];
                    }
                }
            }
        }
        Ok(SymplecticOp { entries: m })
    }
}

/// Free-function form of [`SymplecticOp::embed`].
pub fn embed_symplectic(
    op: &SymplecticOp,
    targets: &[usize],
    total_modes: usize,
) -> Result<SymplecticOp> {
    op.embed(targets, total_modes)
}

/// Two-mode squeezer `[[cosh r·I, sinh r·Z], [sinh r·Z, cosh r·I]]`, `Z = diag(1, −1)`.
///
/// On two vacua with `r = arccosh √g` it yields diagonal blocks `(2g − 1)I`
/// and correlations `2√(g(g − 1))·Z`.
pub fn tms_symplectic(r: f64) -> Result<SymplecticOp> {
    if !r.is_finite() {
        return Err(domain("r", r, "finite"));
    }
    let (c, s) = (r.cosh(), r.sinh());
    let m = RMatrix::from_row_slice(
        4,
        4,
        &[
            c, 0.0, s, 0.0, //
            0.0, c, 0.0, -s, //
            s, 0.0, c, 0.0, //
            0.0, -s, 0.0, c,
        ],
    );
    Ok(SymplecticOp { entries: m })
}

/// Squeezer parameter giving amplifier gain `g ≥ 1`: `arccosh √g`.
pub fn gain_to_squeezing(g: f64) -> Result<f64> {
    if !(g >= 1.0 && g.is_finite()) {
        return Err(domain("g", g, "g >= 1"));
    }
    Ok(g.sqrt().acosh())
}

/// Beam splitter of transmissivity `τ`; the first output is `√τ·a − √(1−τ)·b`.
pub fn bs_symplectic(tau: f64) -> Result<SymplecticOp> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(domain("tau", tau, "[0, 1]"));
    }
    let (t, r) = (tau.sqrt(), (1.0 - tau).sqrt());
    let m = RMatrix::from_row_slice(
        4,
        4,
        &[
            t, 0.0, -r, 0.0, //
            0.0, t, 0.0, -r, //
            r, 0.0, t, 0.0, //
            0.0, r, 0.0, t,
        ],
    );
    Ok(SymplecticOp { entries: m })
}

/// Principal-mode and global covariances of the CV protocol.
///
/// `stage_covs[k]` is the principal mode after stage `k` (0 = preparation).
/// `global_covs` holds the full `(S, E1, E2)` covariance for stages 0–2
/// (stage 2 before `E1` is discarded) and the `(S, E2)` covariance after the
/// beam splitter, before `E2` is discarded.
#[derive(Debug, Clone)]
pub struct CvStageTrace {
    pub stage_covs: Vec<CovMatrix>,
    pub global_covs: Vec<CovMatrix>,
}

impl CvStageTrace {
    pub fn output(&self) -> &CovMatrix {
        &self.stage_covs[3]
    }
}

fn check_protocol_params(v: f64, g1: f64, g2: f64) -> Result<()> {
    if !(v >= 1.0 && v.is_finite()) {
        return Err(domain("v", v, "v >= 1"));
    }
    if !(g1 >= 1.0 && g1.is_finite()) {
        return Err(domain("g1", g1, "g1 >= 1"));
    }
    if !(g2 > 1.0 && g2.is_finite()) {
        return Err(domain("g2", g2, "g2 > 1"));
    }
    Ok(())
}

/// Runs the three-stage protocol on input `v·I₂` with resource gain `g1` and
/// amplifier gain `g2`.
pub fn run_cv(v: f64, g1: f64, g2: f64) -> Result<CvStageTrace> {
    check_protocol_params(v, g1, g2)?;
    let sigma1 = tms_symplectic(gain_to_squeezing(g1)?)?.embed(&[1, 2], 3)?;
    let sigma2 = tms_symplectic(gain_to_squeezing(g2)?)?.embed(&[0, 1], 3)?;
    let sigma3 = bs_symplectic(1.0 / g2)?;

    let input = CovMatrix::thermal(v)?;
    let prep = input.direct_sum(&CovMatrix::vacuum(2));
    let after1 = prep.transform(&sigma1)?;
    let after2 = after1.transform(&sigma2)?;
    let reduced2 = after2.ptrace_modes(&[0, 2])?;
    let after3 = reduced2.transform(&sigma3)?;

    Ok(CvStageTrace {
        stage_covs: vec![
            input,
            after1.ptrace_modes(&[0])?,
            after2.ptrace_modes(&[0])?,
            after3.ptrace_modes(&[0])?,
        ],
        global_covs: vec![prep, after1, after2, after3],
    })
}

/// The protocol with a two-mode squeezed vacuum resource of squeezing `r`
/// (`g1 = cosh² r`).
///
/// ```
/// use teleflow::gaussian::{run_cv_with_resource, CovMatrix};
/// use teleflow::metrics::gaussian_fidelity_1mode;
///
/// let out = run_cv_with_resource(1.0, 0.0, 3.0).unwrap();
/// let f = gaussian_fidelity_1mode(&CovMatrix::vacuum(1), out.output()).unwrap();
/// assert!((f - 0.6).abs() < 1e-12);
/// ```
pub fn run_cv_with_resource(v: f64, r: f64, g2: f64) -> Result<CvStageTrace> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(domain("r", r, "r >= 0"));
    }
    run_cv(v, r.cosh().powi(2), g2)
}

/// Stage-2 global covariance assembled from its closed-form blocks.
pub fn stage2_closed_form(v: f64, g1: f64, g2: f64) -> Result<RMatrix> {
    check_protocol_params(v, g1, g2)?;
    let id = RMatrix::identity(2, 2);
    let z = RMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));

    let v11 = &id * (2.0 * g1 * (g2 - 1.0) + g2 * (v - 1.0) + 1.0);
    let v22 = &id * (v * (g2 - 1.0) + g2 * (2.0 * g1 - 1.0));
    let v33 = &id * (2.0 * g1 - 1.0);
    let v12 = &z * ((v + 2.0 * g1 - 1.0) * (g2 * (g2 - 1.0)).sqrt());
    let v13 = &id * (2.0 * (g1 * (g1 - 1.0) * (g2 - 1.0)).sqrt());
    let v23 = &z * (2.0 * (g1 * g2 * (g1 - 1.0)).sqrt());

    let blocks = [[&v11, &v12, &v13], [&v12, &v22, &v23], [&v13, &v23, &v33]];
    let mut m = RMatrix::zeros(6, 6);
    for (a, row) in blocks.iter().enumerate() {
        for (b, block) in row.iter().enumerate() {
            // Every off-diagonal block is symmetric, so V_ba = V_abᵀ = V_ab.
            m.view_mut((2 * a, 2 * b), (2, 2)).copy_from(*block);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &RMatrix, b: &RMatrix, tol: f64) -> bool {
        linalg::max_abs_diff_real(a, b) <= tol
    }

    #[test]
    fn squeezer_identity_and_resource_blocks() {
        assert!(close(
            tms_symplectic(0.0).unwrap().matrix(),
            &RMatrix::identity(4, 4),
            0.0
        ));
        let r = gain_to_squeezing(2.0).unwrap();
        let v = CovMatrix::vacuum(2)
            .transform(&tms_symplectic(r).unwrap())
            .unwrap();
        let m = v.matrix();
        assert!((m[(0, 0)] - 3.0).abs() < 1e-12 && (m[(1, 1)] - 3.0).abs() < 1e-12);
        assert!((m[(0, 2)] - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((m[(1, 3)] + 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(m[(0, 1)], 0.0);
        for r in [0.1, 1.0, 5.0] {
            let s = tms_symplectic(r).unwrap();
            assert!(s.symplectic_defect() <= 1e-10 * r.cosh().powi(2), "r={r}");
        }
    }

    #[test]
    fn beam_splitter_limits() {
        assert!(close(
            bs_symplectic(1.0).unwrap().matrix(),
            &RMatrix::identity(4, 4),
            0.0
        ));
        let swap = bs_symplectic(0.0).unwrap();
        let a = CovMatrix::thermal(3.0)
            .unwrap()
            .direct_sum(&CovMatrix::vacuum(1));
        let b = a.transform(&swap).unwrap();
        assert!(
            (b.matrix()[(0, 0)] - 1.0).abs() < 1e-15 && (b.matrix()[(2, 2)] - 3.0).abs() < 1e-15
        );
        assert!(bs_symplectic(0.5).unwrap().symplectic_defect() < 1e-15);
        assert!(bs_symplectic(1.5).is_err());
    }

    #[test]
    fn direct_sum_and_ptrace() {
        assert!(close(
            CovMatrix::vacuum(1)
                .direct_sum(&CovMatrix::vacuum(1))
                .matrix(),
            &RMatrix::identity(4, 4),
            0.0
        ));
        let three = CovMatrix::thermal(2.0)
            .unwrap()
            .direct_sum(&CovMatrix::thermal(3.0).unwrap())
            .direct_sum(&CovMatrix::thermal(5.0).unwrap());
        let kept = three.ptrace_modes(&[2, 0]).unwrap();
        let expected = CovMatrix::thermal(2.0)
            .unwrap()
            .direct_sum(&CovMatrix::thermal(5.0).unwrap());
        assert_eq!(kept, expected);
        let r = 0.8;
        let tmsv = CovMatrix::vacuum(2)
            .transform(&tms_symplectic(r).unwrap())
            .unwrap();
        let marginal = tmsv.ptrace_modes(&[1]).unwrap();
        assert!(close(
            marginal.matrix(),
            &(RMatrix::identity(2, 2) * (2.0 * r).cosh()),
            1e-12
        ));
        assert!(three.ptrace_modes(&[]).is_err());
        assert!(three.ptrace_modes(&[3]).is_err());
        assert!(three.ptrace_modes(&[1, 1]).is_err());
    }

    #[test]
    fn unphysical_covariance_rejected() {
        let squeezed_too_far = RMatrix::identity(2, 2) * 0.5;
        assert!(matches!(
            CovMatrix::new(squeezed_too_far),
            Err(Error::Invariant {
                what: "covariance physicality",
                ..
            })
        ));
        let mut asym = RMatrix::identity(2, 2);
        asym[(0, 1)] = 0.3;
        assert!(CovMatrix::new(asym).is_err());
        let squeezed = RMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.5, 2.0]));
        assert!(CovMatrix::new(squeezed).is_ok());
    }

    #[test]
    fn embedding_places_blocks() {
        let s = tms_symplectic(0.4).unwrap();
        let e = s.embed(&[2, 0], 3).unwrap();
        assert!(e.symplectic_defect() < 1e-12);
        assert_eq!(e.matrix()[(4, 0)], s.matrix()[(0, 2)]);
        assert_eq!(e.matrix()[(2, 2)], 1.0);
        assert!(s.embed(&[0, 0], 3).is_err());
        assert!(s.embed(&[0], 3).is_err());
    }

    #[test]
    fn stage_one_leaves_input_alone() {
        for v in [1.0, 2.5, 7.0] {
            let trace = run_cv(v, 4.0, 3.0).unwrap();
            assert!(close(
                trace.stage_covs[1].matrix(),
                &(RMatrix::identity(2, 2) * v),
                1e-12
            ));
        }
    }

    #[test]
    fn no_resource_output() {
        let trace = run_cv(1.0, 1.0, 3.0).unwrap();
        assert!(close(
            trace.output().matrix(),
            &(RMatrix::identity(2, 2) * (7.0 / 3.0)),
            1e-12
        ));
    }

    #[test]
    fn closed_form_no_resource_blocks() {
        let m = stage2_closed_form(1.0, 1.0, 3.0).unwrap();
        assert!((m[(0, 0)] - 5.0).abs() < 1e-12);
        assert!((m[(4, 4)] - 1.0).abs() < 1e-12);
        assert_eq!(m[(0, 4)], 0.0);
        assert!(stage2_closed_form(2.0, 4.0, 1.0).is_err());
        // V12 ∝ √(g2(g2 − 1)) vanishes as g2 → 1.
        let near = stage2_closed_form(2.0, 4.0, 1.0 + 1e-12).unwrap();
        assert!(near[(0, 2)].abs() < 1e-5 && near[(1, 3)].abs() < 1e-5);
    }

    #[test]
    fn parameter_domains() {
        assert!(run_cv(0.5, 2.0, 3.0).is_err());
        assert!(run_cv(1.0, 0.5, 3.0).is_err());
        assert!(run_cv(1.0, 2.0, 1.0).is_err());
        assert!(run_cv_with_resource(1.0, -0.1, 3.0).is_err());
    }
}
