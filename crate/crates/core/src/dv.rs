//! Measurement-free qudit teleportation as three stage unitaries on
//! `S ⊗ E1 ⊗ E2`.
//!
//! * `U1` entangles the two environment qudits into `|φ>`.
//! * `U2` couples the principal system to `E1`; afterwards the input is encoded
//!   in `E2` up to a clock/shift correction controlled by `S` and `E1`.
//! * `U3` applies the correction coherently and swaps the state back into `S`,
//!   leaving the environment in `|++>`.

use std::f64::consts::TAU;

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::qudit::{gates, Circuit, DensityMatrix, Ket, SystemLayout, UnitaryOp};
use crate::tol;

/// Supported qudit dimensions.
pub const DIM_RANGE: std::ops::RangeInclusive<usize> = 2..=10;

/// Principal reduced states after preparation and after each stage.
#[derive(Debug, Clone)]
pub struct DvStageTrace {
    pub d: usize,
    pub stage_states: Vec<DensityMatrix>,
    pub global_states: Option<Vec<DensityMatrix>>,
}

impl DvStageTrace {
    pub fn input(&self) -> &DensityMatrix {
        &self.stage_states[0]
    }

    pub fn output(&self) -> &DensityMatrix {
        &self.stage_states[3]
    }
}

/// Outcome of checking the three closed-form stage actions on a pure input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageIdentityReport {
    pub holds: [bool; 3],
    pub residuals: [f64; 3],
}

impl StageIdentityReport {
    pub fn all_hold(&self) -> bool {
        self.holds.iter().all(|&h| h)
    }
}

/// The three stage circuits for a fixed qudit dimension.
#[derive(Debug, Clone)]
pub struct DvTeleport {
    d: usize,
    layout: SystemLayout,
    stages: [Circuit; 3],
    keep_global: bool,
}

impl DvTeleport {
    pub fn new(d: usize) -> Result<Self> {
        if !DIM_RANGE.contains(&d) {
            return Err(Error::InvalidDimension(d));
        }
        let layout = SystemLayout::uniform(d, 3)?;
        let fwd = TAU;
        let inv = d as f64 * TAU - TAU;
        let (s, e1, e2) = (0, 1, 2);

        let u1 = Circuit::new(layout.clone())
            .then(gates::hadamard(d, fwd)?, &[e1])?
            .then(gates::cnot(d, fwd, inv)?, &[e1, e2])?;
        let u2 = Circuit::new(layout.clone())
            .then(gates::cnot(d, fwd, inv)?, &[s, e1])?
            .then(gates::hadamard(d, fwd)?, &[s])?;
        let u3 = Circuit::new(layout.clone())
            .then(gates::cnot(d, fwd, fwd)?, &[e1, e2])?
            .then(gates::hadamard(d, inv)?, &[e2])?
            .then(gates::swap(d, fwd, fwd)?, &[e1, e2])?
            .then(gates::cnot(d, fwd, fwd)?, &[s, e1])?
            .then(gates::hadamard(d, fwd)?, &[e1])?
            .then(gates::swap(d, fwd, fwd)?, &[s, e1])?;

        Ok(Self {
            d,
            layout,
            stages: [u1, u2, u3],
            keep_global: false,
        })
    }

    /// Record the full three-qudit state after every stage. Costs `d⁶` complex
    /// entries per stage, so it is off by default.
    pub fn keep_global_states(mut self, keep: bool) -> Self {
        self.keep_global = keep;
        self
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn stage_circuits(&self) -> &[Circuit; 3] {
        &self.stages
    }

    /// The three stage unitaries as dense `d³ × d³` matrices.
    pub fn stage_unitaries(&self) -> Result<(UnitaryOp, UnitaryOp, UnitaryOp)> {
        let [a, b, c] = &self.stages;
        Ok((a.unitary()?, b.unitary()?, c.unitary()?))
    }

    fn environment_zero(&self) -> CMatrix {
        let n = self.d * self.d;
        linalg::matrix_unit(n, 0, 0)
    }

    fn reduce(&self, global: &CMatrix) -> Result<CMatrix> {
        self.layout.partial_trace_matrix(global, &[0])
    }

    /// Pushes an arbitrary principal operator through the first `upto_stage`
    /// stages and returns the reduced operator on `S`. The map is linear, so
    /// non-physical inputs such as matrix units are allowed.
    ///
    /// With `resource = None` the environment starts in `|00>` and `U1` runs;
    /// otherwise `resource` is placed on `E1 ⊗ E2` in place of `U1`.
    pub fn evolve_operator(
        &self,
        op: &CMatrix,
        resource: Option<&CMatrix>,
        upto_stage: usize,
    ) -> Result<CMatrix> {
        if upto_stage > 3 {
            return Err(Error::IndexOutOfRange {
                index: upto_stage,
                len: 4,
            });
        }
        ensure_dim(self.d, op.nrows())?;
        let mut global = match resource {
            Some(r) => {
                ensure_dim(self.d * self.d, r.nrows())?;
                linalg::tensor_product(op, r)
            }
            None => {
                let prep = linalg::tensor_product(op, &self.environment_zero());
                if upto_stage == 0 {
                    prep
                } else {
                    self.stages[0].conjugate(&prep)?
                }
            }
        };
        for stage in &self.stages[1..upto_stage.max(1)] {
            global = stage.conjugate(&global)?;
        }
        self.reduce(&global)
    }

    fn run(&self, input: &DensityMatrix, resource: Option<&DensityMatrix>) -> Result<DvStageTrace> {
        ensure_dim(self.d, input.dim())?;
        let prep = linalg::tensor_product(input.matrix(), &self.environment_zero());
        let after1 = match resource {
            Some(r) => {
                ensure_dim(self.d * self.d, r.dim())?;
                linalg::tensor_product(input.matrix(), r.matrix())
            }
            None => self.stages[0].conjugate(&prep)?,
        };
        let after2 = self.stages[1].conjugate(&after1)?;
        let after3 = self.stages[2].conjugate(&after2)?;
        let globals = [prep, after1, after2, after3];

        let mut stage_states = Vec::with_capacity(4);
        stage_states.push(input.clone());
        for g in &globals[1..] {
            stage_states.push(DensityMatrix::new(self.reduce(g)?)?);
        }
        let global_states = self.keep_global.then(|| {
            globals
                .into_iter()
                .map(DensityMatrix::new_unchecked)
                .collect()
        });
        Ok(DvStageTrace {
            d: self.d,
            stage_states,
            global_states,
        })
    }

    /// Teleports `input` with the environment prepared in `|00>`.
    pub fn run_ideal(&self, input: &DensityMatrix) -> Result<DvStageTrace> {
        self.run(input, None)
    }

    /// Teleports `input` through an explicit resource on `E1 ⊗ E2`, which
    /// replaces the `U1` stage.
    pub fn run_with_resource(
        &self,
        input: &DensityMatrix,
        resource: &DensityMatrix,
    ) -> Result<DvStageTrace> {
        self.run(input, Some(resource))
    }

    /// Right-hand side of the stage-2 identity, `(1/d) Σ_ij |ij> ⊗ X^{d−j} Z^i |s>`.
    pub fn stage2_target(&self, s: &Ket) -> Result<CVector> {
        let d = self.d;
        ensure_dim(d, s.dim())?;
        let x = gates::pauli_x(d)?;
        let z = gates::pauli_z(d)?;
        let mut out = CVector::zeros(d * d * d);
        let mut zi = s.amplitudes().clone();
        for i in 0..d {
            for j in 0..d {
                let mut v = zi.clone();
                for _ in 0..(d - j) {
                    v = x.matrix() * v;
                }
                for (k, a) in v.iter().enumerate() {
                    out[(i * d + j) * d + k] += a / d as f64;
                }
            }
            zi = z.matrix() * zi;
        }
        Ok(out)
    }

    /// Checks `U1(|s>|00>) = |s>|φ>`, the stage-2 identity, and
    /// `U3(stage-2 state) = |s>|++>`, each from its own closed-form input.
    pub fn check_stage_identities(&self, s: &Ket) -> Result<StageIdentityReport> {
        let d = self.d;
        ensure_dim(d, s.dim())?;
        let zero2 = Ket::basis(d * d, 0)?;
        let phi = gates::bell_phi(d)?;
        let plus = Ket::plus(d)?;
        let column = |v: &CVector| CMatrix::from_column_slice(v.len(), 1, v.as_slice());

        let lhs1 = self.stages[0].apply(&column(s.tensor(&zero2).amplitudes()))?;
        let rhs1 = column(s.tensor(&phi).amplitudes());

        let lhs2 = self.stages[1].apply(&rhs1)?;
        let rhs2 = column(&self.stage2_target(s)?);

        let lhs3 = self.stages[2].apply(&rhs2)?;
        let rhs3 = column(s.tensor(&plus).tensor(&plus).amplitudes());

        let residuals = [
            (lhs1 - rhs1).norm(),
            (lhs2 - rhs2).norm(),
            (lhs3 - rhs3).norm(),
        ];
        Ok(StageIdentityReport {
            holds: residuals.map(|r| r <= tol::CONSTRUCT),
            residuals,
        })
    }
}

/// Dense stage unitaries `(U1, U2, U3)` for dimension `d`.
pub fn build_stage_unitaries(d: usize) -> Result<(UnitaryOp, UnitaryOp, UnitaryOp)> {
    DvTeleport::new(d)?.stage_unitaries()
}

pub fn run_ideal(d: usize, input: &DensityMatrix) -> Result<DvStageTrace> {
    DvTeleport::new(d)?.run_ideal(input)
}

pub fn run_with_resource(
    d: usize,
    input: &DensityMatrix,
    resource: &DensityMatrix,
) -> Result<DvStageTrace> {
    DvTeleport::new(d)?.run_with_resource(input, resource)
}

pub fn check_stage_identities(d: usize, s: &Ket) -> Result<StageIdentityReport> {
    DvTeleport::new(d)?.check_stage_identities(s)
}
