use crate::error::{ensure_dim, Error, Result};
use num_complex::Complex64;

use crate::linalg::{CMatrix, ZERO};

use super::state::{DensityMatrix, UnitaryOp};

/// Ordered subsystem dimensions of a composite system.
///
/// Composite indices are row-major: the leftmost subsystem is the slowest digit,
/// matching [`crate::linalg::tensor_product`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemLayout {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl SystemLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::EmptySelection);
        }
        if let Some(&bad) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(bad));
        }
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len() - 1).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        Ok(Self { dims, strides })
    }

    /// `count` copies of a `d`-level system.
    pub fn uniform(d: usize, count: usize) -> Result<Self> {
        Self::new(vec![d; count])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    fn digit(&self, index: usize, subsystem: usize) -> usize {
        (index / self.strides[subsystem]) % self.dims[subsystem]
    }

    fn check_targets(&self, targets: &[usize]) -> Result<()> {
        if targets.is_empty() {
            return Err(Error::EmptySelection);
        }
        for (n, &t) in targets.iter().enumerate() {
            if t >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index: t,
                    len: self.len(),
                });
            }
            if targets[..n].contains(&t) {
                return Err(Error::RepeatedIndex(t));
            }
        }
        Ok(())
    }

    /// Offsets of every local basis state of `targets` inside the full index space,
    /// enumerated in the local (gate) ordering.
    fn local_offsets(&self, targets: &[usize]) -> Vec<usize> {
        let local: usize = targets.iter().map(|&t| self.dims[t]).product();
        (0..local)
            .map(|mut g| {
                let mut off = 0;
                for &t in targets.iter().rev() {
                    off += (g % self.dims[t]) * self.strides[t];
                    g /= self.dims[t];
                }
                off
            })
            .collect()
    }

    /// Splits a full index into (local index on `targets`, index with those digits zeroed).
    fn split(&self, index: usize, targets: &[usize]) -> (usize, usize) {
        let mut local = 0;
        let mut base = index;
        for &t in targets {
            let digit = self.digit(index, t);
            local = local * self.dims[t] + digit;
            base -= digit * self.strides[t];
        }
        (local, base)
    }

    fn prepare_local(&self, gate: &CMatrix, targets: &[usize]) -> Result<Vec<usize>> {
        self.check_targets(targets)?;
        let local: usize = targets.iter().map(|&t| self.dims[t]).product();
        ensure_dim(local, gate.nrows())?;
        ensure_dim(local, gate.ncols())?;
        Ok(self.local_offsets(targets))
    }

    /// Full-space unitary acting as `gate` on `targets` (in that order) and as
    /// the identity on every other subsystem.
    pub fn embed_gate(&self, gate: &UnitaryOp, targets: &[usize]) -> Result<UnitaryOp> {
        let offsets = self.prepare_local(gate.matrix(), targets)?;
        let n = self.total_dim();
        let g = gate.matrix();
        let mut full = CMatrix::zeros(n, n);
        for row in 0..n {
            let (lr, base) = self.split(row, targets);
            for (lc, off) in offsets.iter().enumerate() {
                full[(row, base + off)] = g[(lr, lc)];
            }
        }
        Ok(UnitaryOp::new_unchecked(full))
    }

    /// `(G ⊗ I) · m` with `G` on `targets`, without forming the full operator.
    pub fn apply_left(&self, gate: &CMatrix, targets: &[usize], m: &CMatrix) -> Result<CMatrix> {
        let offsets = self.prepare_local(gate, targets)?;
        let n = self.total_dim();
        ensure_dim(n, m.nrows())?;
        // Nonzero gate entries per row in CSR form; the protocol gates are
        // mostly phase permutations, so this skips almost all of the work.
        let mut row_start = Vec::with_capacity(gate.nrows() + 1);
        let mut entries: Vec<(usize, Complex64)> = Vec::new();
        for lr in 0..gate.nrows() {
            row_start.push(entries.len());
            for lc in 0..gate.ncols() {
                let g = gate[(lr, lc)];
                if g != ZERO {
                    entries.push((offsets[lc], g));
                }
            }
        }
        row_start.push(entries.len());
        let split: Vec<(usize, usize)> = (0..n).map(|row| self.split(row, targets)).collect();
        let mut out = CMatrix::zeros(n, m.ncols());
        for (dst, src) in out
            .as_mut_slice()
            .chunks_exact_mut(n)
            .zip(m.as_slice().chunks_exact(n))
        {
            for (slot, &(lr, base)) in dst.iter_mut().zip(&split) {
                let mut acc = ZERO;
                for &(off, g) in &entries[row_start[lr]..row_start[lr + 1]] {
                    acc += g * src[base + off];
                }
                *slot = acc;
            }
        }
        Ok(out)
    }

    /// `(G ⊗ I) · m · (G ⊗ I)†` with `G` on `targets`.
    pub fn conjugate_local(
        &self,
        gate: &CMatrix,
        targets: &[usize],
        m: &CMatrix,
    ) -> Result<CMatrix> {
        let left = self.apply_left(gate, targets, m)?;
        // (G L†)† = L G†
        let right = self.apply_left(gate, targets, &left.adjoint())?;
        Ok(right.adjoint())
    }

    /// Partial trace over every subsystem not in `keep`. Kept subsystems stay in
    /// layout order regardless of the order given.
    pub fn partial_trace_matrix(&self, m: &CMatrix, keep: &[usize]) -> Result<CMatrix> {
        self.check_targets(keep)?;
        ensure_dim(self.total_dim(), m.nrows())?;
        ensure_dim(self.total_dim(), m.ncols())?;
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        let traced: Vec<usize> = (0..self.len()).filter(|k| !kept.contains(k)).collect();
        let keep_offsets = self.local_offsets(&kept);
        let trace_offsets = if traced.is_empty() {
            vec![0]
        } else {
            self.local_offsets(&traced)
        };
        let nk = keep_offsets.len();
        let mut out = CMatrix::zeros(nk, nk);
        for (a, oa) in keep_offsets.iter().enumerate() {
            for (b, ob) in keep_offsets.iter().enumerate() {
                let mut acc = ZERO;
                for oe in &trace_offsets {
                    acc += m[(oa + oe, ob + oe)];
                }
                out[(a, b)] = acc;
            }
        }
        Ok(out)
    }

    pub fn partial_trace(&self, rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
        self.partial_trace_matrix(rho.matrix(), keep)
            .map(DensityMatrix::new_unchecked)
    }
}

/// Free-function form of [`SystemLayout::embed_gate`].
pub fn embed_gate(gate: &UnitaryOp, layout: &SystemLayout, targets: &[usize]) -> Result<UnitaryOp> {
    layout.embed_gate(gate, targets)
}

/// Free-function form of [`SystemLayout::partial_trace`].
pub fn partial_trace(
    rho: &DensityMatrix,
    layout: &SystemLayout,
    keep: &[usize],
) -> Result<DensityMatrix> {
    layout.partial_trace(rho, keep)
}

/// One gate applied to an ordered list of subsystems.
#[derive(Debug, Clone)]
pub struct GateStep {
    pub gate: UnitaryOp,
    pub targets: Vec<usize>,
}

/// A sequence of local gates; the first step acts first.
#[derive(Debug, Clone)]
pub struct Circuit {
    layout: SystemLayout,
    steps: Vec<GateStep>,
}

impl Circuit {
    pub fn new(layout: SystemLayout) -> Self {
        Self {
            layout,
            steps: Vec::new(),
        }
    }

    /// Appends a gate; it acts after every gate already in the circuit.
    pub fn then(mut self, gate: UnitaryOp, targets: &[usize]) -> Result<Self> {
        self.layout.prepare_local(gate.matrix(), targets)?;
        self.steps.push(GateStep {
            gate,
            targets: targets.to_vec(),
        });
        Ok(self)
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn steps(&self) -> &[GateStep] {
        &self.steps
    }

    /// The full unitary `G_n ⋯ G_1`.
    pub fn unitary(&self) -> Result<UnitaryOp> {
        let n = self.layout.total_dim();
        let mut acc = CMatrix::identity(n, n);
        for step in &self.steps {
            acc = self
                .layout
                .apply_left(step.gate.matrix(), &step.targets, &acc)?;
        }
        Ok(UnitaryOp::new_unchecked(acc))
    }

    /// `U m U†` applied gate by gate.
    pub fn conjugate(&self, m: &CMatrix) -> Result<CMatrix> {
        let mut cur = m.clone();
        for step in &self.steps {
            cur = self
                .layout
                .conjugate_local(step.gate.matrix(), &step.targets, &cur)?;
        }
        Ok(cur)
    }

    /// `U |v>` for a column (or block of columns).
    pub fn apply(&self, v: &CMatrix) -> Result<CMatrix> {
        let mut cur = v.clone();
        for step in &self.steps {
            cur = self
                .layout
                .apply_left(step.gate.matrix(), &step.targets, &cur)?;
        }
        Ok(cur)
    }
}
