//! Finite-dimensional states, the generalized gate family, and channel
//! representations (Stinespring dilation, Kraus sums, mixed unitaries).

mod channel;
pub mod gates;
mod layout;
mod state;

pub use channel::{apply_kraus, apply_mixed_unitary, kraus_from_stinespring, KrausSet};
pub use gates::{bell_phi, cnot, cphase, hadamard, pauli_x, pauli_z, swap, werner};
pub use layout::{embed_gate, partial_trace, Circuit, GateStep, SystemLayout};
pub use state::{DensityMatrix, Ket, UnitaryOp};
