//! Measurement-free teleportation viewed as an open-system process.
//!
//! The crate simulates the qudit and Gaussian continuous-variable versions of
//! teleportation stage by stage, tracking the principal system while the
//! environment is traced out, and provides the tools to show that the process
//! is non-Markovian: prefix-channel tomography, a divisibility test, and a
//! trace-distance revival witness.
//!
//! ```
//! use teleflow::dv::DvTeleport;
//! use teleflow::metrics::uhlmann_fidelity;
//! use teleflow::qudit::Ket;
//!
//! let tele = DvTeleport::new(3).unwrap();
//! let input = Ket::plus(3).unwrap().projector();
//! let trace = tele.run_ideal(&input).unwrap();
//! let f = uhlmann_fidelity(&input, trace.output()).unwrap();
//! assert!((f - 1.0).abs() < 1e-9);
//! ```

pub mod dv;
mod error;
pub mod gaussian;
pub mod linalg;
pub mod metrics;
pub mod nonmarkov;
pub mod qudit;
pub mod random;
pub mod tol;

pub use error::{Error, Result};
