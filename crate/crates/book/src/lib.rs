//! The guide under `book/src`, compiled so that every listing runs as a
//! doc-test. One module per chapter keeps failures traceable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/qudit-gates.md")]
pub mod qudit_gates {}

#[doc = include_str!("../../../book/src/dv-teleportation.md")]
pub mod dv_teleportation {}

#[doc = include_str!("../../../book/src/gaussian.md")]
pub mod gaussian {}

#[doc = include_str!("../../../book/src/metrics.md")]
pub mod metrics {}

#[doc = include_str!("../../../book/src/non-markovianity.md")]
pub mod non_markovianity {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
