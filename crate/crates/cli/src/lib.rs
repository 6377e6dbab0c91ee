//! Command-line front end for `teleflow`: figure sweeps as CSV (optionally
//! SVG), stage dumps, divisibility reports and distinguishability traces.
//!
//! Exit codes are 0 on success, 2 for argument errors and 3 when the
//! simulation rejects a state or map.

pub mod cli;
mod error;
pub mod input;
pub mod report;
pub mod svg;
pub mod sweep;

pub use cli::run;
pub use error::{CliError, CliResult};
pub use sweep::{run_sweep, to_csv, Mode, SweepConfig, SweepRow, CSV_HEADER};
