use thiserror::Error;

/// Errors raised by state construction, channel algebra and the protocol runners.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} outside the supported range")]
    InvalidDimension(usize),

    #[error("subsystem index {index} out of range for {len} subsystems")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("subsystem {0} selected more than once")]
    RepeatedIndex(usize),

    #[error("empty subsystem selection")]
    EmptySelection,

    #[error("parameter `{name}` = {value} outside its domain ({domain})")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{what} violated by {defect:.3e}")]
    Invariant { what: &'static str, defect: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
