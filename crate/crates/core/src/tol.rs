//! Numerical tolerances shared across the crate.

/// Constructive invariants: hermiticity, unit trace, unitarity, ket norm.
pub const CONSTRUCT: f64 = 1e-10;
/// End-to-end channel equalities and Kraus completeness.
pub const CHANNEL: f64 = 1e-9;
/// Eigenvalues above `-CLAMP` are treated as zero when taking square roots.
pub const CLAMP: f64 = 1e-12;
/// Total negative eigenvalue mass tolerated before a square root is refused.
pub const CLAMP_MASS: f64 = 1e-8;
/// Covariance matrix symmetry.
pub const SYMMETRIC: f64 = 1e-12;
/// Minimum eigenvalue of `V + iΩ` for a physical covariance matrix.
pub const PHYSICAL: f64 = 1e-9;
/// Extra physicality slack per unit of the largest covariance entry, since
/// eigenvalue rounding grows with the matrix norm.
pub const PHYSICAL_REL: f64 = 1e-12;
/// Normalized least-squares defect above which a process is declared non-divisible.
pub const DIVISIBILITY: f64 = 1e-6;
