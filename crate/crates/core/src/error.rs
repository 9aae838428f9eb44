//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while building grids or analysing them.
#[derive(Debug, Error)]
pub enum GridError {
    /// A grid was requested with no axes or with a zero-length axis.
    #[error("grid dimensions must be nonempty and every axis length at least 1, got {0:?}")]
    InvalidDimensions(Vec<usize>),

    /// The node count exceeds the configured dense-matrix budget.
    #[error("grid with {nodes} nodes exceeds the capacity limit of {capacity}")]
    CapacityExceeded { nodes: usize, capacity: usize },

    /// A node coordinate fell outside `1..=n` on some axis.
    #[error("node {node:?} is out of range for grid dimensions {dims:?}")]
    NodeOutOfRange { node: Vec<usize>, dims: Vec<usize> },

    /// An axis argument was not one of `1..=d`.
    #[error("axis {axis} is out of range for a {ndim}-dimensional grid")]
    AxisOutOfRange { axis: usize, ndim: usize },

    /// An operation that needs at least one node got an empty set.
    #[error("node set must be nonempty")]
    EmptyNodeSet,

    /// A modulus that must be an odd prime-power divisor was not one.
    #[error("{q} is not an odd prime-power divisor of {n}")]
    InvalidModulus { q: u64, n: u64 },

    /// The simple-grid analysis was asked about a grid with repeated eigenvalues.
    #[error(
        "grid has a repeated eigenvalue (multiplicity {multiplicity}); \
         use the multiple-eigenvalue analysis instead"
    )]
    NotSimple { multiplicity: usize },

    /// A brick subdivision was requested whose base does not divide the grid.
    #[error("brick dimensions {base:?} do not divide grid dimensions {dims:?} axis by axis")]
    BrickMismatch { base: Vec<usize>, dims: Vec<usize> },

    /// A vector argument failed the eigenvector residual check.
    #[error("vector is not an eigenvector: residual {residual:.3e} exceeds {bound:.3e}")]
    NotAnEigenvector { residual: f64, bound: f64 },

    /// An argument's length did not match what the operation requires, e.g.
    /// the simultaneous-zeroing test got a node count different from the
    /// eigenvalue's multiplicity.
    #[error("argument length mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    /// The prime-path nonvanishing guard was asked about a composite length.
    #[error("path length {n} is not prime")]
    NotPrime { n: usize },

    /// A component index argument fell outside the range an operation
    /// supports.
    #[error("component index {index} is outside the supported range {min}..={max}")]
    ComponentOutOfRange { index: usize, min: usize, max: usize },

    /// Two eigenvalues were too close to separate but too far apart to merge.
    ///
    /// Raised instead of guessing: the caller should retry with more working
    /// precision.
    #[error(
        "eigenvalue spacing {gap:.3e} falls inside the ambiguous band \
         ({tolerance:.1e}, {guard:.1e}); increase working precision"
    )]
    PrecisionAmbiguity { gap: f64, tolerance: f64, guard: f64 },

    /// The requested working precision is outside the supported range.
    #[error("working precision of {digits} significant digits is outside the supported range {min}..={max}")]
    PrecisionOutOfRange { digits: u32, min: u32, max: u32 },

    /// The numeric eigensolver failed or its output failed validation.
    #[error("numeric eigendecomposition rejected: {0}")]
    OracleFailure(String),

    /// Kalman-style rank computation refused an oversized system.
    #[error("controllability-matrix rank test limited to order {limit}, got {order}")]
    KalmanTooLarge { order: usize, limit: usize },

    /// An internally constructed witness failed its own validity check.
    /// Always a bug or a precision failure, never a caller error.
    #[error("witness validation failed: {0}")]
    WitnessInvalid(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, GridError>;
