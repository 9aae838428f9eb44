//! Exact controllability and observability analysis of grid graphs.
//!
//! A `d`-dimensional grid is the cartesian product of paths. Taking its
//! Laplacian as the system matrix and injecting inputs at (or reading
//! outputs from) a set of nodes gives a linear system whose controllability
//! is decided here by exact structural criteria: closed-form eigensystems,
//! integer zero patterns of cosine eigenvectors, and number-theoretic
//! characterizations of which nodes can excite which eigenmodes. A numeric
//! PBH/Kalman oracle is included for independent cross-checking; the
//! structural path never depends on it.
//!
//! Observability of the transposed output problem coincides with
//! controllability for symmetric system matrices, so every predicate in this
//! crate answers both questions.

pub mod error;
pub mod grid;
pub mod oracle;
pub mod path_analysis;
pub mod precision;
pub mod simple_grid;
pub mod spectral;
pub mod symmetry;
pub mod witness;

pub use error::{GridError, Result};
pub use grid::{
    build_grid_laplacian, build_path_laplacian, flip_operator, FlipOperator, GridSpec,
    LaplacianMatrix, NodeIndex, DEFAULT_NODE_CAPACITY,
};
pub use precision::{
    to_decimal_string, Precision, DEFAULT_DIGITS, GROUP_GUARD_FACTOR, GROUP_TOLERANCE, MAX_DIGITS,
    MIN_DIGITS,
};
pub use oracle::{
    kalman_rank, numeric_eigensystem, pbh_uncontrollable, pbh_uncontrollable_with,
    NumericSpectrum, KALMAN_MAX_ORDER,
    ORACLE_RESIDUAL_BOUND, PBH_ZERO_TOLERANCE, RANK_THRESHOLD,
};
pub use path_analysis::{
    canonical_uncontrollable_set, combined_blocking_modulus, congruence_chain,
    odd_prime_power_divisors, path_node_uncontrollable, path_nodeset_uncontrollable,
    path_uncontrollable_eigenpairs, PathMode, PathVerdict, PrimePowerFactorization,
};
pub use simple_grid::{
    build_partition, grid_node_uncontrollable_simple, partition_alphabet,
    simple_grid_controllable, suggest_control_nodes, GridMode, GridVerdict, PartitionEntry,
};
pub use spectral::{
    grid_spectrum, is_simple, min_control_set_size, path_eigensystem, EigenBasis, GridSpectrum,
    PathEigenpair, SpectralValue, SymmetrySign, TaggedBasisVector,
};
pub use symmetry::{
    brick_inheritance_scan, brick_partition, central_line_zeros, central_zero_nodes,
    classify_symmetry, component_polynomial, eigenspace_symmetry_profile, nonsimple_grid_controllable,
    nonvanishing_guard, predict_brick_subvectors, simultaneous_zero_test, spectrum_controllable,
    BrickPartition, BrickScanEntry, BrickScanReport, ComponentPolynomial, SimultaneousZero,
    SymmetryClass, SymmetryProfile, TwoClassRule, DET_ZERO_FACTOR, INPUT_EIGENVECTOR_BOUND,
};
pub use witness::{Witness, WITNESS_RESIDUAL_BOUND, WITNESS_ZERO_BOUND};
