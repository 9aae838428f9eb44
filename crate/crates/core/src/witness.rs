//! Checked eigenvector certificates.
//!
//! A witness is an explicit eigenvector that vanishes on a claimed node set,
//! certifying that the eigenvalue cannot be excited (or observed) through
//! those nodes. Construction validates both claims numerically, so a witness
//! that exists is always safe to hand to a caller or a report.

use crate::error::{GridError, Result};
use crate::grid::{GridSpec, LaplacianMatrix, NodeIndex};

/// Largest eigen-residual (infinity norm) a witness may carry.
pub const WITNESS_RESIDUAL_BOUND: f64 = 1e-10;

/// Largest magnitude a witness component may have at a claimed zero node.
pub const WITNESS_ZERO_BOUND: f64 = 1e-12;

/// An eigenvector certificate: vanishes on `claimed_zeros`, eigen-residual
/// within [`WITNESS_RESIDUAL_BOUND`].
#[derive(Debug, Clone)]
pub struct Witness {
    /// The eigenvalue this vector belongs to.
    pub eigenvalue: f64,
    /// Eigenvector in flat node order, unit infinity norm.
    pub vector: Vec<f64>,
    /// Nodes where the vector is certified to vanish.
    pub claimed_zeros: Vec<NodeIndex>,
    /// Measured `‖L w − λ w‖_∞`.
    pub residual: f64,
}

impl Witness {
    /// Validate and package a witness. The vector is rescaled to unit
    /// infinity norm; claims are then checked against the Laplacian.
    pub fn checked(
        lap: &LaplacianMatrix,
        grid: &GridSpec,
        eigenvalue: f64,
        vector: Vec<f64>,
        claimed_zeros: Vec<NodeIndex>,
    ) -> Result<Self> {
        if vector.len() != lap.order() {
            return Err(GridError::WitnessInvalid(format!(
                "vector length {} does not match system order {}",
                vector.len(),
                lap.order()
            )));
        }
        let sup = vector.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        if sup == 0.0 {
            return Err(GridError::WitnessInvalid("zero vector".into()));
        }
        let vector: Vec<f64> = vector.iter().map(|x| x / sup).collect();
        let residual = lap.eigen_residual(&vector, eigenvalue);
        if residual > WITNESS_RESIDUAL_BOUND {
            return Err(GridError::WitnessInvalid(format!(
                "eigen-residual {residual:.3e} exceeds {WITNESS_RESIDUAL_BOUND:.1e} at eigenvalue {eigenvalue}"
            )));
        }
        for node in &claimed_zeros {
            let flat = grid.flatten(node);
            let mag = vector[flat].abs();
            if mag > WITNESS_ZERO_BOUND {
                return Err(GridError::WitnessInvalid(format!(
                    "component at {node} is {mag:.3e}, above the zero bound {WITNESS_ZERO_BOUND:.1e}"
                )));
            }
        }
        Ok(Self { eigenvalue, vector, claimed_zeros, residual })
    }
}
