//! Grid graphs, their Laplacians, and the axis-reversal permutations.
//!
//! A grid here is the cartesian product of paths: nodes are tuples
//! `[(i)_1, ..., (i)_d]` with `1 <= (i)_l <= n_l`, and two nodes are adjacent
//! when they differ by one in exactly one coordinate. Node tuples are
//! flattened row-major (axis 1 most significant), so for a 2-D grid the flat
//! index of `[i, j]` is `(i-1)*n_2 + (j-1)`.
//!
//! Laplacians are kept as dense integer matrices: every analysis in this
//! crate is exact or tolerance-audited, and integer storage keeps the matrix
//! side of it exact for free. Axis reversals are index permutations, not
//! matrices; tests materialize them when they need the matrix identities.

use nalgebra::DMatrix;

use crate::error::{GridError, Result};

/// Default upper bound on the number of nodes.
///
/// Dense storage and dense eigendecompositions get expensive fast; anything
/// larger than this is rejected rather than silently ground through.
pub const DEFAULT_NODE_CAPACITY: usize = 4096;

/// Dimensions of a grid graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridSpec {
    dims: Vec<usize>,
}

impl GridSpec {
    /// Grid with the given axis lengths, subject to [`DEFAULT_NODE_CAPACITY`].
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        Self::with_capacity(dims, DEFAULT_NODE_CAPACITY)
    }

    /// Grid with a caller-chosen node budget.
    pub fn with_capacity(dims: Vec<usize>, capacity: usize) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(GridError::InvalidDimensions(dims));
        }
        let mut nodes: usize = 1;
        for &n in &dims {
            nodes = nodes
                .checked_mul(n)
                .ok_or(GridError::CapacityExceeded { nodes: usize::MAX, capacity })?;
        }
        if nodes > capacity {
            return Err(GridError::CapacityExceeded { nodes, capacity });
        }
        Ok(Self { dims })
    }

    /// A 1-D grid, i.e. a path on `n` nodes.
    pub fn path(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// Axis lengths `[n_1, ..., n_d]`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of axes `d`.
    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    /// Total number of nodes `n_1 * ... * n_d`.
    pub fn node_count(&self) -> usize {
        self.dims.iter().product()
    }

    /// Validated node from 1-based coordinates.
    pub fn node(&self, coords: Vec<usize>) -> Result<NodeIndex> {
        if coords.len() != self.ndim()
            || coords.iter().zip(&self.dims).any(|(&c, &n)| c < 1 || c > n)
        {
            return Err(GridError::NodeOutOfRange { node: coords, dims: self.dims.clone() });
        }
        Ok(NodeIndex { coords })
    }

    /// Whether `node` lies inside this grid.
    pub fn contains(&self, node: &NodeIndex) -> bool {
        node.coords.len() == self.ndim()
            && node.coords.iter().zip(&self.dims).all(|(&c, &n)| (1..=n).contains(&c))
    }

    /// Row-major flat index of a node (axis 1 most significant).
    pub fn flatten(&self, node: &NodeIndex) -> usize {
        debug_assert!(self.contains(node));
        let mut flat = 0;
        for (&c, &n) in node.coords.iter().zip(&self.dims) {
            flat = flat * n + (c - 1);
        }
        flat
    }

    /// Node with the given row-major flat index.
    pub fn unflatten(&self, mut flat: usize) -> NodeIndex {
        debug_assert!(flat < self.node_count());
        let mut coords = vec![0; self.ndim()];
        for (slot, &n) in coords.iter_mut().zip(&self.dims).rev() {
            *slot = flat % n + 1;
            flat /= n;
        }
        NodeIndex { coords }
    }

    /// All nodes in flat-index order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeIndex> + '_ {
        (0..self.node_count()).map(|f| self.unflatten(f))
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|n| n.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// 1-based multi-index of a grid node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeIndex {
    coords: Vec<usize>,
}

impl NodeIndex {
    /// Node from raw 1-based coordinates, unchecked against any grid.
    pub fn new(coords: Vec<usize>) -> Self {
        Self { coords }
    }

    /// 1-based coordinates `[(i)_1, ..., (i)_d]`.
    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    /// Coordinate along a 1-based axis.
    pub fn coord(&self, axis: usize) -> usize {
        self.coords[axis - 1]
    }
}

impl std::fmt::Display for NodeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Dense integer Laplacian `L = D - A` of a grid graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaplacianMatrix {
    order: usize,
    entries: Vec<i64>,
}

impl LaplacianMatrix {
    /// Matrix order (number of nodes).
    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry at (row, col), 0-based.
    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.order + col]
    }

    /// One row as a slice.
    pub fn row(&self, row: usize) -> &[i64] {
        &self.entries[row * self.order..(row + 1) * self.order]
    }

    /// Matrix-vector product in `f64`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.order);
        self.entries
            .chunks_exact(self.order)
            .map(|row| row.iter().zip(v).map(|(&a, &x)| a as f64 * x).sum())
            .collect()
    }

    /// Infinity norm (max absolute row sum).
    pub fn infinity_norm(&self) -> f64 {
        self.entries
            .chunks_exact(self.order)
            .map(|row| row.iter().map(|&a| a.unsigned_abs()).sum::<u64>())
            .max()
            .unwrap_or(0) as f64
    }

    /// Copy as a dense `f64` matrix for numeric work.
    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.order, self.order, |r, c| self.entry(r, c) as f64)
    }

    /// Residual `||L v - lambda v||_inf` of a candidate eigenpair.
    pub fn eigen_residual(&self, v: &[f64], lambda: f64) -> f64 {
        self.apply(v)
            .iter()
            .zip(v)
            .map(|(lv, &x)| (lv - lambda * x).abs())
            .fold(0.0, f64::max)
    }
}

/// Laplacian of the path on `n` nodes: tridiagonal with diagonal
/// `(1, 2, ..., 2, 1)` and `-1` off-diagonals.
pub fn build_path_laplacian(n: usize) -> Result<LaplacianMatrix> {
    build_grid_laplacian(&GridSpec::path(n)?)
}

/// Laplacian of a grid graph.
///
/// Equal to the Kronecker sum of the per-axis path Laplacians under the
/// row-major node order; built here directly from adjacency, which keeps the
/// construction independent of that identity (tests confirm it).
pub fn build_grid_laplacian(grid: &GridSpec) -> Result<LaplacianMatrix> {
    let n = grid.node_count();
    let mut entries = vec![0i64; n * n];
    let dims = grid.dims();
    // Strides of each axis in the flat order.
    let mut strides = vec![1usize; dims.len()];
    for axis in (0..dims.len().saturating_sub(1)).rev() {
        strides[axis] = strides[axis + 1] * dims[axis + 1];
    }
    for flat in 0..n {
        let node = grid.unflatten(flat);
        let mut degree = 0i64;
        for (axis, (&c, &len)) in node.coords().iter().zip(dims).enumerate() {
            if c > 1 {
                entries[flat * n + (flat - strides[axis])] = -1;
                degree += 1;
            }
            if c < len {
                entries[flat * n + (flat + strides[axis])] = -1;
                degree += 1;
            }
        }
        entries[flat * n + flat] = degree;
    }
    Ok(LaplacianMatrix { order: n, entries })
}

/// Index permutation that reverses one axis of a grid.
///
/// Applying it to a vector, seen as a function on nodes, replaces the value at
/// `[(i)_1, ..., (i)_l, ...]` by the value at `[(i)_1, ..., n_l - (i)_l + 1, ...]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipOperator {
    axis: usize,
    perm: Vec<usize>,
}

impl FlipOperator {
    /// 1-based axis this operator reverses.
    pub fn axis(&self) -> usize {
        self.axis
    }

    /// The underlying permutation: entry `i` is the flat index whose value
    /// lands at flat position `i`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Apply to a vector indexed by flat node order.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.perm.len());
        self.perm.iter().map(|&src| v[src]).collect()
    }

    /// Image of a single node.
    pub fn map_node(&self, grid: &GridSpec, node: &NodeIndex) -> NodeIndex {
        let mut coords = node.coords().to_vec();
        coords[self.axis - 1] = grid.dims()[self.axis - 1] - coords[self.axis - 1] + 1;
        NodeIndex::new(coords)
    }
}

/// Reversal of the given 1-based axis.
pub fn flip_operator(grid: &GridSpec, axis: usize) -> Result<FlipOperator> {
    if axis < 1 || axis > grid.ndim() {
        return Err(GridError::AxisOutOfRange { axis, ndim: grid.ndim() });
    }
    let perm = (0..grid.node_count())
        .map(|flat| {
            let node = grid.unflatten(flat);
            let mut coords = node.coords().to_vec();
            coords[axis - 1] = grid.dims()[axis - 1] - coords[axis - 1] + 1;
            grid.flatten(&NodeIndex::new(coords))
        })
        .collect();
    Ok(FlipOperator { axis, perm })
}
