//! Controllability of grids whose eigenvalues are all simple.
//!
//! For a simple eigenvalue the eigenspace is one Kronecker product of path
//! eigenvectors, so PBH reduces to an integer question: the eigenvalue is
//! uncontrollable from a node set iff at every queried node some axis factor
//! vanishes, and the axis factor with reduced angle `v/R` vanishes at
//! coordinate `c` iff `v` odd, `R` odd `> 1`, `R | 2c - 1`.
//!
//! The partition packaging turns the same facts into per-node symbol sets:
//! each node gets every tuple of odd prime powers (one per axis) for which
//! at least one axis congruence holds at that node, and the grid is
//! controllable from a set iff the tuple sets have empty intersection. Axes
//! whose length has no odd prime factor contribute the placeholder symbol
//! `1`, which never satisfies a congruence but keeps tuples over the other
//! axes expressible.

use std::collections::BTreeSet;

use crate::error::{GridError, Result};
use crate::grid::{build_grid_laplacian, GridSpec, NodeIndex};
use crate::path_analysis::{odd_prime_power_divisors, path_node_uncontrollable};
use crate::precision::Precision;
use crate::spectral::{exact_zero_nodes, grid_spectrum, GridSpectrum, SpectralValue};
use crate::witness::Witness;

/// Whether the path-`n` eigenvector with 1-based index `k` vanishes at
/// coordinate `c`.
pub(crate) fn path_component_vanishes(n: usize, k: usize, c: usize) -> bool {
    ((2 * c - 1) * (k - 1)) % (2 * n) == n
}

/// Per-axis blocking prime powers for one node: entry `l` lists the odd
/// prime powers `q | n_l` with `q | 2(i)_l - 1`. Any nonempty entry means
/// some simple eigenvalue is uncontrollable from this node.
pub fn grid_node_uncontrollable_simple(g: &GridSpec, node: &NodeIndex) -> Result<Vec<Vec<u64>>> {
    if !g.contains(node) {
        return Err(GridError::NodeOutOfRange {
            node: node.coords().to_vec(),
            dims: g.dims().to_vec(),
        });
    }
    g.dims()
        .iter()
        .zip(node.coords())
        .map(|(&n, &c)| path_node_uncontrollable(n, c))
        .collect()
}

/// Per-axis symbol alphabets for partition tuples: the odd prime-power
/// divisors of each axis length, or the placeholder `[1]` when there are
/// none.
pub fn partition_alphabet(g: &GridSpec) -> Result<Vec<Vec<u64>>> {
    g.dims()
        .iter()
        .map(|&n| {
            let qs = odd_prime_power_divisors(n as u64)?;
            Ok(if qs.is_empty() { vec![1] } else { qs })
        })
        .collect()
}

/// A node's partition entry: every symbol tuple it blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionEntry {
    /// The node.
    pub node: NodeIndex,
    /// Tuples `(q_1, ..., q_d)`, one symbol per axis drawn from
    /// [`partition_alphabet`], such that at least one axis congruence
    /// `q_l | 2(i)_l - 1` holds (placeholder symbols never do). Sorted.
    pub tuples: Vec<Vec<u64>>,
}

impl PartitionEntry {
    /// Whether the node blocks no tuple at all.
    pub fn is_clear(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// Cartesian product of the per-axis alphabets.
fn all_tuples(alphabet: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![Vec::new()];
    for axis in alphabet {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for t in &out {
            for &q in axis {
                let mut t = t.clone();
                t.push(q);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Partition entries for the given nodes.
pub fn build_partition(g: &GridSpec, nodes: &[NodeIndex]) -> Result<Vec<PartitionEntry>> {
    if nodes.is_empty() {
        return Err(GridError::EmptyNodeSet);
    }
    let alphabet = partition_alphabet(g)?;
    let tuples = all_tuples(&alphabet);
    nodes
        .iter()
        .map(|node| {
            if !g.contains(node) {
                return Err(GridError::NodeOutOfRange {
                    node: node.coords().to_vec(),
                    dims: g.dims().to_vec(),
                });
            }
            let blocked: Vec<Vec<u64>> = tuples
                .iter()
                .filter(|t| {
                    t.iter().zip(node.coords()).any(|(&q, &c)| q > 1 && (2 * c as u64 - 1).is_multiple_of(q))
                })
                .cloned()
                .collect();
            Ok(PartitionEntry { node: node.clone(), tuples: blocked })
        })
        .collect()
}

/// An uncontrollable grid eigenvalue with its certificate.
#[derive(Debug, Clone)]
pub struct GridMode {
    /// The eigenvalue with its per-axis angle decomposition.
    pub value: SpectralValue,
    /// Eigenvector vanishing on every queried node (and on the rest of its
    /// exact zero set).
    pub witness: Witness,
}

/// Controllability verdict for a node set on a grid.
#[derive(Debug, Clone)]
pub struct GridVerdict {
    /// Whether the pair (grid Laplacian, node set) is controllable.
    pub controllable: bool,
    /// Symbol tuples blocked by every queried node; empty iff controllable
    /// when the grid is simple.
    pub common_tuples: Vec<Vec<u64>>,
    /// Every uncontrollable eigenvalue, ascending, with witnesses.
    pub uncontrollable: Vec<GridMode>,
}

/// Eigenvalues of a simple grid that are uncontrollable from the node set:
/// those whose (unique) eigenvector vanishes at every queried node. Pure
/// integer arithmetic on the precomputed spectrum.
pub(crate) fn blocked_simple_groups<'s>(
    spectrum: &'s GridSpectrum,
    nodes: &[NodeIndex],
) -> Vec<&'s crate::spectral::EigenBasis> {
    let dims = spectrum.grid().dims();
    spectrum
        .groups()
        .iter()
        .filter(|group| {
            let tagged = &group.vectors[0];
            nodes.iter().all(|node| {
                node.coords()
                    .iter()
                    .enumerate()
                    .any(|(ax, &c)| path_component_vanishes(dims[ax], tagged.indices[ax], c))
            })
        })
        .collect()
}

/// Decide controllability of a simple grid from a node set via the
/// partition intersection test, and enumerate the uncontrollable
/// eigenvalues with witnesses.
///
/// Errors with [`GridError::NotSimple`] when the grid has a multiple
/// eigenvalue; multiplicities need the rank analysis in the symmetry module.
pub fn simple_grid_controllable(
    g: &GridSpec,
    nodes: &[NodeIndex],
    prec: &Precision,
) -> Result<GridVerdict> {
    let spectrum = grid_spectrum(g, prec)?;
    if !spectrum.is_simple() {
        return Err(GridError::NotSimple { multiplicity: spectrum.max_multiplicity() });
    }
    simple_verdict(&spectrum, nodes)
}

/// The intersection test and eigenvalue enumeration on a precomputed simple
/// spectrum.
pub(crate) fn simple_verdict(spectrum: &GridSpectrum, nodes: &[NodeIndex]) -> Result<GridVerdict> {
    let g = spectrum.grid();
    let entries = build_partition(g, nodes)?;
    let mut common: BTreeSet<Vec<u64>> = entries[0].tuples.iter().cloned().collect();
    for entry in &entries[1..] {
        let tuples: BTreeSet<Vec<u64>> = entry.tuples.iter().cloned().collect();
        common = common.intersection(&tuples).cloned().collect();
    }

    let blocked = blocked_simple_groups(spectrum, nodes);
    // The symbol test and the direct eigenvector test characterize the same
    // failure; a mismatch would be an implementation bug.
    debug_assert_eq!(common.is_empty(), blocked.is_empty());

    let lap = build_grid_laplacian(g)?;
    let uncontrollable = blocked
        .into_iter()
        .map(|group| {
            let tagged = &group.vectors[0];
            let witness = Witness::checked(
                &lap,
                g,
                group.value.value(),
                tagged.vector.clone(),
                exact_zero_nodes(g, tagged),
            )?;
            Ok(GridMode { value: group.value.clone(), witness })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(GridVerdict {
        controllable: common.is_empty(),
        common_tuples: common.into_iter().collect(),
        uncontrollable,
    })
}

/// A node set from which a simple grid is always controllable: its first
/// corner. Corner coordinates are all 1, so `2c - 1 = 1` defeats every
/// congruence on every axis.
pub fn suggest_control_nodes(g: &GridSpec, prec: &Precision) -> Result<Vec<NodeIndex>> {
    let spectrum = grid_spectrum(g, prec)?;
    if !spectrum.is_simple() {
        return Err(GridError::NotSimple { multiplicity: spectrum.max_multiplicity() });
    }
    Ok(vec![NodeIndex::new(vec![1; g.ndim()])])
}
