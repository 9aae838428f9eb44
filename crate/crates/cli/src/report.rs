//! Serializable report types. Every JSON report carries the schema tag and
//! validates against `schema/report.v1.json`.

use gridctl_core::{GridSpec, NodeIndex, SpectralValue, Witness};
use serde::Serialize;

/// Schema identifier embedded in every report.
pub const SCHEMA: &str = "gridctl-report/v1";

/// Number of significant digits in decimal eigenvalue renderings.
pub const EIGENVALUE_DIGITS: usize = 17;

#[derive(Debug, Clone, Serialize)]
pub struct AngleDto {
    pub num: i64,
    pub den: i64,
}

/// An eigenvalue as exact per-axis angles plus decimal renderings: the
/// value is `sum_l (2 - 2 cos(pi * num_l/den_l))`.
#[derive(Debug, Clone, Serialize)]
pub struct EigenvalueDto {
    pub angles: Vec<AngleDto>,
    pub decimal: String,
    pub approx: f64,
}

impl EigenvalueDto {
    pub fn new(value: &SpectralValue) -> Self {
        Self {
            angles: value
                .angles
                .iter()
                .map(|a| AngleDto { num: *a.numer(), den: *a.denom() })
                .collect(),
            decimal: value.decimal(EIGENVALUE_DIGITS),
            approx: value.value(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessDto {
    /// Eigenvector in flat node order, unit infinity norm.
    pub vector: Vec<f64>,
    /// Nodes the vector is certified to vanish on.
    pub claimed_zeros: Vec<Vec<usize>>,
    /// Measured eigen-residual.
    pub residual: f64,
}

impl WitnessDto {
    pub fn new(witness: &Witness) -> Self {
        Self {
            vector: witness.vector.clone(),
            claimed_zeros: witness.claimed_zeros.iter().map(|n| n.coords().to_vec()).collect(),
            residual: witness.residual,
        }
    }
}

/// One uncontrollable (unobservable) eigenvalue in an analysis report.
#[derive(Debug, Clone, Serialize)]
pub struct ModeDto {
    pub eigenvalue: EigenvalueDto,
    pub multiplicity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDto>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleDto {
    /// Whether the oracle reproduces the structural verdict and the same
    /// uncontrollable eigenvalues.
    pub agreement: bool,
    /// Uncontrollable eigenvalues per the PBH projection test.
    pub uncontrollable: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub mode: &'static str,
    pub dims: Vec<usize>,
    pub nodes: Vec<Vec<usize>>,
    pub simple: bool,
    pub max_multiplicity: usize,
    pub min_control_set_size: usize,
    pub controllable: bool,
    /// Verdict in the vocabulary of the requested mode.
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Partition symbol tuples shared by every queried node.
    pub common_tuples: Vec<Vec<u64>>,
    pub uncontrollable: Vec<ModeDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleDto>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MarkerDto {
    pub axis: usize,
    pub q: u64,
}

/// One partition symbol: an odd prime power on one axis, together with the
/// 1-based coordinates it marks along that axis.
#[derive(Debug, Clone, Serialize)]
pub struct AxisSymbolDto {
    pub axis: usize,
    pub q: u64,
    pub coords: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeMarkersDto {
    pub node: Vec<usize>,
    pub markers: Vec<MarkerDto>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassDto {
    /// 1-based class symbol; 0 collects nodes where the whole eigenspace
    /// vanishes.
    pub symbol: usize,
    pub nodes: Vec<Vec<usize>>,
}

/// Per-eigenvalue node classes for a multiple eigenvalue: nodes in one
/// class see proportional eigenspace coordinates, so any two of them leave
/// the eigenvalue uncontrollable.
#[derive(Debug, Clone, Serialize)]
pub struct EigenClassesDto {
    pub eigenvalue: EigenvalueDto,
    pub multiplicity: usize,
    pub carrying_brick: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inherited_from: Option<Vec<usize>>,
    pub classes: Vec<ClassDto>,
}

#[derive(Debug, Serialize)]
pub struct PartitionReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub mode: &'static str,
    pub dims: Vec<usize>,
    /// Per-axis odd prime power symbols (axes without any are omitted).
    pub alphabet: Vec<AxisSymbolDto>,
    pub nodes: Vec<NodeMarkersDto>,
    /// Classes of each multiple eigenvalue; empty on simple grids.
    pub multiple: Vec<EigenClassesDto>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupDto {
    pub eigenvalue: EigenvalueDto,
    pub multiplicity: usize,
    /// 1-based per-axis path eigenvalue indices of each basis vector.
    pub tuples: Vec<Vec<usize>>,
    /// Reversal symmetry class of each basis vector, e.g. "S^{+-}".
    pub classes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultipleDto {
    pub eigenvalue: EigenvalueDto,
    pub multiplicity: usize,
    /// Smallest brick whose tiling carries the eigenspace.
    pub carrying_brick: Vec<usize>,
    /// Smallest proper sub-brick whose spectrum contains the eigenvalue.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inherited_from: Option<Vec<usize>>,
    /// Symmetry classes of the carrying brick's eigenbasis at this value.
    pub brick_classes: Vec<String>,
    /// Two-class combination rule label (a, b, or c) when one applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<char>,
    pub violation: bool,
}

#[derive(Debug, Serialize)]
pub struct SpectrumReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub dims: Vec<usize>,
    pub node_count: usize,
    pub distinct_eigenvalues: usize,
    pub simple: bool,
    pub max_multiplicity: usize,
    pub min_control_set_size: usize,
    pub groups: Vec<GroupDto>,
    pub multiple: Vec<MultipleDto>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct SuggestReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub mode: &'static str,
    pub dims: Vec<usize>,
    pub nodes: Vec<Vec<usize>>,
    pub size: usize,
    pub justification: String,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanEntryDto {
    pub dims: Vec<usize>,
    pub eigenvalue: EigenvalueDto,
    pub multiplicity: usize,
    pub carrying_brick: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inherited_from: Option<Vec<usize>>,
    pub violation: bool,
}

#[derive(Debug, Serialize)]
pub struct ScanReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub max_dims: Vec<usize>,
    pub grids_scanned: usize,
    pub multiple_eigenvalues: usize,
    pub violations: usize,
    pub entries: Vec<ScanEntryDto>,
    pub elapsed_ms: f64,
}

/// Render a grid's dims like `7x15`.
pub fn dims_label(dims: &[usize]) -> String {
    let parts: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    parts.join("x")
}

pub fn node_coords(nodes: &[NodeIndex]) -> Vec<Vec<usize>> {
    nodes.iter().map(|n| n.coords().to_vec()).collect()
}

/// Flat list of real (non-placeholder) partition symbols per axis, each
/// with the axis coordinates it marks.
pub fn alphabet_symbols(g: &GridSpec) -> gridctl_core::Result<Vec<AxisSymbolDto>> {
    let alphabet = gridctl_core::partition_alphabet(g)?;
    let mut symbols = Vec::new();
    for (i, axis_symbols) in alphabet.iter().enumerate() {
        for &q in axis_symbols {
            if q != 1 {
                let coords = gridctl_core::canonical_uncontrollable_set(g.dims()[i], q)?;
                symbols.push(AxisSymbolDto { axis: i + 1, q, coords });
            }
        }
    }
    Ok(symbols)
}
