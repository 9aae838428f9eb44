//! Closed-form eigensystems of paths and grids.
//!
//! The path Laplacian on `n` nodes has the simple eigenvalues
//! `lambda_k = 2 - 2cos((k-1)pi/n)`, `k = 1..=n`, with eigenvectors
//! `(v_k)_j = cos((2j-1)(k-1)pi/(2n))`. A grid's Laplacian is the Kronecker
//! sum of its axis paths, so its eigenvalues are sums of per-axis path
//! eigenvalues and its eigenvectors are Kronecker products of path
//! eigenvectors. Everything in this module is built from those formulas;
//! nothing here calls a numeric eigensolver.
//!
//! Eigenvalues are tracked as tuples of exact rational angles (the `a` in
//! `2 - 2cos(a*pi)`) alongside a high-precision numeric value. Tuples whose
//! angle multisets coincide are equal by construction; genuinely different
//! multisets can still collide numerically (e.g. `2 - 2cos(2pi/3) = 3 =
//! (2 - 2cos(pi/2)) + (2 - 2cos(pi/3))`), which is why grouping is numeric,
//! tolerance-audited, and refuses to guess inside the ambiguous band.

use num_rational::Ratio;
use rug::Float;

use crate::error::{GridError, Result};
use crate::grid::{GridSpec, NodeIndex};
use crate::precision::{Precision, GROUP_GUARD_FACTOR, GROUP_TOLERANCE};

/// Behaviour of a path eigenvector under reversal of the path.
///
/// `Plus` means `v = Pv` (index `k` odd), `Minus` means `v = -Pv` (index `k`
/// even), with `P` the reversal permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymmetrySign {
    Plus,
    Minus,
}

impl SymmetrySign {
    /// Sign of the path eigenvector with 1-based index `k`.
    pub fn from_index(k: usize) -> Self {
        if k % 2 == 1 {
            SymmetrySign::Plus
        } else {
            SymmetrySign::Minus
        }
    }

    /// `+1.0` or `-1.0`.
    pub fn factor(self) -> f64 {
        match self {
            SymmetrySign::Plus => 1.0,
            SymmetrySign::Minus => -1.0,
        }
    }
}

impl std::fmt::Display for SymmetrySign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SymmetrySign::Plus => "+",
            SymmetrySign::Minus => "-",
        })
    }
}

/// One eigenpair of a path Laplacian.
#[derive(Debug, Clone)]
pub struct PathEigenpair {
    /// Path length.
    pub n: usize,
    /// 1-based eigenvalue index; `k = 1` is the zero eigenvalue.
    pub k: usize,
    /// Exact angle `(k-1)/n` in lowest terms; the eigenvalue is
    /// `2 - 2cos(angle * pi)`.
    pub angle: Ratio<i64>,
    /// Eigenvalue as `f64`.
    pub value: f64,
    /// Eigenvector, normalized to unit infinity norm with positive first
    /// component. Components that are exact zeros of the cosine formula are
    /// stored as exact `0.0`.
    pub vector: Vec<f64>,
    /// Reversal symmetry of the eigenvector.
    pub sign: SymmetrySign,
}

/// Component `j` (1-based) of the path-`n` eigenvector with index `k`,
/// before normalization. Exact zeros are returned as exact `0.0`.
pub(crate) fn path_vector_component(n: usize, k: usize, j: usize) -> f64 {
    let t = (2 * j - 1) * (k - 1);
    // cos(t*pi/(2n)) vanishes exactly when t is an odd multiple of n.
    let r = t % (4 * n);
    if r % (2 * n) == n {
        return 0.0;
    }
    (r as f64 * std::f64::consts::PI / (2.0 * n as f64)).cos()
}

/// Full eigensystem of the path on `n` nodes, ordered by ascending eigenvalue.
pub fn path_eigensystem(n: usize, prec: &Precision) -> Result<Vec<PathEigenpair>> {
    GridSpec::path(n)?;
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let angle = Ratio::new(k as i64 - 1, n as i64);
        let value = prec.eigenvalue_term(angle).to_f64();
        let mut vector: Vec<f64> = (1..=n).map(|j| path_vector_component(n, k, j)).collect();
        let sup = vector.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        for x in &mut vector {
            *x /= sup;
        }
        out.push(PathEigenpair { n, k, angle, value, vector, sign: SymmetrySign::from_index(k) });
    }
    Ok(out)
}

/// A grid eigenvalue: exact per-axis angle decomposition plus numeric value.
///
/// For eigenvalues of multiplicity above one, `angles` holds the
/// lexicographically smallest decomposition; the full list lives in the
/// owning [`EigenBasis`].
#[derive(Debug, Clone)]
pub struct SpectralValue {
    /// Per-axis angles `(k_l - 1)/n_l` in lowest terms.
    pub angles: Vec<Ratio<i64>>,
    /// Number of distinct index tuples sharing this numeric value.
    pub multiplicity: usize,
    value_hp: Float,
}

impl SpectralValue {
    pub(crate) fn new(angles: Vec<Ratio<i64>>, multiplicity: usize, value_hp: Float) -> Self {
        Self { angles, multiplicity, value_hp }
    }

    /// Numeric value as `f64`.
    pub fn value(&self) -> f64 {
        self.value_hp.to_f64()
    }

    /// Numeric value at full working precision.
    pub fn value_hp(&self) -> &Float {
        &self.value_hp
    }

    /// Plain-decimal rendering with the given number of significant digits.
    pub fn decimal(&self, significant: usize) -> String {
        crate::precision::to_decimal_string(&self.value_hp, significant)
    }
}

/// One member of an eigenvalue's Kronecker-product basis.
#[derive(Debug, Clone)]
pub struct TaggedBasisVector {
    /// 1-based per-axis path eigenvalue indices `(k_1, ..., k_d)`.
    pub indices: Vec<usize>,
    /// Per-axis angles in lowest terms.
    pub angles: Vec<Ratio<i64>>,
    /// Per-axis reversal symmetries.
    pub signs: Vec<SymmetrySign>,
    /// The Kronecker-product eigenvector in flat node order, unit infinity
    /// norm, positive first component.
    pub vector: Vec<f64>,
}

/// An eigenvalue of a grid together with its full eigenvector basis.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    /// The eigenvalue; `value.multiplicity == vectors.len()`.
    pub value: SpectralValue,
    /// Basis vectors sorted by index tuple. Distinct Kronecker tuples are
    /// mutually orthogonal, so this is an orthogonal basis of the eigenspace.
    pub vectors: Vec<TaggedBasisVector>,
}

/// Complete spectrum of a grid, grouped by numeric eigenvalue.
#[derive(Debug, Clone)]
pub struct GridSpectrum {
    grid: GridSpec,
    groups: Vec<EigenBasis>,
}

impl GridSpectrum {
    /// The grid this spectrum belongs to.
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Eigenvalue groups in ascending numeric order.
    pub fn groups(&self) -> &[EigenBasis] {
        &self.groups
    }

    /// Largest eigenvalue multiplicity.
    pub fn max_multiplicity(&self) -> usize {
        self.groups.iter().map(|g| g.value.multiplicity).max().unwrap_or(0)
    }

    /// Whether every eigenvalue is simple.
    pub fn is_simple(&self) -> bool {
        self.max_multiplicity() <= 1
    }
}

/// Kronecker product of per-axis vectors, laid out in the grid's flat node
/// order (axis 1 most significant).
pub(crate) fn kronecker_vector(factors: &[&[f64]]) -> Vec<f64> {
    let mut out = vec![1.0];
    for f in factors {
        let mut next = Vec::with_capacity(out.len() * f.len());
        for &a in &out {
            for &b in *f {
                next.push(a * b);
            }
        }
        out = next;
    }
    out
}

/// Spectrum of a grid with eigenvalues grouped by numeric coincidence.
///
/// Grouping merges values within `1e-9` (absolute) and then audits the
/// result: members of one group may not spread wider than the tolerance, and
/// adjacent groups must be separated by at least ten times the tolerance.
/// Violations raise [`GridError::PrecisionAmbiguity`] instead of guessing.
pub fn grid_spectrum(grid: &GridSpec, prec: &Precision) -> Result<GridSpectrum> {
    let dims = grid.dims();
    let axis_systems: Vec<Vec<PathEigenpair>> = dims
        .iter()
        .map(|&n| path_eigensystem(n, prec))
        .collect::<Result<_>>()?;
    // One high-precision term per distinct reduced angle, shared across axes
    // so equal angles always contribute bit-identical floats.
    let mut term_cache: std::collections::HashMap<Ratio<i64>, Float> =
        std::collections::HashMap::new();

    struct Entry {
        value: Float,
        indices: Vec<usize>,
    }

    let mut entries = Vec::with_capacity(grid.node_count());
    let mut indices = vec![1usize; dims.len()];
    loop {
        // Sum the angle multiset in sorted order so equal multisets produce
        // bit-identical floats regardless of which axes contribute them.
        let mut angles: Vec<Ratio<i64>> = indices
            .iter()
            .zip(dims)
            .map(|(&k, &n)| Ratio::new(k as i64 - 1, n as i64))
            .collect();
        angles.sort();
        let mut value = prec.zero();
        for angle in &angles {
            let term = term_cache
                .entry(*angle)
                .or_insert_with(|| prec.eigenvalue_term(*angle));
            value += &*term;
        }
        entries.push(Entry { value, indices: indices.clone() });

        // Advance the multi-index.
        let mut axis = dims.len();
        loop {
            if axis == 0 {
                break;
            }
            axis -= 1;
            if indices[axis] < dims[axis] {
                indices[axis] += 1;
                break;
            }
            indices[axis] = 1;
        }
        if indices.iter().all(|&k| k == 1) {
            break;
        }
    }

    entries.sort_by(|a, b| a.value.partial_cmp(&b.value).expect("finite eigenvalues"));

    let tol = prec.from_f64(GROUP_TOLERANCE);
    let guard = prec.from_f64(GROUP_TOLERANCE * GROUP_GUARD_FACTOR);

    let mut groups: Vec<Vec<Entry>> = Vec::new();
    for entry in entries {
        match groups.last_mut() {
            Some(group) => {
                let gap = Float::with_val(prec.bits(), &entry.value - &group.last().unwrap().value);
                if gap <= tol {
                    group.push(entry);
                } else {
                    if gap <= guard {
                        return Err(GridError::PrecisionAmbiguity {
                            gap: gap.to_f64(),
                            tolerance: GROUP_TOLERANCE,
                            guard: GROUP_TOLERANCE * GROUP_GUARD_FACTOR,
                        });
                    }
                    groups.push(vec![entry]);
                }
            }
            None => groups.push(vec![entry]),
        }
    }

    let mut out = Vec::with_capacity(groups.len());
    for mut group in groups {
        let diameter =
            Float::with_val(prec.bits(), &group.last().unwrap().value - &group[0].value);
        if diameter > tol {
            return Err(GridError::PrecisionAmbiguity {
                gap: diameter.to_f64(),
                tolerance: GROUP_TOLERANCE,
                guard: GROUP_TOLERANCE * GROUP_GUARD_FACTOR,
            });
        }
        group.sort_by(|a, b| a.indices.cmp(&b.indices));
        let multiplicity = group.len();
        let vectors: Vec<TaggedBasisVector> = group
            .iter()
            .map(|e| {
                let factors: Vec<&[f64]> = e
                    .indices
                    .iter()
                    .enumerate()
                    .map(|(ax, &k)| axis_systems[ax][k - 1].vector.as_slice())
                    .collect();
                TaggedBasisVector {
                    indices: e.indices.clone(),
                    angles: e
                        .indices
                        .iter()
                        .zip(dims)
                        .map(|(&k, &n)| Ratio::new(k as i64 - 1, n as i64))
                        .collect(),
                    signs: e.indices.iter().map(|&k| SymmetrySign::from_index(k)).collect(),
                    vector: kronecker_vector(&factors),
                }
            })
            .collect();
        let value = SpectralValue::new(
            vectors[0].angles.clone(),
            multiplicity,
            group[0].value.clone(),
        );
        out.push(EigenBasis { value, vectors });
    }

    Ok(GridSpectrum { grid: grid.clone(), groups: out })
}

/// Whether every eigenvalue of the grid is simple.
pub fn is_simple(grid: &GridSpec, prec: &Precision) -> Result<bool> {
    Ok(grid_spectrum(grid, prec)?.is_simple())
}

/// Lower bound on the size of any controlling (observing) node set: the
/// largest eigenvalue multiplicity. Fewer nodes than this can never work,
/// because the node-selection rows of a multiplicity-`m` eigenspace basis
/// always have a null vector when there are fewer than `m` of them.
pub fn min_control_set_size(grid: &GridSpec, prec: &Precision) -> Result<usize> {
    Ok(grid_spectrum(grid, prec)?.max_multiplicity())
}

/// Reduced denominator of a basis vector's angle on one (1-based) axis.
///
/// This is the order of the cosine pattern along that axis; the vector
/// vanishes at coordinate `c` exactly when the denominator is odd, above 1,
/// and divides `2c - 1`.
pub fn angle_denominator(angles: &[Ratio<i64>], axis: usize) -> u64 {
    *angles[axis - 1].denom() as u64
}

/// Nodes where a tagged Kronecker basis vector vanishes exactly, derived from
/// the integer zero pattern of the cosine formula.
pub fn exact_zero_nodes(grid: &GridSpec, tagged: &TaggedBasisVector) -> Vec<NodeIndex> {
    let dims = grid.dims();
    // Coordinates with a zero component, per axis.
    let axis_zeros: Vec<Vec<usize>> = (0..dims.len())
        .map(|ax| {
            let n = dims[ax];
            let k = tagged.indices[ax];
            (1..=n)
                .filter(|&j| {
                    let t = (2 * j - 1) * (k - 1);
                    t % (2 * n) == n
                })
                .collect()
        })
        .collect();
    grid.nodes()
        .filter(|node| {
            node.coords()
                .iter()
                .enumerate()
                .any(|(ax, c)| axis_zeros[ax].contains(c))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid_laplacian, build_path_laplacian};

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn path3_closed_form() {
        let sys = path_eigensystem(3, &prec()).unwrap();
        assert_eq!(sys.len(), 3);
        assert!((sys[0].value - 0.0).abs() < 1e-15);
        assert!((sys[1].value - 1.0).abs() < 1e-15);
        assert!((sys[2].value - 3.0).abs() < 1e-15);
        // k=2 eigenvector is proportional to (1, 0, -1).
        let v = &sys[1].vector;
        assert!((v[0] - 1.0).abs() < 1e-15);
        assert_eq!(v[1], 0.0, "interior zero must be exact");
        assert!((v[2] + 1.0).abs() < 1e-15);
        assert_eq!(sys[1].sign, SymmetrySign::Minus);
        assert_eq!(sys[2].sign, SymmetrySign::Plus);
    }

    #[test]
    fn path_eigen_residuals() {
        let p = prec();
        for n in [1usize, 2, 3, 5, 8, 13, 40] {
            let lap = build_path_laplacian(n).unwrap();
            for pair in path_eigensystem(n, &p).unwrap() {
                let res = lap.eigen_residual(&pair.vector, pair.value);
                assert!(res <= 1e-12, "n={n} k={} residual {res}", pair.k);
            }
        }
    }

    #[test]
    fn path_vectors_orthogonal_and_normalized() {
        let sys = path_eigensystem(9, &prec()).unwrap();
        for a in &sys {
            let sup = a.vector.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
            assert!((sup - 1.0).abs() < 1e-15);
            assert!(a.vector[0] > 0.0);
            for b in &sys {
                if a.k == b.k {
                    continue;
                }
                let dot: f64 = a.vector.iter().zip(&b.vector).map(|(x, y)| x * y).sum();
                assert!(dot.abs() < 1e-12, "k={} vs k={}: {dot}", a.k, b.k);
            }
        }
    }

    #[test]
    fn spectrum_2x2() {
        let g = GridSpec::new(vec![2, 2]).unwrap();
        let s = grid_spectrum(&g, &prec()).unwrap();
        let summary: Vec<(f64, usize)> =
            s.groups().iter().map(|g| (g.value.value(), g.value.multiplicity)).collect();
        assert_eq!(summary.len(), 3);
        assert!((summary[0].0 - 0.0).abs() < 1e-12 && summary[0].1 == 1);
        assert!((summary[1].0 - 2.0).abs() < 1e-12 && summary[1].1 == 2);
        assert!((summary[2].0 - 4.0).abs() < 1e-12 && summary[2].1 == 1);
    }

    #[test]
    fn spectrum_2x3_has_cross_axis_collision() {
        // 2 - 2cos(2pi/3) = 3 equals (2 - 2cos(pi/2)) + (2 - 2cos(pi/3)):
        // an eigenvalue shared by decompositions with different angle
        // multisets, which only numeric grouping can merge.
        let g = GridSpec::new(vec![2, 3]).unwrap();
        let s = grid_spectrum(&g, &prec()).unwrap();
        let three = s
            .groups()
            .iter()
            .find(|gr| (gr.value.value() - 3.0).abs() < 1e-12)
            .expect("eigenvalue 3 present");
        assert_eq!(three.value.multiplicity, 2);
        assert!(!s.is_simple());
        assert_eq!(s.max_multiplicity(), 2);
    }

    #[test]
    fn spectrum_7x15_simple() {
        let g = GridSpec::new(vec![7, 15]).unwrap();
        let s = grid_spectrum(&g, &prec()).unwrap();
        assert_eq!(s.groups().len(), 105);
        assert!(s.is_simple());
    }

    #[test]
    fn min_control_set_size_4x6() {
        let g = GridSpec::new(vec![4, 6]).unwrap();
        assert_eq!(min_control_set_size(&g, &prec()).unwrap(), 2);
    }

    #[test]
    fn grid_vectors_are_eigenvectors() {
        let p = prec();
        for dims in [vec![2, 2], vec![3, 4], vec![2, 3, 2]] {
            let g = GridSpec::new(dims).unwrap();
            let lap = build_grid_laplacian(&g).unwrap();
            let s = grid_spectrum(&g, &p).unwrap();
            let mut count = 0;
            for group in s.groups() {
                for v in &group.vectors {
                    let res = lap.eigen_residual(&v.vector, group.value.value());
                    assert!(res <= 1e-10, "residual {res} in {g}");
                    count += 1;
                }
            }
            assert_eq!(count, g.node_count());
        }
    }

    #[test]
    fn exact_zero_nodes_match_components() {
        let p = prec();
        let g = GridSpec::new(vec![4, 6]).unwrap();
        let s = grid_spectrum(&g, &p).unwrap();
        for group in s.groups() {
            for v in &group.vectors {
                let zeros = exact_zero_nodes(&g, v);
                for node in g.nodes() {
                    let flat = g.flatten(&node);
                    if zeros.contains(&node) {
                        assert_eq!(v.vector[flat], 0.0);
                    } else {
                        assert!(v.vector[flat].abs() > 1e-6);
                    }
                }
            }
        }
    }
}
