//! Analysis of multiple eigenvalues: brick structure, eigenvector symmetry
//! classes, component polynomials, and simultaneous-zero rank tests.
//!
//! A multiple grid eigenvalue admits eigenvectors that are combinations of
//! several Kronecker basis vectors, so the integer zero patterns of the
//! simple case no longer decide controllability on their own. Three tools
//! replace them:
//!
//! * bricks: when the eigenvalue already lives on a smaller divisor-dimension
//!   sub-grid, its eigenvectors are tilings of brick eigenvectors by
//!   alternating per-axis reflections;
//! * symmetry classes: each basis vector picks up a definite sign under each
//!   axis reversal, and the sign patterns of a whole eigenspace determine
//!   which absolute-value symmetries survive arbitrary combinations;
//! * component polynomials: the `r`-th component of a path eigenvector is
//!   `p_r(lambda)` times the first, with integer-coefficient `p_r`, turning
//!   "some combination vanishes on these nodes" into a rank question for a
//!   small matrix of polynomial values, evaluated here in high precision.

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;
use rug::Float;

use crate::error::{GridError, Result};
use crate::grid::{build_grid_laplacian, GridSpec, NodeIndex};
use crate::precision::Precision;
use crate::simple_grid::GridVerdict;
use crate::spectral::{
    grid_spectrum, path_vector_component, EigenBasis, GridSpectrum, SpectralValue, SymmetrySign,
};
use crate::witness::Witness;

/// Pivot threshold for the high-precision rank computation: entries at or
/// below `DET_ZERO_FACTOR` times the largest input magnitude, floored at
/// one, count as zero.
pub const DET_ZERO_FACTOR: f64 = 1e-20;

/// Residual bound for accepting a caller-supplied brick eigenvector.
pub const INPUT_EIGENVECTOR_BOUND: f64 = 1e-8;

/// Per-axis sign pattern of a Kronecker basis vector under axis reversals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymmetryClass {
    signs: Vec<SymmetrySign>,
}

impl SymmetryClass {
    /// Build from explicit per-axis signs.
    pub fn new(signs: Vec<SymmetrySign>) -> Self {
        Self { signs }
    }

    /// Per-axis signs.
    pub fn signs(&self) -> &[SymmetrySign] {
        &self.signs
    }

    /// Sign on a 1-based axis.
    pub fn sign(&self, axis: usize) -> SymmetrySign {
        self.signs[axis - 1]
    }
}

impl std::fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "S^{{")?;
        for s in &self.signs {
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// Symmetry class of a tagged Kronecker basis vector: `+` on axis `l` iff
/// the axis-`l` path eigen-index is odd.
pub fn classify_symmetry(tagged: &crate::spectral::TaggedBasisVector) -> SymmetryClass {
    SymmetryClass::new(tagged.signs.clone())
}

/// How the two classes of a two-class eigenspace relate on a 2-D grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoClassRule {
    /// Classes share the axis-1 sign: combinations keep the axis-1 mirror
    /// symmetry of absolute values.
    AxisOneShared,
    /// Classes share the axis-2 sign.
    AxisTwoShared,
    /// Classes differ on both axes: only the full point reflection
    /// survives.
    Antipodal,
}

impl TwoClassRule {
    /// Conventional single-letter label: a, b, or c.
    pub fn label(self) -> char {
        match self {
            TwoClassRule::AxisOneShared => 'a',
            TwoClassRule::AxisTwoShared => 'b',
            TwoClassRule::Antipodal => 'c',
        }
    }
}

/// Symmetries an eigenspace imposes on every eigenvector, including
/// arbitrary combinations of basis vectors.
#[derive(Debug, Clone)]
pub struct SymmetryProfile {
    /// Distinct classes among the basis vectors, sorted.
    pub classes: Vec<SymmetryClass>,
    /// Generating set (over composition) of the axis-flip combinations under
    /// which the absolute value of every eigenvector is invariant; each
    /// entry lists 1-based axes flipped together. Empty means no symmetry
    /// survives combination.
    pub invariant_flip_generators: Vec<Vec<usize>>,
    /// The classical rule label for 2-D two-class eigenspaces.
    pub rule: Option<TwoClassRule>,
}

impl SymmetryProfile {
    /// Whether all basis vectors share one class.
    pub fn is_single_class(&self) -> bool {
        self.classes.len() == 1
    }

    /// Whether any absolute-value symmetry survives combination.
    pub fn has_symmetry(&self) -> bool {
        !self.invariant_flip_generators.is_empty()
    }
}

/// Basis of the GF(2) null space of the given bitmask rows over `d`
/// variables. Each stored pivot row has its pivot as the highest set bit,
/// so back-substitution in ascending pivot order is exact.
fn gf2_null_basis(rows: &[u64], d: usize) -> Vec<u64> {
    let mut pivots: BTreeMap<u32, u64> = BTreeMap::new();
    for &row in rows {
        let mut r = row;
        while r != 0 {
            let bit = 63 - r.leading_zeros();
            match pivots.get(&bit) {
                Some(&p) => r ^= p,
                None => {
                    pivots.insert(bit, r);
                    break;
                }
            }
        }
    }
    let mut basis = Vec::new();
    for f in 0..d as u32 {
        if pivots.contains_key(&f) {
            continue;
        }
        let mut x = 1u64 << f;
        for (&bit, &row) in &pivots {
            // No bits above the pivot exist in its row, and ascending order
            // means every lower bit of x is already final.
            if (row & x).count_ones() % 2 == 1 {
                x |= 1 << bit;
            }
        }
        basis.push(x);
    }
    basis
}

/// Combination symmetries of an eigenspace, from the sign patterns of its
/// Kronecker basis.
///
/// A flip combination acts on every basis vector with the product of the
/// flipped axes' signs; absolute values of arbitrary combinations stay
/// invariant under exactly those flip sets on which all basis classes agree.
/// Those sets form a group computed here as a GF(2) null space of the
/// class differences.
pub fn eigenspace_symmetry_profile(eb: &EigenBasis) -> SymmetryProfile {
    let d = eb.vectors[0].signs.len();
    let mut classes: Vec<SymmetryClass> = eb.vectors.iter().map(classify_symmetry).collect();
    classes.sort();
    classes.dedup();

    let to_mask = |c: &SymmetryClass| -> u64 {
        c.signs()
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, s)| if *s == SymmetrySign::Minus { m | (1 << i) } else { m })
    };
    let base = to_mask(&classes[0]);
    let diffs: Vec<u64> = classes[1..].iter().map(|c| to_mask(c) ^ base).collect();
    let invariant_flip_generators: Vec<Vec<usize>> = gf2_null_basis(&diffs, d)
        .into_iter()
        .map(|mask| (0..d).filter(|ax| mask & (1 << ax) != 0).map(|ax| ax + 1).collect())
        .collect();

    let rule = if d == 2 && classes.len() == 2 {
        let diff = diffs[0];
        Some(match diff {
            0b10 => TwoClassRule::AxisOneShared,
            0b01 => TwoClassRule::AxisTwoShared,
            _ => TwoClassRule::Antipodal,
        })
    } else {
        None
    };

    SymmetryProfile { classes, invariant_flip_generators, rule }
}

/// Components a symmetry class forces to zero: for every odd axis with a
/// minus sign, the whole central slice of that axis. Returns `(axis,
/// center coordinate)` pairs, 1-based.
pub fn central_line_zeros(g: &GridSpec, class: &SymmetryClass) -> Result<Vec<(usize, usize)>> {
    if class.signs().len() != g.ndim() {
        return Err(GridError::ArityMismatch { expected: g.ndim(), got: class.signs().len() });
    }
    Ok(g.dims()
        .iter()
        .enumerate()
        .filter_map(|(ax, &n)| {
            if n % 2 == 1 && class.signs()[ax] == SymmetrySign::Minus {
                Some((ax + 1, n.div_ceil(2)))
            } else {
                None
            }
        })
        .collect())
}

/// Nodes covered by the central slices of [`central_line_zeros`].
pub fn central_zero_nodes(g: &GridSpec, class: &SymmetryClass) -> Result<Vec<NodeIndex>> {
    let slices = central_line_zeros(g, class)?;
    Ok(g.nodes()
        .filter(|node| slices.iter().any(|&(ax, c)| node.coord(ax) == c))
        .collect())
}

/// Tiling of a grid by an axis-wise divisor sub-grid.
#[derive(Debug, Clone)]
pub struct BrickPartition {
    grid: GridSpec,
    base: GridSpec,
    counts: Vec<usize>,
}

impl BrickPartition {
    /// The tiled grid.
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// The brick.
    pub fn base(&self) -> &GridSpec {
        &self.base
    }

    /// Bricks per axis.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Total number of bricks.
    pub fn brick_count(&self) -> usize {
        self.counts.iter().product()
    }

    /// Map a grid node to its 1-based brick multi-index and within-brick
    /// node.
    pub fn locate(&self, node: &NodeIndex) -> (Vec<usize>, NodeIndex) {
        let mut brick = Vec::with_capacity(self.counts.len());
        let mut within = Vec::with_capacity(self.counts.len());
        for (coord, base_n) in node.coords().iter().zip(self.base.dims()) {
            brick.push((coord - 1) / base_n + 1);
            within.push((coord - 1) % base_n + 1);
        }
        (brick, NodeIndex::new(within))
    }

    /// Inverse of [`locate`](Self::locate).
    pub fn node_of(&self, brick: &[usize], within: &NodeIndex) -> NodeIndex {
        let coords = brick
            .iter()
            .zip(within.coords())
            .zip(self.base.dims())
            .map(|((b, w), n)| (b - 1) * n + w)
            .collect();
        NodeIndex::new(coords)
    }
}

/// Partition a grid into bricks of the given base dimensions.
pub fn brick_partition(g: &GridSpec, base: &GridSpec) -> Result<BrickPartition> {
    if base.ndim() != g.ndim()
        || base.dims().iter().zip(g.dims()).any(|(&b, &n)| n % b != 0)
    {
        return Err(GridError::BrickMismatch {
            base: base.dims().to_vec(),
            dims: g.dims().to_vec(),
        });
    }
    let counts = g.dims().iter().zip(base.dims()).map(|(&n, &b)| n / b).collect();
    Ok(BrickPartition { grid: g.clone(), base: base.clone(), counts })
}

/// Extend a brick eigenvector to the whole grid: the sub-vector on brick
/// `(b_1, ..., b_d)` is the base vector with axis `l` reversed iff
/// `b_l - 1` is odd. The result is an eigenvector of the grid Laplacian at
/// the same eigenvalue.
///
/// Returns the grid vector and the eigenvalue (Rayleigh quotient of the
/// validated input).
pub fn predict_brick_subvectors(bp: &BrickPartition, v0: &[f64]) -> Result<(Vec<f64>, f64)> {
    let base_lap = build_grid_laplacian(bp.base())?;
    if v0.len() != base_lap.order() {
        return Err(GridError::ArityMismatch { expected: base_lap.order(), got: v0.len() });
    }
    let sup = v0.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    if sup == 0.0 {
        return Err(GridError::NotAnEigenvector { residual: f64::INFINITY, bound: INPUT_EIGENVECTOR_BOUND });
    }
    let norm2: f64 = v0.iter().map(|x| x * x).sum();
    let image = base_lap.apply(v0);
    let lambda = v0.iter().zip(&image).map(|(a, b)| a * b).sum::<f64>() / norm2;
    let residual = base_lap.eigen_residual(v0, lambda) / sup;
    if residual > INPUT_EIGENVECTOR_BOUND {
        return Err(GridError::NotAnEigenvector { residual, bound: INPUT_EIGENVECTOR_BOUND });
    }

    let base_dims = bp.base().dims().to_vec();
    let mut out = vec![0.0; bp.grid().node_count()];
    for node in bp.grid().nodes() {
        let (brick, within) = bp.locate(&node);
        let mapped: Vec<usize> = brick
            .iter()
            .zip(within.coords())
            .zip(&base_dims)
            .map(|((b, w), n)| if (b - 1) % 2 == 1 { n + 1 - w } else { *w })
            .collect();
        out[bp.grid().flatten(&node)] = v0[bp.base().flatten(&NodeIndex::new(mapped))];
    }

    let grid_lap = build_grid_laplacian(bp.grid())?;
    let grid_residual = grid_lap.eigen_residual(&out, lambda) / sup;
    if grid_residual > INPUT_EIGENVECTOR_BOUND {
        return Err(GridError::NotAnEigenvector { residual: grid_residual, bound: INPUT_EIGENVECTOR_BOUND });
    }
    Ok((out, lambda))
}

/// The polynomial `p_r` expressing component `r` of a path eigenvector as a
/// multiple of its first component: `p_1 = 1`, `p_2 = 1 - s`,
/// `p_r = (2 - s) p_{r-1} - p_{r-2}`. Exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPolynomial {
    r: usize,
    /// Coefficients, ascending powers of `s`; degree `r - 1`.
    coeffs: Vec<rug::Integer>,
}

impl ComponentPolynomial {
    /// Component index this polynomial belongs to (1-based).
    pub fn index(&self) -> usize {
        self.r
    }

    /// Coefficients, ascending powers.
    pub fn coefficients(&self) -> &[rug::Integer] {
        &self.coeffs
    }

    /// Horner evaluation at full working precision.
    pub fn evaluate(&self, x: &Float, prec: &Precision) -> Float {
        let mut acc = prec.zero();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Evaluation rounded to `f64`.
    pub fn evaluate_f64(&self, x: f64, prec: &Precision) -> f64 {
        self.evaluate(&prec.from_f64(x), prec).to_f64()
    }
}

/// Build `p_r` by the integer recursion.
///
/// # Panics
///
/// Panics when `r` is zero; components are 1-based.
pub fn component_polynomial(r: usize) -> ComponentPolynomial {
    assert!(r >= 1, "component indices are 1-based");
    let mut prev: Vec<rug::Integer> = vec![rug::Integer::from(1)];
    if r == 1 {
        return ComponentPolynomial { r, coeffs: prev };
    }
    let mut cur: Vec<rug::Integer> = vec![rug::Integer::from(1), rug::Integer::from(-1)];
    for _ in 3..=r {
        let mut next = vec![rug::Integer::new(); cur.len() + 1];
        for (j, c) in cur.iter().enumerate() {
            next[j] += 2 * c.clone();
            next[j + 1] -= c;
        }
        for (j, c) in prev.iter().enumerate() {
            next[j] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    ComponentPolynomial { r, coeffs: cur }
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// For prime path length `n`, the first `(n-1)/2` components of every
/// eigenvector are nonvanishing; this evaluates `|p_r|` at the eigenvalue
/// with 1-based index `k` in high precision and confirms it clears `1e-10`.
/// A `false` return signals a precision problem, not a mathematical zero.
pub fn nonvanishing_guard(n: usize, r: usize, k: usize, prec: &Precision) -> Result<bool> {
    if !is_prime(n) {
        return Err(GridError::NotPrime { n });
    }
    if r < 1 || r > (n - 1) / 2 {
        return Err(GridError::ComponentOutOfRange { index: r, min: 1, max: (n - 1) / 2 });
    }
    if k < 1 || k > n {
        return Err(GridError::NodeOutOfRange { node: vec![k], dims: vec![n] });
    }
    let lambda = prec.eigenvalue_term(Ratio::new(k as i64 - 1, n as i64));
    let value = component_polynomial(r).evaluate(&lambda, prec);
    Ok(value.abs() > 1e-10)
}

/// Evaluation cache for polynomial components across one analysis.
struct PolyCache {
    polys: HashMap<usize, ComponentPolynomial>,
    values: HashMap<(usize, Ratio<i64>), Float>,
}

impl PolyCache {
    fn new() -> Self {
        Self { polys: HashMap::new(), values: HashMap::new() }
    }

    /// `p_c` evaluated at the path eigenvalue with the given exact angle.
    fn component(&mut self, c: usize, angle: Ratio<i64>, prec: &Precision) -> Float {
        if let Some(v) = self.values.get(&(c, angle)) {
            return v.clone();
        }
        let poly = self.polys.entry(c).or_insert_with(|| component_polynomial(c));
        let lambda = prec.eigenvalue_term(angle);
        let value = poly.evaluate(&lambda, prec);
        self.values.insert((c, angle), value.clone());
        value
    }

    /// High-precision raw component of basis vector `j` at `node`: the
    /// product over axes of `p_{coord}(lambda_axis)` times the product of
    /// first components `cos(angle * pi / 2)`.
    fn entry(&mut self, node: &NodeIndex, angles: &[Ratio<i64>], prec: &Precision) -> Float {
        let mut acc = prec.from_f64(1.0);
        for (coord, angle) in node.coords().iter().zip(angles) {
            acc *= self.component(*coord, *angle, prec);
            let half = Ratio::new(*angle.numer(), angle.denom() * 2);
            acc *= prec.cos_pi(half);
        }
        acc
    }
}

/// Result of high-precision Gaussian elimination.
struct Elimination {
    rank: usize,
    /// Signed product of pivots; meaningful for square input only.
    det: Float,
    /// A null vector of the column space when rank < columns.
    null: Option<Vec<Float>>,
}

/// Row-pivoted Gaussian elimination with a scaled zero threshold. `rows` is
/// an `m x k` matrix; pivots smaller than `DET_ZERO_FACTOR` times the
/// largest original entry magnitude, floored at one, count as zero. The
/// floor keeps the threshold absolute when every true entry vanishes (an
/// eigenspace vanishing on all queried nodes) and the matrix holds nothing
/// but evaluation noise, which a purely relative threshold mistakes for
/// full rank.
fn hp_eliminate(mut rows: Vec<Vec<Float>>, prec: &Precision) -> Elimination {
    let m = rows.len();
    let k = rows[0].len();
    let mut sup = prec.from_f64(1.0);
    for row in &rows {
        for e in row {
            let a = e.clone().abs();
            if a > sup {
                sup = a;
            }
        }
    }
    let threshold = Float::with_val(prec.bits(), &sup * DET_ZERO_FACTOR);

    let mut det = prec.from_f64(1.0);
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row_at = 0usize;
    for col in 0..k {
        // Partial pivoting on the current column.
        let mut best = row_at;
        for r in row_at + 1..m {
            if rows[r][col].clone().abs() > rows[best][col].clone().abs() {
                best = r;
            }
        }
        if rows[best][col].clone().abs() <= threshold {
            continue;
        }
        if best != row_at {
            rows.swap(best, row_at);
            det = -det;
        }
        let pivot_row = rows[row_at].clone();
        let pivot = pivot_row[col].clone();
        det *= &pivot;
        for row in rows.iter_mut().skip(row_at + 1) {
            let factor = Float::with_val(prec.bits(), &row[col] / &pivot);
            for (cell, above) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                let sub = Float::with_val(prec.bits(), &factor * above);
                *cell -= sub;
            }
        }
        pivot_cols.push(col);
        row_at += 1;
        if row_at == m {
            break;
        }
    }
    let rank = pivot_cols.len();
    if rank < k.min(m) {
        det = prec.zero();
    }

    let null = if rank < k {
        // Back-substitute with the first free column set to 1.
        let free = (0..k).find(|c| !pivot_cols.contains(c)).unwrap();
        let mut alpha = vec![prec.zero(); k];
        alpha[free] = prec.from_f64(1.0);
        for (pi, &pc) in pivot_cols.iter().enumerate().rev() {
            if pc > free {
                continue;
            }
            let mut s = prec.zero();
            for c in pc + 1..k {
                let term = Float::with_val(prec.bits(), &rows[pi][c] * &alpha[c]);
                s += term;
            }
            let mut val = Float::with_val(prec.bits(), &s / &rows[pi][pc]);
            val = -val;
            alpha[pc] = val;
        }
        // Normalize to unit sup.
        let mut amax = prec.zero();
        for a in &alpha {
            let m = a.clone().abs();
            if m > amax {
                amax = m;
            }
        }
        for a in &mut alpha {
            *a /= &amax;
        }
        Some(alpha)
    } else {
        None
    };

    Elimination { rank, det, null }
}

/// Raw (unnormalized) Kronecker basis vector in `f64`, from per-axis cosine
/// components.
fn raw_basis_vector(g: &GridSpec, indices: &[usize]) -> Vec<f64> {
    let factors: Vec<Vec<f64>> = g
        .dims()
        .iter()
        .zip(indices)
        .map(|(&n, &k)| (1..=n).map(|j| path_vector_component(n, k, j)).collect())
        .collect();
    let slices: Vec<&[f64]> = factors.iter().map(|f| f.as_slice()).collect();
    crate::spectral::kronecker_vector(&slices)
}

/// Outcome of [`simultaneous_zero_test`].
#[derive(Debug, Clone)]
pub struct SimultaneousZero {
    /// Whether some eigenvector of the eigenspace vanishes on all queried
    /// nodes.
    pub zero: bool,
    /// The high-precision determinant, rounded to `f64`, for diagnostics.
    pub determinant: f64,
    /// Combination coefficients over the (raw) Kronecker basis when `zero`.
    pub alpha: Option<Vec<f64>>,
    /// Validated eigenvector vanishing on the queried nodes when `zero`.
    pub witness: Option<Witness>,
}

/// Decide whether an eigenvalue of multiplicity `mu` admits an eigenvector
/// vanishing simultaneously at `mu` given nodes, by testing the determinant
/// of the `mu x mu` matrix of polynomial component values (row = node,
/// column = basis vector) in high precision.
pub fn simultaneous_zero_test(
    g: &GridSpec,
    eb: &EigenBasis,
    nodes: &[NodeIndex],
    prec: &Precision,
) -> Result<SimultaneousZero> {
    let mu = eb.value.multiplicity;
    if nodes.len() != mu {
        return Err(GridError::ArityMismatch { expected: mu, got: nodes.len() });
    }
    for node in nodes {
        if !g.contains(node) {
            return Err(GridError::NodeOutOfRange {
                node: node.coords().to_vec(),
                dims: g.dims().to_vec(),
            });
        }
    }

    let mut cache = PolyCache::new();
    let mut rows = Vec::with_capacity(mu);
    for node in nodes {
        let mut row = Vec::with_capacity(mu);
        for tagged in &eb.vectors {
            row.push(cache.entry(node, &tagged.angles, prec));
        }
        rows.push(row);
    }
    let elim = hp_eliminate(rows, prec);
    let determinant = elim.det.to_f64();
    if elim.rank == mu {
        return Ok(SimultaneousZero { zero: false, determinant, alpha: None, witness: None });
    }

    let alpha_hp = elim.null.expect("rank deficiency implies a null vector");
    let alpha: Vec<f64> = alpha_hp.iter().map(|a| a.to_f64()).collect();
    let witness = combination_witness(g, eb, &alpha, nodes)?;
    Ok(SimultaneousZero { zero: true, determinant, alpha: Some(alpha), witness: Some(witness) })
}

/// Build and validate the eigenvector `sum_j alpha_j (raw basis_j)`,
/// claiming zeros at the given nodes.
fn combination_witness(
    g: &GridSpec,
    eb: &EigenBasis,
    alpha: &[f64],
    zeros: &[NodeIndex],
) -> Result<Witness> {
    let lap = build_grid_laplacian(g)?;
    let mut vector = vec![0.0; g.node_count()];
    for (tagged, &a) in eb.vectors.iter().zip(alpha) {
        if a == 0.0 {
            continue;
        }
        let raw = raw_basis_vector(g, &tagged.indices);
        for (v, r) in vector.iter_mut().zip(&raw) {
            *v += a * r;
        }
    }
    Witness::checked(&lap, g, eb.value.value(), vector, zeros.to_vec())
}

/// Controllability of an arbitrary grid (simple or not) from a node set.
///
/// Simple eigenvalues are decided by the exact integer zero pattern of
/// their unique eigenvector. Each multiple eigenvalue is uncontrollable iff
/// the `|nodes| x mu` matrix of polynomial component values has rank below
/// `mu`, i.e. some combination of basis vectors vanishes on every queried
/// node; the null combination then yields a verified witness. Fewer queried
/// nodes than the top multiplicity can never be controllable.
pub fn nonsimple_grid_controllable(
    g: &GridSpec,
    nodes: &[NodeIndex],
    prec: &Precision,
) -> Result<GridVerdict> {
    if nodes.is_empty() {
        return Err(GridError::EmptyNodeSet);
    }
    let spectrum = grid_spectrum(g, prec)?;
    spectrum_controllable(&spectrum, nodes, prec)
}

/// The rank analysis of [`nonsimple_grid_controllable`] on a precomputed
/// spectrum, saving the eigendecomposition when the caller already has one.
pub fn spectrum_controllable(
    spectrum: &GridSpectrum,
    nodes: &[NodeIndex],
    prec: &Precision,
) -> Result<GridVerdict> {
    let g = spectrum.grid();
    // Shares the partition bookkeeping (and node validation) with the
    // simple-eigenvalue route.
    let entries = crate::simple_grid::build_partition(g, nodes)?;
    let mut common: std::collections::BTreeSet<Vec<u64>> =
        entries[0].tuples.iter().cloned().collect();
    for entry in &entries[1..] {
        let tuples: std::collections::BTreeSet<Vec<u64>> =
            entry.tuples.iter().cloned().collect();
        common = common.intersection(&tuples).cloned().collect();
    }

    let lap = build_grid_laplacian(g)?;
    let dims = g.dims();
    let mut cache = PolyCache::new();
    let mut uncontrollable = Vec::new();
    for group in spectrum.groups() {
        let mu = group.value.multiplicity;
        if mu == 1 {
            let tagged = &group.vectors[0];
            let blocked = nodes.iter().all(|node| {
                node.coords().iter().enumerate().any(|(ax, &c)| {
                    crate::simple_grid::path_component_vanishes(dims[ax], tagged.indices[ax], c)
                })
            });
            if blocked {
                let witness = Witness::checked(
                    &lap,
                    g,
                    group.value.value(),
                    tagged.vector.clone(),
                    crate::spectral::exact_zero_nodes(g, tagged),
                )?;
                uncontrollable.push(crate::simple_grid::GridMode {
                    value: group.value.clone(),
                    witness,
                });
            }
            continue;
        }

        let mut rows = Vec::with_capacity(nodes.len());
        for node in nodes {
            let mut row = Vec::with_capacity(mu);
            for tagged in &group.vectors {
                row.push(cache.entry(node, &tagged.angles, prec));
            }
            rows.push(row);
        }
        let elim = hp_eliminate(rows, prec);
        if elim.rank < mu {
            let alpha: Vec<f64> =
                elim.null.expect("rank deficiency implies a null vector")
                    .iter()
                    .map(|a| a.to_f64())
                    .collect();
            let witness = combination_witness(g, group, &alpha, nodes)?;
            uncontrollable
                .push(crate::simple_grid::GridMode { value: group.value.clone(), witness });
        }
    }

    // A common partition symbol always certifies failure; the converse only
    // holds when every eigenvalue is simple.
    debug_assert!(common.is_empty() || !uncontrollable.is_empty());

    Ok(GridVerdict {
        controllable: uncontrollable.is_empty(),
        common_tuples: common.into_iter().collect(),
        uncontrollable,
    })
}

/// One multiple eigenvalue's brick attribution.
#[derive(Debug, Clone)]
pub struct BrickScanEntry {
    /// The multiple eigenvalue.
    pub value: SpectralValue,
    /// Per-axis least common multiple of the reduced angle denominators
    /// over the eigenvalue's basis: the smallest brick whose tiling carries
    /// the whole eigenspace. Equals the grid itself when nothing smaller
    /// does.
    pub carrying_brick: Vec<usize>,
    /// Dimensions of the smallest proper divisor brick whose spectrum
    /// contains the eigenvalue, if any.
    pub inherited_from: Option<Vec<usize>>,
    /// Set when no proper brick carries the eigenvalue; such a value would
    /// refute the expectation that multiple eigenvalues always come from
    /// smaller bricks.
    pub violation: bool,
}

/// Brick attribution of every multiple eigenvalue of a grid.
#[derive(Debug, Clone)]
pub struct BrickScanReport {
    /// The scanned grid.
    pub dims: Vec<usize>,
    /// One entry per multiple eigenvalue, ascending.
    pub entries: Vec<BrickScanEntry>,
    /// Number of entries with `violation` set.
    pub violations: usize,
}

/// Divisors of `n`, ascending.
fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Scan every multiple eigenvalue of the grid and attribute it to bricks:
/// the carrying brick its angle structure lives on, and the smallest proper
/// brick whose spectrum contains it.
pub fn brick_inheritance_scan(g: &GridSpec, prec: &Precision) -> Result<BrickScanReport> {
    let spectrum = grid_spectrum(g, prec)?;
    let dims = g.dims().to_vec();

    // All proper divisor bricks, smallest node count first.
    let mut bricks: Vec<Vec<usize>> = dims
        .iter()
        .map(|&n| divisors(n))
        .fold(vec![Vec::new()], |acc: Vec<Vec<usize>>, ds| {
            acc.iter()
                .flat_map(|t| {
                    ds.iter().map(move |&d| {
                        let mut t = t.clone();
                        t.push(d);
                        t
                    })
                })
                .collect()
        })
        .into_iter()
        .filter(|b| b != &dims)
        .collect();
    bricks.sort_by_key(|b| (b.iter().product::<usize>(), b.clone()));

    let mut brick_spectra: HashMap<Vec<usize>, Vec<Float>> = HashMap::new();
    let tol = prec.from_f64(crate::precision::GROUP_TOLERANCE);

    let mut entries = Vec::new();
    for group in spectrum.groups() {
        if group.value.multiplicity < 2 {
            continue;
        }
        let carrying_brick: Vec<usize> = (0..dims.len())
            .map(|ax| {
                group
                    .vectors
                    .iter()
                    .map(|t| *t.angles[ax].denom() as usize)
                    .fold(1usize, num_integer::lcm)
            })
            .collect();

        let value_hp = group.value.value_hp();
        let mut inherited_from = None;
        for brick in &bricks {
            if !brick_spectra.contains_key(brick) {
                let bg = GridSpec::new(brick.clone())?;
                let values: Vec<Float> = grid_spectrum(&bg, prec)?
                    .groups()
                    .iter()
                    .map(|gr| gr.value.value_hp().clone())
                    .collect();
                brick_spectra.insert(brick.clone(), values);
            }
            let contains = brick_spectra[brick]
                .iter()
                .any(|v| Float::with_val(prec.bits(), v - value_hp).abs() <= tol);
            if contains {
                inherited_from = Some(brick.clone());
                break;
            }
        }
        let violation = inherited_from.is_none();
        entries.push(BrickScanEntry {
            value: group.value.clone(),
            carrying_brick,
            inherited_from,
            violation,
        });
    }

    let violations = entries.iter().filter(|e| e.violation).count();
    Ok(BrickScanReport { dims, entries, violations })
}
