//! Number-theoretic controllability tests for path graphs.
//!
//! The path Laplacian eigenvector with reduced angle `v/R` (eigenvalue
//! `2 - 2cos(v pi / R)`) vanishes at node `i` exactly when `v` is odd, `R` is
//! odd and greater than 1, and `R` divides `2i - 1`. Everything observable
//! about single nodes and node sets follows from that integer pattern:
//!
//! * node `i` fails for the odd prime power `q | n` iff `q | 2i - 1`;
//! * a node set fails for `q` iff `q` divides `2i - 1` for every member,
//!   which is the same as every element of the boundary-to-boundary gap
//!   chain being `0 mod q`;
//! * the combined blocking modulus of a set is
//!   `Q = odd part of gcd(n, 2i_1 - 1, ..., 2i_m - 1)`, and the blocked
//!   eigenvalues are exactly `2 - 2cos((2v-1) pi / Q)`, `v = 1..=(Q-1)/2`.
//!
//! Witnesses are closed-form path eigenvectors; each is checked against the
//! Laplacian and against the alternating block/reversal sign pattern its
//! zero structure forces.

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{GridError, Result};
use crate::grid::{build_path_laplacian, GridSpec, NodeIndex};
use crate::precision::Precision;
use crate::spectral::{path_eigensystem, SpectralValue};
use crate::witness::Witness;

/// Prime factorization `n = 2^e0 * p1^e1 * ... * pk^ek` with odd primes
/// strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePowerFactorization {
    n: u64,
    two_exponent: u32,
    odd_factors: Vec<(u64, u32)>,
}

impl PrimePowerFactorization {
    /// Factor `n` by trial division.
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(GridError::InvalidDimensions(vec![0]));
        }
        let mut rest = n;
        let mut two_exponent = 0;
        while rest.is_multiple_of(2) {
            rest /= 2;
            two_exponent += 1;
        }
        let mut odd_factors = Vec::new();
        let mut p = 3u64;
        while p * p <= rest {
            if rest.is_multiple_of(p) {
                let mut e = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    e += 1;
                }
                odd_factors.push((p, e));
            }
            p += 2;
        }
        if rest > 1 {
            odd_factors.push((rest, 1));
        }
        Ok(Self { n, two_exponent, odd_factors })
    }

    /// The factored integer.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Exponent of 2.
    pub fn two_exponent(&self) -> u32 {
        self.two_exponent
    }

    /// Odd `(prime, exponent)` pairs, primes ascending.
    pub fn odd_factors(&self) -> &[(u64, u32)] {
        &self.odd_factors
    }

    /// All odd prime powers `p^a | n` with `a >= 1`, ascending.
    pub fn odd_prime_power_divisors(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for &(p, e) in &self.odd_factors {
            let mut q = 1u64;
            for _ in 0..e {
                q *= p;
                out.push(q);
            }
        }
        out.sort_unstable();
        out
    }
}

/// All odd prime powers dividing `n`, ascending.
pub fn odd_prime_power_divisors(n: u64) -> Result<Vec<u64>> {
    Ok(PrimePowerFactorization::new(n)?.odd_prime_power_divisors())
}

fn check_path_node(n: usize, i: usize) -> Result<()> {
    GridSpec::path(n)?;
    if i < 1 || i > n {
        return Err(GridError::NodeOutOfRange { node: vec![i], dims: vec![n] });
    }
    Ok(())
}

fn check_path_nodeset(n: usize, nodes: &[usize]) -> Result<()> {
    if nodes.is_empty() {
        return Err(GridError::EmptyNodeSet);
    }
    for &i in nodes {
        check_path_node(n, i)?;
    }
    Ok(())
}

/// Odd part of `gcd(n, 2i-1, ...)` over the node set: the combined blocking
/// modulus. `1` means the set is controllable.
pub fn combined_blocking_modulus(n: usize, nodes: &[usize]) -> Result<u64> {
    check_path_nodeset(n, nodes)?;
    let mut g = 0u64;
    for &i in nodes {
        g = g.gcd(&(2 * i as u64 - 1));
    }
    let mut q = (n as u64).gcd(&g);
    while q.is_multiple_of(2) {
        q /= 2;
    }
    Ok(q)
}

/// Odd prime powers `q | n` for which the path is uncontrollable from node
/// `i`, i.e. `q | 2i - 1`. Empty list means controllable from `i`; external
/// nodes (`i = 1` or `i = n`) always yield an empty list.
pub fn path_node_uncontrollable(n: usize, i: usize) -> Result<Vec<u64>> {
    check_path_node(n, i)?;
    let q = combined_blocking_modulus(n, &[i])?;
    odd_prime_power_divisors(q)
}

/// The gap chain of a sorted node set on the path: `2(i_1 - 1) + 1`, the
/// consecutive differences, and `2(n - i_m) + 1`.
pub fn congruence_chain(n: usize, nodes: &[usize]) -> Result<Vec<u64>> {
    check_path_nodeset(n, nodes)?;
    let mut sorted: Vec<usize> = nodes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut chain = Vec::with_capacity(sorted.len() + 1);
    chain.push(2 * (sorted[0] as u64 - 1) + 1);
    for w in sorted.windows(2) {
        chain.push((w[1] - w[0]) as u64);
    }
    chain.push(2 * (n - sorted[sorted.len() - 1]) as u64 + 1);
    Ok(chain)
}

/// Odd prime powers `q | n` for which every element of the set's gap chain
/// is `0 mod q`; empty list means the path is controllable from the set.
pub fn path_nodeset_uncontrollable(n: usize, nodes: &[usize]) -> Result<Vec<u64>> {
    let chain = congruence_chain(n, nodes)?;
    let candidates = odd_prime_power_divisors(n as u64)?;
    let blocking: Vec<u64> = candidates
        .into_iter()
        .filter(|&q| chain.iter().all(|&c| c % q == 0))
        .collect();
    // The chain test and the gcd route must agree: both say q | 2i-1 for
    // every node in the set.
    debug_assert_eq!(
        blocking,
        odd_prime_power_divisors(combined_blocking_modulus(n, nodes).unwrap()).unwrap()
    );
    Ok(blocking)
}

/// The canonical node set `{l*q - (q-1)/2 : l = 1..=n/q}`: exactly the nodes
/// `i` with `q | 2i - 1`. Every eigenvector whose reduced angle denominator
/// divides `q` vanishes on all of it.
pub fn canonical_uncontrollable_set(n: usize, q: u64) -> Result<Vec<usize>> {
    GridSpec::path(n)?;
    if q < 3 || q.is_multiple_of(2) || !(n as u64).is_multiple_of(q) {
        return Err(GridError::InvalidModulus { q, n: n as u64 });
    }
    let q = q as usize;
    Ok((1..=n / q).map(|l| l * q - (q - 1) / 2).collect())
}

/// An uncontrollable eigenvalue of a path together with its certificate.
#[derive(Debug, Clone)]
pub struct PathMode {
    /// The eigenvalue, carrying its exact angle.
    pub value: SpectralValue,
    /// Eigenvector vanishing on the canonical set of its reduced angle
    /// denominator (which contains every queried node).
    pub witness: Witness,
}

/// Complete controllability verdict for a node set on a path.
#[derive(Debug, Clone)]
pub struct PathVerdict {
    /// Whether the pair (path Laplacian, node set) is controllable.
    pub controllable: bool,
    /// Odd prime powers blocking the set; empty iff controllable.
    pub blocking: Vec<u64>,
    /// Combined blocking modulus `Q` (product of the maximal blocking prime
    /// powers); `1` iff controllable.
    pub modulus: u64,
    /// The `(Q-1)/2` uncontrollable eigenvalues with witnesses.
    pub uncontrollable: Vec<PathMode>,
}

/// Check the alternating block pattern forced by a zero set with spacing
/// `r`: writing `v` for the components before the first zero and `P` for
/// reversal, the vector must read `v, 0, -Pv, -v, 0, Pv, v, 0, ...` with the
/// trailing half-block carrying sign `(-1)^{n/r}`.
fn has_block_pattern(vector: &[f64], r: usize) -> bool {
    let n = vector.len();
    let half = (r - 1) / 2;
    let blocks = n / r;
    let tol = 1e-12;
    let v = &vector[0..half];
    for b in 1..=blocks {
        // 1-based position of the b-th zero.
        let zero = half + 1 + (b - 1) * r;
        if vector[zero - 1] != 0.0 {
            return false;
        }
        let sign = if b % 2 == 1 { -1.0 } else { 1.0 };
        // Reversed half following the zero.
        for t in 0..half {
            let idx = zero + t;
            if idx >= n {
                break;
            }
            if (vector[idx] - sign * v[half - 1 - t]).abs() > tol {
                return false;
            }
        }
        // Direct half completing the block (absent after the last zero).
        if b < blocks {
            for (t, &head) in v.iter().enumerate() {
                let idx = zero + half + t;
                if (vector[idx] - sign * head).abs() > tol {
                    return false;
                }
            }
        }
    }
    true
}

/// Verdict plus explicit uncontrollable eigenpairs for a node set on the
/// path of length `n`. Every witness is validated as an eigenvector with the
/// expected zero set and block sign pattern before being returned.
pub fn path_uncontrollable_eigenpairs(
    n: usize,
    nodes: &[usize],
    prec: &Precision,
) -> Result<PathVerdict> {
    let blocking = path_nodeset_uncontrollable(n, nodes)?;
    let modulus = combined_blocking_modulus(n, nodes)?;
    if modulus == 1 {
        return Ok(PathVerdict { controllable: true, blocking, modulus, uncontrollable: Vec::new() });
    }

    let lap = build_path_laplacian(n)?;
    let grid = GridSpec::path(n)?;
    let system = path_eigensystem(n, prec)?;
    let q = modulus as usize;
    let mut uncontrollable = Vec::with_capacity((q - 1) / 2);
    for v in 1..=(q - 1) / 2 {
        let angle = Ratio::new((2 * v - 1) as i64, q as i64);
        // Index of the closed-form eigenvector carrying this angle.
        let k = 1 + n * (2 * v - 1) / q;
        let pair = &system[k - 1];
        debug_assert_eq!(pair.angle, angle);
        let reduced_denom = *angle.denom() as usize;
        if !has_block_pattern(&pair.vector, reduced_denom) {
            return Err(GridError::WitnessInvalid(format!(
                "block pattern violated for angle {angle} on path {n}"
            )));
        }
        let claimed: Vec<NodeIndex> = canonical_uncontrollable_set(n, reduced_denom as u64)?
            .into_iter()
            .map(|i| NodeIndex::new(vec![i]))
            .collect();
        let witness = Witness::checked(&lap, &grid, pair.value, pair.vector.clone(), claimed)?;
        let value = SpectralValue::new(vec![angle], 1, prec.eigenvalue_term(angle));
        uncontrollable.push(PathMode { value, witness });
    }

    Ok(PathVerdict { controllable: false, blocking, modulus, uncontrollable })
}
