//! Measures where the f64 Krylov rank computation stops agreeing with the
//! PBH oracle, sweeping 2-D and 3-D grid shapes by node count. The first
//! disagreement motivates the order cap on `kalman_rank`; rerun this after
//! touching the oracle internals.
//!
//! `kalman_rank` itself refuses orders above the cap, so the sweep carries
//! its own uncapped copy of the expansion loop (same orthogonalization,
//! same threshold) to look past the domain boundary.

use gridctl_core::{
    build_grid_laplacian, numeric_eigensystem, pbh_uncontrollable_with, GridSpec,
    LaplacianMatrix, RANK_THRESHOLD,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uncapped twin of `kalman_rank`: orthogonalized Krylov expansion of the
/// selected rows under the Laplacian.
fn krylov_rank(lap: &LaplacianMatrix, rows: &[usize]) -> usize {
    let n = lap.order();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let absorb = |basis: &mut Vec<Vec<f64>>, mut x: Vec<f64>| -> Option<usize> {
        let scale = x.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
        for _ in 0..2 {
            for q in basis.iter() {
                let dot: f64 = q.iter().zip(&x).map(|(a, b)| a * b).sum();
                for (xi, qi) in x.iter_mut().zip(q) {
                    *xi -= dot * qi;
                }
            }
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= RANK_THRESHOLD * scale {
            return None;
        }
        for xi in &mut x {
            *xi /= norm;
        }
        basis.push(x);
        Some(basis.len() - 1)
    };

    let mut frontier: Vec<usize> = Vec::new();
    for &r in rows {
        let mut e = vec![0.0; n];
        e[r] = 1.0;
        if let Some(idx) = absorb(&mut basis, e) {
            frontier.push(idx);
        }
    }
    while !frontier.is_empty() && basis.len() < n {
        let mut next = Vec::new();
        for idx in frontier {
            let image = lap.apply(&basis[idx]);
            if let Some(new_idx) = absorb(&mut basis, image) {
                next.push(new_idx);
            }
        }
        frontier = next;
    }
    basis.len()
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut shapes: Vec<Vec<usize>> = Vec::new();
    for n1 in 2..=12usize {
        for n2 in n1..=12 {
            shapes.push(vec![n1, n2]);
        }
    }
    for n1 in 2..=6usize {
        for n2 in n1..=6 {
            for n3 in n2..=6 {
                shapes.push(vec![n1, n2, n3]);
            }
        }
    }
    shapes.sort_by_key(|s| s.iter().product::<usize>());

    let mut largest_clean = 0usize;
    let mut first_bad: Option<(Vec<usize>, usize)> = None;
    for dims in shapes {
        let n: usize = dims.iter().product();
        if n > 160 {
            continue;
        }
        let g = GridSpec::new(dims.clone()).unwrap();
        let lap = build_grid_laplacian(&g).unwrap();
        let spectrum = numeric_eigensystem(&lap).unwrap();

        let mut sets: Vec<Vec<usize>> = vec![vec![0], vec![n / 2], vec![n - 1]];
        for _ in 0..5 {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a != b {
                sets.push(vec![a.min(b), a.max(b)]);
            }
        }

        let mut bad_here = false;
        for rows in &sets {
            let rank = krylov_rank(&lap, rows);
            let pbh_clear = pbh_uncontrollable_with(&spectrum, rows).unwrap().is_empty();
            if pbh_clear != (rank == n) {
                bad_here = true;
                println!(
                    "DISAGREE dims {dims:?} (order {n}) rows {rows:?}: \
                     pbh_clear={pbh_clear} krylov_rank={rank}"
                );
            }
        }
        if bad_here {
            if first_bad.is_none() {
                first_bad = Some((dims.clone(), n));
            }
        } else if first_bad.is_none() {
            largest_clean = largest_clean.max(n);
        }
    }

    println!("largest clean order before first failure: {largest_clean}");
    match first_bad {
        Some((dims, n)) => println!("first failing shape: {dims:?} (order {n})"),
        None => println!("no disagreement in the sweep"),
    }
}
