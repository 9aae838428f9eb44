//! Cross-checks of the structural criteria against the numerical oracles.
//!
//! These are trimmed, fast-running versions of the exhaustive acceptance
//! sweeps: every class of claim is exercised here against the PBH oracle or
//! direct linear algebra, over ranges small enough for the default test run.

use gridctl_core::{
    brick_partition, build_grid_laplacian, build_path_laplacian, canonical_uncontrollable_set,
    flip_operator, grid_spectrum, is_simple, numeric_eigensystem,
    path_eigensystem, path_node_uncontrollable, path_nodeset_uncontrollable,
    path_uncontrollable_eigenpairs, pbh_uncontrollable_with, predict_brick_subvectors,
    simple_grid_controllable, simultaneous_zero_test, spectrum_controllable, GridSpec, NodeIndex,
    Precision,
};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn prec() -> Precision {
    Precision::default()
}

fn flat_rows(g: &GridSpec, nodes: &[NodeIndex]) -> Vec<usize> {
    nodes.iter().map(|n| g.flatten(n)).collect()
}

/// All unordered pairs of flat indices below `n`.
fn index_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
}

#[test]
fn path_verdicts_match_pbh_oracle() {
    for n in 1..=20usize {
        let lap = build_path_laplacian(n).unwrap();
        let spectrum = numeric_eigensystem(&lap).unwrap();
        for i in 1..=n {
            let structural = path_node_uncontrollable(n, i).unwrap().is_empty();
            let oracle = pbh_uncontrollable_with(&spectrum, &[i - 1]).unwrap().is_empty();
            assert_eq!(structural, oracle, "path {n}, node {i}");
        }
        for (a, b) in index_pairs(n) {
            let structural = path_nodeset_uncontrollable(n, &[a + 1, b + 1]).unwrap().is_empty();
            let oracle = pbh_uncontrollable_with(&spectrum, &[a, b]).unwrap().is_empty();
            assert_eq!(structural, oracle, "path {n}, nodes {{{},{}}}", a + 1, b + 1);
        }
    }
}

#[test]
fn path_verdict_eigenvalues_match_pbh_values() {
    let p = prec();
    for n in [6usize, 9, 12, 15, 18] {
        let lap = build_path_laplacian(n).unwrap();
        let spectrum = numeric_eigensystem(&lap).unwrap();
        for i in 1..=n {
            let verdict = path_uncontrollable_eigenpairs(n, &[i], &p).unwrap();
            let mut oracle: Vec<f64> = pbh_uncontrollable_with(&spectrum, &[i - 1])
                .unwrap()
                .into_iter()
                .map(|(v, _)| v)
                .collect();
            oracle.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut structural: Vec<f64> =
                verdict.uncontrollable.iter().map(|m| m.value.value()).collect();
            structural.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_eq!(structural.len(), oracle.len(), "path {n}, node {i}");
            for (s, o) in structural.iter().zip(&oracle) {
                assert!((s - o).abs() < 1e-8, "path {n}, node {i}: {s} vs {o}");
            }
        }
    }
}

#[test]
fn canonical_sets_match_per_node_congruence_up_to_60() {
    for n in 1..=60usize {
        for q in gridctl_core::odd_prime_power_divisors(n as u64).unwrap() {
            let set = canonical_uncontrollable_set(n, q).unwrap();
            let by_congruence: Vec<usize> = (1..=n)
                .filter(|&i| path_node_uncontrollable(n, i).unwrap().contains(&q))
                .collect();
            assert_eq!(set, by_congruence, "n={n}, q={q}");
        }
    }
}

#[test]
fn simple_grid_verdicts_match_pbh_oracle() {
    let p = prec();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n1 in 2..=7usize {
        for n2 in 2..=7usize {
            let g = GridSpec::new(vec![n1, n2]).unwrap();
            if !is_simple(&g, &p).unwrap() {
                continue;
            }
            let lap = build_grid_laplacian(&g).unwrap();
            let spectrum = numeric_eigensystem(&lap).unwrap();
            let nodes: Vec<NodeIndex> = g.nodes().collect();
            for node in &nodes {
                let verdict = simple_grid_controllable(&g, std::slice::from_ref(node), &p).unwrap();
                let oracle =
                    pbh_uncontrollable_with(&spectrum, &[g.flatten(node)]).unwrap().is_empty();
                assert_eq!(verdict.controllable, oracle, "{g}, node {node}");
            }
            for _ in 0..60 {
                let a = rng.random_range(0..nodes.len());
                let b = rng.random_range(0..nodes.len());
                if a == b {
                    continue;
                }
                let pair = [nodes[a].clone(), nodes[b].clone()];
                let verdict = simple_grid_controllable(&g, &pair, &p).unwrap();
                let oracle = pbh_uncontrollable_with(&spectrum, &flat_rows(&g, &pair))
                    .unwrap()
                    .is_empty();
                assert_eq!(verdict.controllable, oracle, "{g}, nodes {:?}", pair);
            }
        }
    }
}

#[test]
fn clear_nodes_have_nonzero_components_everywhere() {
    // A node with an all-empty blocking list must see every simple
    // eigenvector: cross-check the unique numeric eigenvector magnitudes.
    let p = prec();
    for dims in [vec![5usize], vec![7], vec![2, 5], vec![5, 7], vec![3, 4]] {
        let g = GridSpec::new(dims).unwrap();
        if !is_simple(&g, &p).unwrap() {
            continue;
        }
        let lap = build_grid_laplacian(&g).unwrap();
        let spectrum = numeric_eigensystem(&lap).unwrap();
        for node in g.nodes() {
            let clear = gridctl_core::grid_node_uncontrollable_simple(&g, &node)
                .unwrap()
                .iter()
                .all(|axis| axis.is_empty());
            if !clear {
                continue;
            }
            let row = g.flatten(&node);
            for col in 0..g.node_count() {
                let column = spectrum.eigenvectors.column(col);
                let sup = column.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
                assert!(
                    column[row].abs() > 1e-8 * sup,
                    "{g}: clear node {node} hits a zero of eigenvector {col}"
                );
            }
        }
    }
}

/// Numeric null-space check: does some combination of the eigenspace
/// columns vanish on both rows? Decided by the smallest singular value of
/// the 2 x mu row selection.
fn oracle_pair_zero(
    spectrum: &gridctl_core::NumericSpectrum,
    start: usize,
    mu: usize,
    rows: (usize, usize),
) -> bool {
    let mut sel = nalgebra::DMatrix::zeros(2.max(mu), mu);
    for j in 0..mu {
        sel[(0, j)] = spectrum.eigenvectors[(rows.0, start + j)];
        sel[(1, j)] = spectrum.eigenvectors[(rows.1, start + j)];
    }
    let svd = sel.svd(false, false);
    let sigma = &svd.singular_values;
    sigma[mu - 1] <= 1e-8 * sigma[0].max(1.0)
}

#[test]
fn determinant_criterion_matches_oracle_null_search() {
    let p = prec();
    for dims in [vec![2usize, 2], vec![2, 3], vec![2, 4], vec![3, 3], vec![3, 6], vec![4, 6]] {
        let g = GridSpec::new(dims).unwrap();
        let spectrum = grid_spectrum(&g, &p).unwrap();
        let lap = build_grid_laplacian(&g).unwrap();
        let numeric = numeric_eigensystem(&lap).unwrap();
        let nodes: Vec<NodeIndex> = g.nodes().collect();

        let mut start = 0usize;
        for group in spectrum.groups() {
            let mu = group.value.multiplicity;
            if mu == 2 {
                for (a, b) in index_pairs(nodes.len()) {
                    let pair = [nodes[a].clone(), nodes[b].clone()];
                    let hit = simultaneous_zero_test(&g, group, &pair, &p).unwrap();
                    let oracle = oracle_pair_zero(
                        &numeric,
                        start,
                        mu,
                        (g.flatten(&pair[0]), g.flatten(&pair[1])),
                    );
                    assert_eq!(
                        hit.zero, oracle,
                        "{g}, eigenvalue {}, nodes {:?}",
                        group.value.value(),
                        pair
                    );
                }
            }
            start += mu;
        }
    }
}

#[test]
fn nonsimple_verdicts_match_pbh_on_random_sets() {
    let p = prec();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for dims in [vec![2usize, 2], vec![2, 3], vec![3, 3], vec![2, 4], vec![4, 6], vec![6, 6]] {
        let g = GridSpec::new(dims).unwrap();
        let spectrum = grid_spectrum(&g, &p).unwrap();
        let lap = build_grid_laplacian(&g).unwrap();
        let numeric = numeric_eigensystem(&lap).unwrap();
        let nodes: Vec<NodeIndex> = g.nodes().collect();
        let mu_star = spectrum.max_multiplicity();

        for size in [mu_star, mu_star + 1] {
            let size = size.min(nodes.len());
            for _ in 0..40 {
                let mut picks: Vec<usize> = (0..nodes.len()).collect();
                picks.shuffle(&mut rng);
                picks.truncate(size);
                let set: Vec<NodeIndex> = picks.iter().map(|&i| nodes[i].clone()).collect();
                let verdict = spectrum_controllable(&spectrum, &set, &p).unwrap();
                let oracle =
                    pbh_uncontrollable_with(&numeric, &flat_rows(&g, &set)).unwrap().is_empty();
                assert_eq!(verdict.controllable, oracle, "{g}, nodes {:?}", set);
            }
        }
    }
}

#[test]
fn analytic_spectra_match_oracle_eigenvalues() {
    let p = prec();
    let mut grids: Vec<Vec<usize>> = (1..=20).map(|n| vec![n]).collect();
    for n1 in 2..=8usize {
        for n2 in n1..=8usize {
            grids.push(vec![n1, n2]);
        }
    }
    grids.extend([vec![2, 2, 2], vec![2, 3, 4], vec![3, 3, 3], vec![2, 2, 5], vec![5, 5, 5]]);

    for dims in grids {
        let g = GridSpec::new(dims).unwrap();
        let spectrum = grid_spectrum(&g, &p).unwrap();
        let lap = build_grid_laplacian(&g).unwrap();
        let numeric = numeric_eigensystem(&lap).unwrap();

        let analytic: Vec<(f64, usize)> = spectrum
            .groups()
            .iter()
            .map(|gr| (gr.value.value(), gr.value.multiplicity))
            .collect();
        assert_eq!(
            analytic.iter().map(|&(_, m)| m).sum::<usize>(),
            g.node_count(),
            "{g}: multiplicities must sum to the node count"
        );

        let mut idx = 0usize;
        for (value, mult) in analytic {
            for _ in 0..mult {
                let delta = (numeric.eigenvalues[idx] - value).abs();
                assert!(delta <= 1e-8, "{g}: eigenvalue {idx} off by {delta:.2e}");
                idx += 1;
            }
            // The oracle must see the same multiplicity: neighbors outside
            // the group stay clearly separated.
            if idx < numeric.eigenvalues.len() {
                assert!(
                    numeric.eigenvalues[idx] - value > 1e-8,
                    "{g}: oracle multiplicity exceeds analytic at {value}"
                );
            }
        }
    }
}

#[test]
fn path_symmetry_tags_up_to_40() {
    let p = prec();
    for n in 1..=40usize {
        let g = GridSpec::path(n).unwrap();
        let flip = flip_operator(&g, 1).unwrap();
        for pair in path_eigensystem(n, &p).unwrap() {
            let flipped = flip.apply(&pair.vector);
            let sign = pair.sign.factor();
            for (a, b) in flipped.iter().zip(&pair.vector) {
                assert!((a - sign * b).abs() <= 1e-10, "path {n}, k {}", pair.k);
            }
        }
    }
}

#[test]
fn path_embedding_into_multiples() {
    let p = prec();
    for n in 1..=10usize {
        let base = GridSpec::path(n).unwrap();
        let base_pairs = path_eigensystem(n, &p).unwrap();
        for count in 2..=4usize {
            let big = GridSpec::path(count * n).unwrap();
            let bp = brick_partition(&big, &base).unwrap();
            let big_pairs = path_eigensystem(count * n, &p).unwrap();
            for pair in &base_pairs {
                // Embedded index: angle (k-1)/n = (k'-1)/(count*n).
                let k_big = count * (pair.k - 1) + 1;
                let target = &big_pairs[k_big - 1];
                assert!(
                    (target.value - pair.value).abs() <= 1e-10,
                    "P_{n} eigenvalue {} missing from P_{}",
                    pair.value,
                    count * n
                );
                let (predicted, lambda) = predict_brick_subvectors(&bp, &pair.vector).unwrap();
                assert!((lambda - pair.value).abs() <= 1e-10);
                // Both unit sup-norm with positive first component, so the
                // tiling must reproduce the closed form exactly.
                assert!(predicted[0] > 0.0);
                for (a, b) in predicted.iter().zip(&target.vector) {
                    assert!(
                        (a - b).abs() <= 1e-10,
                        "P_{n} k={} embedded into P_{}",
                        pair.k,
                        count * n
                    );
                }
            }
        }
    }
}

#[test]
fn grid_symmetry_tags_up_to_7x7() {
    let p = prec();
    for n1 in 2..=7usize {
        for n2 in n1..=7usize {
            let g = GridSpec::new(vec![n1, n2]).unwrap();
            let s = grid_spectrum(&g, &p).unwrap();
            for group in s.groups() {
                for tagged in &group.vectors {
                    let class = gridctl_core::classify_symmetry(tagged);
                    for ax in 1..=2usize {
                        let flip = flip_operator(&g, ax).unwrap();
                        let flipped = flip.apply(&tagged.vector);
                        let sign = class.sign(ax).factor();
                        for (a, b) in flipped.iter().zip(&tagged.vector) {
                            assert!((a - sign * b).abs() <= 1e-10, "{g} axis {ax}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn two_class_profiles_hold_for_random_combinations() {
    let p = prec();
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let mut tested = 0usize;
    for dims in [vec![2usize, 2], vec![2, 3], vec![3, 3], vec![2, 4], vec![4, 4], vec![4, 6]] {
        let g = GridSpec::new(dims).unwrap();
        let s = grid_spectrum(&g, &p).unwrap();
        for group in s.groups() {
            if group.value.multiplicity < 2 {
                continue;
            }
            let profile = gridctl_core::eigenspace_symmetry_profile(group);
            if profile.classes.len() != 2 {
                continue;
            }
            tested += 1;
            // Composition of the flips named by each generator.
            let maps: Vec<Vec<usize>> = profile
                .invariant_flip_generators
                .iter()
                .map(|axes| {
                    let mut perm: Vec<usize> = (0..g.node_count()).collect();
                    for &ax in axes {
                        let f = flip_operator(&g, ax).unwrap();
                        perm = perm.iter().map(|&i| f.permutation()[i]).collect();
                    }
                    perm
                })
                .collect();
            assert!(!maps.is_empty(), "{g}: two-class profile must keep a symmetry");
            for _ in 0..100 {
                let alpha: Vec<f64> =
                    (0..group.value.multiplicity).map(|_| rng.random_range(-1.0..1.0)).collect();
                let mut v = vec![0.0; g.node_count()];
                for (tagged, &a) in group.vectors.iter().zip(&alpha) {
                    for (vi, ti) in v.iter_mut().zip(&tagged.vector) {
                        *vi += a * ti;
                    }
                }
                for perm in &maps {
                    for (i, &pi) in perm.iter().enumerate() {
                        assert!(
                            (v[i].abs() - v[pi].abs()).abs() <= 1e-10,
                            "{g}, eigenvalue {}: |component| symmetry violated",
                            group.value.value()
                        );
                    }
                }
            }
        }
    }
    assert!(tested >= 5, "expected several two-class eigenspaces, found {tested}");
}

#[test]
fn single_class_combinations_keep_exact_signs() {
    let p = prec();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    // (3,3) at eigenvalue 3 has two basis vectors in the same class.
    let g = GridSpec::new(vec![3, 3]).unwrap();
    let s = grid_spectrum(&g, &p).unwrap();
    let group = s
        .groups()
        .iter()
        .find(|gr| gr.value.multiplicity == 2 && (gr.value.value() - 3.0).abs() < 1e-9)
        .expect("(3,3) has a multiplicity-2 eigenvalue at 3");
    let profile = gridctl_core::eigenspace_symmetry_profile(group);
    assert!(profile.is_single_class());
    let class = &profile.classes[0];
    for _ in 0..100 {
        let alpha: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut v = vec![0.0; g.node_count()];
        for (tagged, &a) in group.vectors.iter().zip(&alpha) {
            for (vi, ti) in v.iter_mut().zip(&tagged.vector) {
                *vi += a * ti;
            }
        }
        for ax in 1..=2usize {
            let flip = flip_operator(&g, ax).unwrap();
            let flipped = flip.apply(&v);
            let sign = class.sign(ax).factor();
            for (a, b) in flipped.iter().zip(&v) {
                assert!((a - sign * b).abs() <= 1e-10);
            }
        }
    }
}
