//! Randomized invariants linking the structural criteria, the witnesses,
//! and the numerical oracles.

use gridctl_core::{
    build_grid_laplacian, canonical_uncontrollable_set, grid_spectrum, is_simple, kalman_rank,
    nonsimple_grid_controllable, numeric_eigensystem, odd_prime_power_divisors,
    path_node_uncontrollable, path_uncontrollable_eigenpairs, pbh_uncontrollable_with,
    simple_grid_controllable, suggest_control_nodes, GridError, GridSpec, NodeIndex, Precision,
};
use proptest::prelude::*;

fn prec() -> Precision {
    Precision::default()
}

/// Grid dimensions small enough for the dense oracles.
fn grid_dims() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=6, 1..=3)
        .prop_filter("dense oracle cap", |dims| dims.iter().product::<usize>() <= 150)
}

/// Dimensions plus a set of distinct flat node indices.
fn grid_and_nodes() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    grid_dims().prop_flat_map(|dims| {
        let n: usize = dims.iter().product();
        let set = prop::collection::btree_set(0..n, 1..=4.min(n));
        (Just(dims), set.prop_map(|s| s.into_iter().collect::<Vec<_>>()))
    })
}

fn unflatten_all(g: &GridSpec, flats: &[usize]) -> Vec<NodeIndex> {
    flats.iter().map(|&f| g.unflatten(f)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The structural verdict must agree with the PBH oracle on any grid.
    #[test]
    fn structural_verdict_matches_pbh((dims, flats) in grid_and_nodes()) {
        let p = prec();
        let g = GridSpec::new(dims).unwrap();
        let nodes = unflatten_all(&g, &flats);
        let verdict = nonsimple_grid_controllable(&g, &nodes, &p).unwrap();
        let lap = build_grid_laplacian(&g).unwrap();
        let spectrum = numeric_eigensystem(&lap).unwrap();
        let oracle = pbh_uncontrollable_with(&spectrum, &flats).unwrap();
        prop_assert_eq!(verdict.controllable, oracle.is_empty());
        // Uncontrollable eigenvalue sets must match as multisets.
        let mut ours: Vec<f64> = verdict.uncontrollable.iter().map(|m| m.value.value()).collect();
        let mut theirs: Vec<f64> = oracle.into_iter().map(|(v, _)| v).collect();
        ours.sort_by(|a, b| a.partial_cmp(b).unwrap());
        theirs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        prop_assert_eq!(ours.len(), theirs.len());
        for (a, b) in ours.iter().zip(&theirs) {
            prop_assert!((a - b).abs() <= 1e-8);
        }
    }

    /// On simple grids the dedicated simple route and the general route
    /// must return identical verdicts.
    #[test]
    fn simple_route_agrees_with_general((dims, flats) in grid_and_nodes()) {
        let p = prec();
        let g = GridSpec::new(dims).unwrap();
        if !is_simple(&g, &p).unwrap() {
            return Ok(());
        }
        let nodes = unflatten_all(&g, &flats);
        let simple = simple_grid_controllable(&g, &nodes, &p).unwrap();
        let general = nonsimple_grid_controllable(&g, &nodes, &p).unwrap();
        prop_assert_eq!(simple.controllable, general.controllable);
        prop_assert_eq!(simple.uncontrollable.len(), general.uncontrollable.len());
    }

    /// PBH finds no uncontrollable eigenvalue exactly when the Kalman
    /// matrix reaches full rank, on every order the Kalman oracle accepts.
    #[test]
    fn pbh_empty_iff_kalman_full_rank((dims, flats) in grid_and_nodes()) {
        let g = GridSpec::new(dims).unwrap();
        let lap = build_grid_laplacian(&g).unwrap();
        let rank = match kalman_rank(&lap, &flats) {
            Err(GridError::KalmanTooLarge { .. }) => return Ok(()),
            other => other.unwrap(),
        };
        let spectrum = numeric_eigensystem(&lap).unwrap();
        let pbh_clear = pbh_uncontrollable_with(&spectrum, &flats).unwrap().is_empty();
        prop_assert_eq!(pbh_clear, rank == g.node_count());
    }

    /// Analytic multiplicities partition the node count and every analytic
    /// eigenvalue matches its oracle counterpart position by position.
    #[test]
    fn spectrum_matches_oracle_multiset(dims in grid_dims()) {
        let p = prec();
        let g = GridSpec::new(dims).unwrap();
        let spectrum = grid_spectrum(&g, &p).unwrap();
        let total: usize = spectrum.groups().iter().map(|gr| gr.value.multiplicity).sum();
        prop_assert_eq!(total, g.node_count());
        let lap = build_grid_laplacian(&g).unwrap();
        let numeric = numeric_eigensystem(&lap).unwrap();
        let mut idx = 0usize;
        for group in spectrum.groups() {
            let value = group.value.value();
            prop_assert!((0.0..=4.0 * g.ndim() as f64 + 1e-12).contains(&value));
            for _ in 0..group.value.multiplicity {
                prop_assert!((numeric.eigenvalues[idx] - value).abs() <= 1e-8);
                idx += 1;
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Path verdict bookkeeping: blocking moduli, combined modulus, and
    /// witness counts are mutually consistent and every witness checks out.
    #[test]
    fn path_verdicts_are_internally_consistent(
        n in 2usize..=40,
        picks in prop::collection::btree_set(0usize..40, 1..=3),
    ) {
        let p = prec();
        let nodes: Vec<usize> = picks.into_iter().map(|i| i % n + 1).collect();
        let verdict = path_uncontrollable_eigenpairs(n, &nodes, &p).unwrap();
        prop_assert_eq!(verdict.controllable, verdict.modulus == 1);
        prop_assert_eq!(verdict.controllable, verdict.blocking.is_empty());
        prop_assert_eq!(
            verdict.uncontrollable.len(),
            (verdict.modulus as usize - 1) / 2
        );
        // Blocking prime powers are exactly the odd prime powers of the
        // combined modulus.
        let expected = odd_prime_power_divisors(verdict.modulus).unwrap();
        prop_assert_eq!(&verdict.blocking, &expected);
        for mode in &verdict.uncontrollable {
            prop_assert!(mode.witness.residual <= 1e-10);
            for &i in &nodes {
                let node = NodeIndex::new(vec![i]);
                prop_assert!(
                    mode.witness.claimed_zeros.contains(&node),
                    "queried node {} missing from claimed zeros", i
                );
            }
        }
    }

    /// Canonical sets contain exactly the nodes whose blocking list holds
    /// the prime power.
    #[test]
    fn canonical_set_is_the_blocked_node_set(n in 1usize..=60) {
        for q in odd_prime_power_divisors(n as u64).unwrap() {
            let set = canonical_uncontrollable_set(n, q).unwrap();
            for i in 1..=n {
                let blocked = path_node_uncontrollable(n, i).unwrap().contains(&q);
                prop_assert_eq!(set.contains(&i), blocked, "n={}, q={}, i={}", n, q, i);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Suggested control nodes really control the simple grids they are
    /// offered for, per the oracle.
    #[test]
    fn suggested_nodes_control_simple_grids(dims in grid_dims()) {
        let p = prec();
        let g = GridSpec::new(dims).unwrap();
        if !is_simple(&g, &p).unwrap() {
            return Ok(());
        }
        let nodes = suggest_control_nodes(&g, &p).unwrap();
        let verdict = simple_grid_controllable(&g, &nodes, &p).unwrap();
        prop_assert!(verdict.controllable);
        let lap = build_grid_laplacian(&g).unwrap();
        let spectrum = numeric_eigensystem(&lap).unwrap();
        let flats: Vec<usize> = nodes.iter().map(|n| g.flatten(n)).collect();
        prop_assert!(pbh_uncontrollable_with(&spectrum, &flats).unwrap().is_empty());
    }
}
