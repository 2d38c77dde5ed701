mod common;

use common::{all_up_to, brute_force_trees, df, is_valid_tree};
use num_bigint::BigUint;
use pd_skeleton::{
    count_trees, edge_disjoint_pair, enumerate_trees, BipartiteTree, DegreeFunction, SizeGuard,
};
use proptest::prelude::*;

#[test]
fn enumeration_matches_brute_force() {
    for f in all_up_to(8) {
        let fast: Vec<Vec<_>> = enumerate_trees(&f, SizeGuard::default())
            .unwrap()
            .iter()
            .map(|t| t.edges().to_vec())
            .collect();
        let slow = brute_force_trees(&f);
        assert_eq!(fast, slow, "d = {f}");
    }
}

#[test]
fn formula_matches_enumeration_up_to_ten() {
    for f in all_up_to(10) {
        let trees = enumerate_trees(&f, SizeGuard::default()).unwrap();
        assert_eq!(BigUint::from(trees.len()), count_trees(&f), "d = {f}");
        assert!(
            trees.windows(2).all(|w| w[0] < w[1]),
            "d = {f}: not strictly increasing"
        );
        assert!(
            trees.iter().all(|t| is_valid_tree(&f, t.edges())),
            "d = {f}"
        );
    }
}

#[test]
fn frozen_counts() {
    // values cross-checked by the brute-force oracle above
    for (d, expected) in [
        (vec![1, 1], 6u64),
        (vec![1, 1, 1], 96),
        (vec![2, 1], 12),
        (vec![2, 0], 3),
        (vec![1, 1, 1, 1], 3000),
        (vec![5], 1),
        (vec![0, 0, 0], 1),
    ] {
        assert_eq!(count_trees(&df(&d)), BigUint::from(expected), "{d:?}");
    }
}

#[test]
fn count_is_exact_for_large_instances() {
    // (n-1)! n^(m-1) / prod d! with m = 10, d = 3: n = 31
    let f = DegreeFunction::constant(10, 3).unwrap();
    let direct: BigUint = (1..=30u32).map(BigUint::from).product::<BigUint>()
        * BigUint::from(31u32).pow(9)
        / BigUint::from(6u32).pow(10);
    assert_eq!(count_trees(&f), direct);
}

#[test]
fn disjoint_pair_search_agrees_with_exhaustive_pairs() {
    for d in [
        vec![1, 1, 1],
        vec![1, 1],
        vec![2, 1],
        vec![2, 0],
        vec![1, 1, 1, 1],
    ] {
        let f = df(&d);
        let slow = brute_force_trees(&f);
        let exists = slow.iter().enumerate().any(|(i, a)| {
            slow[i + 1..]
                .iter()
                .any(|b| a.iter().all(|e| !b.contains(e)))
        });
        let found = edge_disjoint_pair(&f, SizeGuard::default()).unwrap();
        assert_eq!(found.is_some(), exists, "{d:?}");
        if let Some((a, b)) = found {
            assert!(a.edges().iter().all(|&e| !b.contains(e)));
            assert!(is_valid_tree(&f, a.edges()) && is_valid_tree(&f, b.edges()));
        }
    }
}

#[test]
fn encoding_parses_back() {
    let f = df(&[2, 1, 0]);
    for t in enumerate_trees(&f, SizeGuard::default()).unwrap() {
        assert_eq!(BipartiteTree::parse(&f, &t.encoding()).unwrap(), t);
    }
}

proptest! {
    #[test]
    fn formula_divides_and_matches(d in prop::collection::vec(0usize..3, 1..4)) {
        let f = DegreeFunction::new(d).unwrap();
        let trees = enumerate_trees(&f, SizeGuard::default()).unwrap();
        prop_assert_eq!(BigUint::from(trees.len()), count_trees(&f));
    }

    #[test]
    fn shuffled_edges_give_the_same_tree(seed in 0usize..96, rot in 0usize..6) {
        let f = df(&[1, 1, 1]);
        let t = enumerate_trees(&f, SizeGuard::default()).unwrap().swap_remove(seed);
        let mut edges = t.edges().to_vec();
        edges.rotate_left(rot);
        edges.reverse();
        prop_assert_eq!(BipartiteTree::new(&f, edges).unwrap(), t);
    }
}
