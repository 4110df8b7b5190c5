use std::collections::BTreeSet;

use itertools::Itertools;
use proptest::prelude::*;
use tropgr_core::tree::{enumerate_all_trees, enumerate_planar, LinkGraph};
use tropgr_core::{Ordering, OrderingCatalog};

fn permutation(n: usize) -> impl Strategy<Value = Vec<u8>> {
    Just((1..=n as u8).collect::<Vec<u8>>()).prop_shuffle()
}

fn sized_permutation(lo: usize, hi: usize) -> impl Strategy<Value = Vec<u8>> {
    (lo..=hi).prop_flat_map(permutation)
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

fn double_factorial(k: usize) -> usize {
    (1..=k).rev().step_by(2).product()
}

fn catalan(m: usize) -> usize {
    let mut c = vec![1usize; m + 1];
    for k in 1..=m {
        c[k] = (0..k).map(|i| c[i] * c[k - 1 - i]).sum();
    }
    c[m]
}

proptest! {
    #[test]
    fn canonical_form_is_idempotent(seq in sized_permutation(4, 10)) {
        let o = Ordering::canonicalize(&seq).unwrap();
        prop_assert_eq!(Ordering::canonicalize(o.labels()).unwrap(), o);
    }

    #[test]
    fn canonical_form_ignores_rotation_and_reflection(seq in sized_permutation(4, 10), k in 0usize..10) {
        let o = Ordering::canonicalize(&seq).unwrap();
        let mut rotated = seq.clone();
        rotated.rotate_left(k % seq.len());
        let reversed: Vec<u8> = seq.iter().rev().copied().collect();
        prop_assert_eq!(Ordering::canonicalize(&rotated).unwrap(), o.clone());
        prop_assert_eq!(Ordering::canonicalize(&reversed).unwrap(), o);
    }

    #[test]
    fn relabel_composes(n in 4usize..=9, seed in any::<u64>()) {
        let mut rng = tropgr_core::rng::Lcg64::new(seed);
        let mut shuffled = || {
            let mut v: Vec<u8> = (1..=n as u8).collect();
            for i in (1..n).rev() {
                v.swap(i, rng.next_u32() as usize % (i + 1));
            }
            v
        };
        let (o, p, q) = (Ordering::canonicalize(&shuffled()).unwrap(), shuffled(), shuffled());
        let pq: Vec<u8> = q.iter().map(|&k| p[k as usize - 1]).collect();
        prop_assert_eq!(o.relabel(&pq).unwrap(), o.relabel(&q).unwrap().relabel(&p).unwrap());
    }

    #[test]
    fn planar_trees_are_the_filtered_catalogue(seq in permutation(7)) {
        let o = Ordering::canonicalize(&seq).unwrap();
        let all = enumerate_all_trees(7).unwrap();
        let filtered: BTreeSet<_> = all.into_iter().filter(|t| t.is_planar(&o).unwrap()).collect();
        let planar: BTreeSet<_> = enumerate_planar(&o).into_iter().collect();
        prop_assert_eq!(planar.len(), catalan(5));
        prop_assert_eq!(planar, filtered);
    }
}

#[test]
fn catalog_sizes_match_distinct_dihedral_classes() {
    for n in 4..=8 {
        let catalog = OrderingCatalog::enumerate(n).unwrap();
        assert_eq!(catalog.len(), factorial(n - 1) / 2);
        if n <= 7 {
            let classes: BTreeSet<Ordering> = (1..=n as u8)
                .permutations(n)
                .map(|p| Ordering::canonicalize(&p).unwrap())
                .collect();
            assert_eq!(classes.len(), catalog.len());
            assert!(catalog.orderings().windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn tree_counts() {
    for n in 4..=7 {
        let all = enumerate_all_trees(n).unwrap();
        assert_eq!(all.len(), double_factorial(2 * n - 5));
        for t in &all {
            assert_eq!(t.splits().len(), n - 3);
            for (a, b) in t.splits().iter().tuple_combinations() {
                assert!(a.is_compatible(b));
            }
        }
        let id = Ordering::identity(n).unwrap();
        assert_eq!(enumerate_planar(&id).len(), catalan(n - 2));
    }
}

#[test]
fn link_graph_edges_are_the_binary_trees() {
    let g = LinkGraph::build(5).unwrap();
    let edge_trees: BTreeSet<_> = g.edges.iter().map(|e| e.2.clone()).collect();
    let all: BTreeSet<_> = enumerate_all_trees(5).unwrap().into_iter().collect();
    assert_eq!(g.edges.len(), edge_trees.len());
    assert_eq!(edge_trees, all);
    let mut degree = vec![0; g.vertices.len()];
    for &(u, v, _) in &g.edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    assert!(degree.iter().all(|&d| d == 3));
}
