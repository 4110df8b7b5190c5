use itertools::Itertools;
use proptest::prelude::*;
use tropgr_core::search::{
    max_clique, max_permutation_submatrix, symmetric_degree, verify_clique_witness, verify_witness, BudgetedSearch,
    Checkpoint, CompatibilityGraph, SearchOptions, WitnessFile,
};
use tropgr_core::{BinaryMatrix, Bitset, Ordering};

fn set(v: &[&str]) -> Vec<Ordering> {
    v.iter().map(|s| s.parse().unwrap()).collect()
}

const N6_A: [&str; 4] = ["1,2,3,4,5,6", "1,2,6,3,4,5", "1,5,3,4,2,6", "1,5,4,2,3,6"];
const N6_B: [&str; 4] = ["1,3,2,5,6,4", "1,2,5,3,6,4", "1,3,5,2,6,4", "1,3,6,5,2,4"];

const N7_A: [&str; 14] = [
    "1,2,3,4,5,6,7",
    "1,5,6,4,3,2,7",
    "1,3,5,4,6,2,7",
    "1,3,4,2,6,7,5",
    "1,2,7,6,5,4,3",
    "1,5,3,4,2,6,7",
    "1,2,7,3,4,5,6",
    "1,2,7,6,4,5,3",
    "1,3,2,4,6,5,7",
    "1,5,3,4,7,2,6",
    "1,3,2,4,6,7,5",
    "1,2,3,4,7,5,6",
    "1,2,6,4,3,5,7",
    "1,5,7,3,4,2,6",
];
const N7_B: [&str; 14] = [
    "1,4,5,2,3,6,7",
    "1,4,6,3,7,2,5",
    "1,3,6,2,5,4,7",
    "1,3,6,2,5,7,4",
    "1,3,6,5,2,7,4",
    "1,4,2,5,3,6,7",
    "1,4,5,2,7,3,6",
    "1,2,5,3,6,7,4",
    "1,3,6,5,2,4,7",
    "1,4,7,2,5,3,6",
    "1,4,7,6,3,2,5",
    "1,4,7,5,2,3,6",
    "1,2,5,7,3,6,4",
    "1,4,2,5,7,3,6",
];

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

#[test]
fn petersen_witness_is_diag_five() {
    let a = set(&["1,2,3,4,5", "1,3,5,2,4"]);
    let r = verify_witness(&a, &a).unwrap();
    assert_eq!(r.counts, vec![vec![5, 0], vec![0, 5]]);
    assert_eq!(r.rank, 2);
}

#[test]
fn six_point_witness_is_identity() {
    let r = verify_witness(&set(&N6_A), &set(&N6_B)).unwrap();
    let identity: Vec<Vec<u64>> = (0..4).map(|i| (0..4).map(|j| u64::from(i == j)).collect()).collect();
    assert_eq!(r.counts, identity);
    assert!(r.permutation_identity);
    assert_eq!(r.rank, 4);
}

#[test]
fn seven_point_witness_is_a_permutation_matrix() {
    let r = verify_witness(&set(&N7_A), &set(&N7_B)).unwrap();
    assert!(r.permutation_diagonal);
    assert_eq!(r.rank, 14);
    let perm = r.permutation.unwrap();
    assert_eq!(perm.iter().copied().sorted().collect::<Vec<_>>(), (0..14).collect::<Vec<_>>());
}

/// Exhaustive check over row and column subsets; feasible only for n = 5.
fn has_permutation_submatrix(m: &BinaryMatrix, k: usize) -> bool {
    let size = m.size();
    (0..size).combinations(k).any(|rows| {
        (0..size).combinations(k).any(|cols| {
            rows.iter().all(|&r| cols.iter().filter(|&&c| m.get(r, c)).count() == 1)
                && cols.iter().all(|&c| rows.iter().filter(|&&r| m.get(r, c)).count() == 1)
        })
    })
}

#[test]
fn five_point_degree_by_exhaustion() {
    let m = BinaryMatrix::build(5).unwrap();
    assert!(has_permutation_submatrix(&m, 2));
    assert!(!has_permutation_submatrix(&m, 3));
    let w = max_permutation_submatrix(&m, &SearchOptions::default()).unwrap();
    assert_eq!(w.size(), 2);
}

#[test]
fn six_point_degree_is_four() {
    let m = BinaryMatrix::build(6).unwrap();
    let w = max_permutation_submatrix(&m, &SearchOptions::default()).unwrap();
    assert_eq!(w.size(), 4);
    assert!(!w.lower_bound);
    let r = verify_clique_witness(&w, m.catalog()).unwrap();
    assert!(r.permutation_diagonal);
    let full = CompatibilityGraph::build(&m);
    assert_eq!(max_clique(full.adjacency(), false).len(), 4);
}

#[test]
fn symmetric_degrees_small_n() {
    for (n, expected) in [(5, 2), (6, 3), (7, 6)] {
        let m = BinaryMatrix::build(n).unwrap();
        assert_eq!(symmetric_degree(&m).unwrap().len(), expected);
    }
}

#[test]
fn seven_point_budgeted_search_reaches_fourteen() {
    let m = BinaryMatrix::build(7).unwrap();
    let opts = SearchOptions {
        node_budget: Some(200),
        heuristic_chains: 4,
        heuristic_moves: 20_000,
        seed: 1,
        ..SearchOptions::default()
    };
    let w = max_permutation_submatrix(&m, &opts).unwrap();
    assert!(w.lower_bound);
    assert!(w.size() >= 14 && w.size() <= factorial(4));
    assert!(w.is_permutation_in(&m));
    assert!(verify_clique_witness(&w, m.catalog()).unwrap().permutation_diagonal);
}

#[test]
fn checkpoint_survives_a_file_round_trip() {
    let m = BinaryMatrix::build(6).unwrap();
    let dir = std::env::temp_dir().join(format!("tropgr-search-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cp.json");
    let mut search = BudgetedSearch::new(&m, &SearchOptions::default()).unwrap();
    assert!(!search.run(1_000).unwrap());
    search.checkpoint().write(&path).unwrap();
    let mut resumed = BudgetedSearch::resume(&m, &Checkpoint::read(&path).unwrap()).unwrap();
    while !resumed.run(1_000).unwrap() {}
    let w = resumed.witness();
    assert_eq!(w.size(), 4);
    let exact = max_permutation_submatrix(&m, &SearchOptions::default()).unwrap();
    assert_eq!(w.pairs, exact.pairs);

    let file = w.to_file(m.catalog());
    file.write(&dir.join("w.json")).unwrap();
    let back = WitnessFile::read(&dir.join("w.json")).unwrap();
    assert_eq!(back, file);
    let (a, b) = back.orderings().unwrap();
    assert!(verify_witness(&a, &b).unwrap().permutation_diagonal);
    std::fs::remove_dir_all(&dir).ok();
}

fn random_rows(size: usize, bits: &[bool]) -> Vec<Bitset> {
    (0..size)
        .map(|r| {
            let mut b = Bitset::new(size);
            for c in 0..size {
                if bits[r * size + c] {
                    b.set(c);
                }
            }
            b
        })
        .collect()
}

fn is_permutation(rows: &[Bitset], pairs: &[(usize, usize)]) -> bool {
    let rs: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let cs: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    rs.iter().all_unique()
        && cs.iter().all_unique()
        && pairs.iter().all(|&(r, c)| cs.iter().all(|&l| rows[r].get(l) == (l == c)))
}

proptest! {
    #[test]
    fn cliques_are_permutation_submatrices(bits in proptest::collection::vec(any::<bool>(), 49), pick in proptest::collection::vec(any::<bool>(), 49)) {
        let rows = random_rows(7, &bits);
        let ids: Vec<usize> = (0..7).collect();
        let g = CompatibilityGraph::from_submatrix(&rows, &ids, &ids);
        let chosen: Vec<usize> = (0..g.vertex_count()).filter(|&v| pick[v]).collect();
        let is_clique = chosen.iter().tuple_combinations().all(|(&u, &v)| g.are_adjacent(u, v));
        let pairs: Vec<(usize, usize)> = chosen.iter().map(|&v| g.vertex(v)).collect();
        prop_assert_eq!(is_clique, is_permutation(&rows, &pairs));
        let best: Vec<(usize, usize)> = max_clique(g.adjacency(), true).iter().map(|&v| g.vertex(v as usize)).collect();
        prop_assert!(is_permutation(&rows, &best));
    }
}
