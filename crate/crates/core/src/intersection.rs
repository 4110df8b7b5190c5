//! Intersection numbers `I(a, b)`: the number of binary trees planar for
//! both orderings.
//!
//! Three independent routes are provided:
//! - [`count_bruteforce_in`]: filter an explicit list of all trees (oracle);
//! - [`count_dp`]: count triangulations of the `a`-polygon whose diagonals
//!   cut off arcs that are also contiguous in `b`;
//! - [`polygon_decomposition`]: the product-of-Catalan diagram rule, as a
//!   diagnostic.
//!
//! [`fast_nonzero`] decides `I(a, b) != 0` by pruning shared cherries.

use std::collections::BTreeSet;
use std::fmt;

use crate::analytics::catalan_u64;
use crate::error::{Error, Result};
use crate::ordering::Ordering;
use crate::tree::{bit, enumerate_all_trees, full_mask, is_contiguous, masks_compatible, Tree};

fn same_n(a: &Ordering, b: &Ordering) -> Result<usize> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch(a.n(), b.n()));
    }
    Ok(a.n())
}

/// Reference count: enumerates every binary tree (`n <= 8`).
pub fn count_bruteforce(a: &Ordering, b: &Ordering) -> Result<u64> {
    let n = same_n(a, b)?;
    let trees = enumerate_all_trees(n)?;
    count_bruteforce_in(&trees, a, b)
}

/// Reference count against a precomputed list of all trees on `n` leaves.
pub fn count_bruteforce_in(all_trees: &[Tree], a: &Ordering, b: &Ordering) -> Result<u64> {
    let n = same_n(a, b)?;
    if let Some(t) = all_trees.first() {
        if t.n() != n {
            return Err(Error::SizeMismatch(t.n(), n));
        }
    }
    let (pa, pb) = (a.positions(), b.positions());
    Ok(all_trees
        .iter()
        .filter(|t| t.masks().all(|m| is_contiguous(m, &pa) && is_contiguous(m, &pb)))
        .count() as u64)
}

/// Interval DP over the polygon of `a`; `O(n^3)`.
pub fn count_dp(a: &Ordering, b: &Ordering) -> Result<u64> {
    same_n(a, b)?;
    Ok(count_dp_raw(a.labels(), &b.positions()))
}

pub(crate) fn count_dp_raw(a: &[u8], b_pos: &[usize]) -> u64 {
    let n = a.len();
    // arc[i][j]: leaves a[i..j] as a mask
    let mut prefix = vec![0u32; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] | bit(a[i]);
    }
    let allowed = |i: usize, j: usize| j - i < 2 || is_contiguous(prefix[j] & !prefix[i], b_pos);
    // t[i][j]: triangulations of the sub-polygon on vertices i..=j
    let mut t = vec![vec![0u64; n]; n];
    for i in 0..n - 1 {
        t[i][i + 1] = 1;
    }
    for len in 2..n {
        for i in 0..n - len {
            let j = i + len;
            let mut sum = 0u64;
            for k in i + 1..j {
                if t[i][k] != 0 && t[k][j] != 0 && allowed(i, k) && allowed(k, j) {
                    sum += t[i][k] * t[k][j];
                }
            }
            t[i][j] = sum;
        }
    }
    t[0][n - 1]
}

/// `I(a, b) != 0`, decided by iterated cherry pruning.
///
/// At each step the shared adjacent pair with the smallest minimum label is
/// chosen (ties broken by the smaller maximum) and its larger label removed.
pub fn fast_nonzero(a: &Ordering, b: &Ordering) -> Result<bool> {
    same_n(a, b)?;
    Ok(fast_nonzero_raw(a.labels(), b.labels()))
}

pub(crate) fn fast_nonzero_raw(a: &[u8], b: &[u8]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    loop {
        if a.len() <= 4 {
            return true;
        }
        let Some((lo, hi)) = first_common_pair(&a, &b) else {
            return false;
        };
        debug_assert!(lo < hi);
        a.retain(|&l| l != hi);
        b.retain(|&l| l != hi);
    }
}

/// Smallest shared adjacent pair without allocating.
fn first_common_pair(a: &[u8], b: &[u8]) -> Option<(u8, u8)> {
    let n = a.len();
    let mut best: Option<(u8, u8)> = None;
    let mut nb = [(0u8, 0u8); 64];
    for i in 0..n {
        let (x, y) = (b[i], b[(i + 1) % n]);
        nb[i] = (x.min(y), x.max(y));
    }
    let nb = &nb[..n];
    for i in 0..n {
        let (x, y) = (a[i], a[(i + 1) % n]);
        let p = (x.min(y), x.max(y));
        if best.is_some_and(|q| q <= p) {
            continue;
        }
        if nb.contains(&p) {
            best = Some(p);
        }
    }
    best
}

/// Runs the pruning procedure along every possible sequence of choices
/// (either shared pair, either label removed) and collects the outcomes.
/// Exponential; intended for checking choice-independence at small `n`.
pub fn fast_nonzero_all_choices(a: &Ordering, b: &Ordering) -> Result<BTreeSet<bool>> {
    same_n(a, b)?;
    let mut out = BTreeSet::new();
    explore(a.labels(), b.labels(), &mut out);
    Ok(out)
}

fn explore(a: &[u8], b: &[u8], out: &mut BTreeSet<bool>) {
    if a.len() <= 4 {
        out.insert(true);
        return;
    }
    let pairs = crate::tree::common_adjacent_pairs(a, b);
    if pairs.is_empty() {
        out.insert(false);
        return;
    }
    for (x, y) in pairs {
        for drop in [x, y] {
            let a2: Vec<u8> = a.iter().copied().filter(|&l| l != drop).collect();
            let b2: Vec<u8> = b.iter().copied().filter(|&l| l != drop).collect();
            explore(&a2, &b2, out);
        }
    }
}

/// Outcome of the polygon diagram rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolygonDecomposition {
    /// Both orderings induce the same cyclic order at every vertex of the
    /// skeleton tree; the sides are the vertex degrees, sorted.
    Polygons(Vec<usize>),
    /// Induced orders disagree at some skeleton vertex. Degrees of all
    /// skeleton vertices and those of the mismatched ones are recorded.
    Mismatch {
        degrees: Vec<usize>,
        mismatched: Vec<usize>,
    },
}

impl PolygonDecomposition {
    /// `prod C_{s-2}` over polygons, or 0 on a mismatch.
    pub fn value(&self) -> u64 {
        match self {
            PolygonDecomposition::Polygons(sides) => {
                sides.iter().map(|&s| catalan_u64(s - 2)).product()
            }
            PolygonDecomposition::Mismatch { .. } => 0,
        }
    }

    /// Compares the diagram-rule value with an exact count.
    pub fn check(&self, count: u64) -> std::result::Result<(), DecompositionWarning> {
        let predicted = self.value();
        if predicted == count {
            Ok(())
        } else {
            Err(DecompositionWarning {
                decomposition: self.clone(),
                predicted,
                count,
            })
        }
    }
}

impl fmt::Display for PolygonDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolygonDecomposition::Polygons(sides) => {
                let parts: Vec<String> = sides.iter().map(|s| s.to_string()).collect();
                write!(f, "polygons [{}] -> {}", parts.join(","), self.value())
            }
            PolygonDecomposition::Mismatch { .. } => write!(f, "none -> 0"),
        }
    }
}

/// The diagram rule disagrees with the exact count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionWarning {
    pub decomposition: PolygonDecomposition,
    pub predicted: u64,
    pub count: u64,
}

impl fmt::Display for DecompositionWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "diagram rule predicts {} ({:?}) but the exact count is {}",
            self.predicted, self.decomposition, self.count
        )
    }
}

/// Splits contiguous in both orderings and compatible with every such
/// split; they form the skeleton tree shared by all common binary trees.
pub fn forced_splits(a: &Ordering, b: &Ordering) -> Result<Vec<u32>> {
    let n = same_n(a, b)?;
    let (pa, pb) = (a.positions(), b.positions());
    // every common split is an arc of `a`: enumerate arcs, keep canonical sides
    let labels = a.labels();
    let full = full_mask(n);
    let n_bit = bit(n as u8);
    let mut common = BTreeSet::new();
    for start in 0..n {
        let mut m = 0u32;
        for len in 1..=n - 2 {
            m |= bit(labels[(start + len - 1) % n]);
            if len >= 2 {
                let c = if m & n_bit != 0 { full & !m } else { m };
                if is_contiguous(c, &pb) {
                    debug_assert!(is_contiguous(c, &pa));
                    common.insert(c);
                }
            }
        }
    }
    let common: Vec<u32> = common.into_iter().collect();
    Ok(common
        .iter()
        .copied()
        .filter(|&s| common.iter().all(|&t| masks_compatible(s, t)))
        .collect())
}

/// The polygon diagram rule, via forced splits and induced vertex orders.
pub fn polygon_decomposition(a: &Ordering, b: &Ordering) -> Result<PolygonDecomposition> {
    let n = same_n(a, b)?;
    let forced = forced_splits(a, b)?;
    let full = full_mask(n);
    let mut degrees = Vec::new();
    let mut mismatched = Vec::new();

    // one skeleton vertex below each forced split, plus the vertex holding leaf n
    let parents: Vec<Option<u32>> = forced.iter().map(|&s| Some(s)).chain([None]).collect();
    for parent in parents {
        let region = parent.unwrap_or(full & !bit(n as u8));
        let children: Vec<u32> = forced
            .iter()
            .copied()
            .filter(|&c| c != region && c & region == c)
            .filter(|&c| {
                !forced
                    .iter()
                    .any(|&d| d != c && d != region && d & region == d && c & d == c)
            })
            .collect();
        let covered = children.iter().fold(0u32, |m, c| m | c);
        let mut branches = children;
        let mut rest = region & !covered;
        while rest != 0 {
            let low = rest & rest.wrapping_neg();
            branches.push(low);
            rest &= !low;
        }
        branches.push(full & !region);
        degrees.push(branches.len());

        let ia = induced_order(a.labels(), &branches);
        let ib = induced_order(b.labels(), &branches);
        if dihedral_canonical(&ia) != dihedral_canonical(&ib) {
            mismatched.push(branches.len());
        }
    }
    degrees.sort_unstable();
    if mismatched.is_empty() {
        Ok(PolygonDecomposition::Polygons(degrees))
    } else {
        mismatched.sort_unstable();
        Ok(PolygonDecomposition::Mismatch {
            degrees,
            mismatched,
        })
    }
}

/// Reads the cyclic sequence of branch representatives (smallest leaf) met
/// while walking `cycle`, with runs collapsed.
fn induced_order(cycle: &[u8], branches: &[u32]) -> Vec<u8> {
    let rep = |label: u8| -> u8 {
        let m = branches.iter().find(|&&m| m & bit(label) != 0).expect("branches partition leaves");
        m.trailing_zeros() as u8 + 1
    };
    let reps: Vec<u8> = cycle.iter().map(|&l| rep(l)).collect();
    let n = reps.len();
    let start = (0..n).find(|&i| reps[i] != reps[(i + n - 1) % n]).unwrap_or(0);
    let mut seq: Vec<u8> = Vec::new();
    for k in 0..n {
        let r = reps[(start + k) % n];
        if seq.last() != Some(&r) {
            seq.push(r);
        }
    }
    seq
}

/// Rotation/reflection canonical form of a cycle of distinct values.
fn dihedral_canonical(seq: &[u8]) -> Vec<u8> {
    let n = seq.len();
    let start = (0..n).min_by_key(|&i| seq[i]).unwrap_or(0);
    let forward: Vec<u8> = (0..n).map(|k| seq[(start + k) % n]).collect();
    let backward: Vec<u8> = (0..n).map(|k| forward[(n - k) % n]).collect();
    forward.min(backward)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordering {
        s.parse().unwrap()
    }

    #[test]
    fn bruteforce_examples() {
        let id5 = ord("1,2,3,4,5");
        assert_eq!(count_bruteforce(&id5, &ord("1,3,5,2,4")).unwrap(), 0);
        assert_eq!(count_bruteforce(&id5, &id5).unwrap(), 5);
        assert_eq!(count_bruteforce(&id5, &ord("1,2,5,3,4")).unwrap(), 1);
        assert!(count_bruteforce(&id5, &ord("1,2,3,4")).is_err());
    }

    #[test]
    fn dp_examples() {
        let id6 = ord("1,2,3,4,5,6");
        assert_eq!(count_dp(&id6, &ord("1,3,2,5,6,4")).unwrap(), 1);
        // frozen from count_bruteforce over the 105 trees
        assert_eq!(count_bruteforce(&id6, &ord("1,2,3,6,5,4")).unwrap(), 4);
        assert_eq!(count_dp(&id6, &ord("1,2,3,6,5,4")).unwrap(), 4);
        for n in 4..=9 {
            let id = Ordering::identity(n).unwrap();
            assert_eq!(count_dp(&id, &id).unwrap(), catalan_u64(n - 2));
        }
    }

    #[test]
    fn fast_nonzero_examples() {
        let id6 = ord("1,2,3,4,5,6");
        assert!(!fast_nonzero(&id6, &ord("1,3,6,5,2,4")).unwrap());
        assert!(fast_nonzero(&id6, &ord("1,3,5,6,4,2")).unwrap());
        assert!(!fast_nonzero(&ord("1,2,3,4,5"), &ord("1,3,5,2,4")).unwrap());
        assert!(fast_nonzero(&ord("1,2,3,4"), &ord("1,3,2,4")).unwrap());
    }

    #[test]
    fn decomposition_examples() {
        let id6 = ord("1,2,3,4,5,6");
        let d = polygon_decomposition(&id6, &id6).unwrap();
        assert_eq!(d, PolygonDecomposition::Polygons(vec![6]));
        assert_eq!(d.value(), 14);

        let d = polygon_decomposition(&id6, &ord("1,2,3,6,5,4")).unwrap();
        assert_eq!(d, PolygonDecomposition::Polygons(vec![4, 4]));
        assert_eq!(d.value(), 4);

        let d = polygon_decomposition(&ord("1,2,3,4,5"), &ord("1,3,5,2,4")).unwrap();
        assert!(matches!(d, PolygonDecomposition::Mismatch { .. }));
        assert_eq!(d.value(), 0);
        assert!(d.check(0).is_ok());
        assert!(d.check(1).is_err());
    }

    #[test]
    fn decomposition_sides_sum() {
        let cat = crate::ordering::OrderingCatalog::enumerate(6).unwrap();
        let id = cat.get(0);
        for o in cat.iter() {
            if let PolygonDecomposition::Polygons(sides) = polygon_decomposition(id, o).unwrap() {
                assert_eq!(sides.iter().sum::<usize>(), 6 + 2 * (sides.len() - 1));
            }
        }
    }

    #[test]
    fn choice_independence_small() {
        let cat = crate::ordering::OrderingCatalog::enumerate(6).unwrap();
        for a in cat.iter().take(6) {
            for b in cat.iter() {
                let outcomes = fast_nonzero_all_choices(a, b).unwrap();
                assert_eq!(outcomes.len(), 1, "{a} vs {b}");
            }
        }
    }
}
