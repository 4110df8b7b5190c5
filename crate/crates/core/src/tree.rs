//! Unrooted leaf-labelled trees stored as sets of splits.
//!
//! A split is the leaf bipartition induced by an internal edge. It is stored
//! as a bitmask (bit `k-1` for label `k`) of the side that does not contain
//! label `n`, so two splits are compatible exactly when one contains the other
//! or they are disjoint.

use std::cmp;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use itertools::Itertools;

use crate::error::{check_range, Error, Result};
use crate::ordering::{Ordering, MAX_LABELS, MIN_N};

/// Largest `n` for [`enumerate_all_trees`]; `(2*8-5)!! = 10395` trees.
pub const ALL_TREES_MAX_N: usize = 8;
/// Largest `n` for [`enumerate_codim1`].
pub const CODIM1_MAX_N: usize = 7;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Split {
    n: u8,
    mask: u32,
}

impl Split {
    /// Builds a split from either side of the bipartition.
    pub fn new(n: usize, members: &[u8]) -> Result<Self> {
        check_range("n", n, MIN_N, MAX_LABELS)?;
        let mut mask = 0u32;
        for &l in members {
            if l == 0 || l as usize > n || mask & bit(l) != 0 {
                return Err(Error::InvalidSplit(format!("{members:?} for n = {n}")));
            }
            mask |= bit(l);
        }
        Self::from_mask(n, mask)
    }

    pub fn from_mask(n: usize, mask: u32) -> Result<Self> {
        check_range("n", n, MIN_N, MAX_LABELS)?;
        let full = full_mask(n);
        if mask & !full != 0 {
            return Err(Error::InvalidSplit(format!("mask {mask:#b} for n = {n}")));
        }
        let canonical = if mask & bit(n as u8) != 0 { full & !mask } else { mask };
        let size = canonical.count_ones() as usize;
        if size < 2 || size > n - 2 {
            return Err(Error::InvalidSplit(format!(
                "side of size {size} is not between 2 and {}",
                n - 2
            )));
        }
        Ok(Split {
            n: n as u8,
            mask: canonical,
        })
    }

    pub(crate) fn from_canonical_unchecked(n: usize, mask: u32) -> Self {
        Split { n: n as u8, mask }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Canonical side (never contains label `n`).
    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn complement_mask(&self) -> u32 {
        full_mask(self.n()) & !self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, label: u8) -> bool {
        self.mask & bit(label) != 0
    }

    pub fn members(&self) -> Vec<u8> {
        mask_members(self.mask)
    }

    pub fn is_compatible(&self, other: &Split) -> bool {
        masks_compatible(self.mask, other.mask)
    }

    /// True when the canonical side is a contiguous arc of `o`'s cycle.
    pub fn is_planar(&self, o: &Ordering) -> bool {
        is_contiguous(self.mask, &o.positions())
    }
}

impl PartialOrd for Split {
    fn partial_cmp(&self, other: &Self) -> Option<cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Split {
    /// Lexicographic on the sorted member lists.
    fn cmp(&self, other: &Self) -> cmp::Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.members().cmp(&other.members()))
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.members().iter().join(","))
    }
}

impl fmt::Debug for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[inline]
pub(crate) fn bit(label: u8) -> u32 {
    1u32 << (label - 1)
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub(crate) fn mask_members(mask: u32) -> Vec<u8> {
    (0..32u8).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

#[inline]
pub(crate) fn masks_compatible(a: u32, b: u32) -> bool {
    a & b == 0 || a & b == a || a & b == b
}

/// Whether the labels in `mask` occupy a cyclic interval, given the position
/// of every label (`pos[label - 1]`).
#[inline]
pub(crate) fn is_contiguous(mask: u32, pos: &[usize]) -> bool {
    let n = pos.len();
    let mut pm: u64 = 0;
    let mut m = mask;
    while m != 0 {
        let l = m.trailing_zeros() as usize;
        pm |= 1 << pos[l];
        m &= m - 1;
    }
    if pm == 0 || pm == (1u64 << n) - 1 {
        return false;
    }
    // bit i of `next` is bit (i+1) mod n of pm
    let next = (pm >> 1) | ((pm & 1) << (n - 1));
    (pm & !next).count_ones() == 1
}

/// An unrooted binary tree: `n - 3` pairwise compatible splits.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    n: usize,
    splits: Vec<Split>,
}

impl Tree {
    pub fn from_splits(n: usize, splits: impl IntoIterator<Item = Split>) -> Result<Self> {
        let splits = collect_laminar(n, splits)?;
        if splits.len() != n - 3 {
            return Err(Error::InvalidTree(format!(
                "a binary tree on {n} leaves has {} splits, got {}",
                n - 3,
                splits.len()
            )));
        }
        Ok(Tree { n, splits })
    }

    pub(crate) fn from_masks_unchecked(n: usize, masks: impl IntoIterator<Item = u32>) -> Self {
        let mut splits: Vec<Split> = masks
            .into_iter()
            .map(|m| Split::from_canonical_unchecked(n, m))
            .collect();
        splits.sort();
        Tree { n, splits }
    }

    /// Parses the text form `"{1,2}|{1,2,3}"`; either side of each split may
    /// be written.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        Tree::from_splits(n, parse_splits(n, s)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn masks(&self) -> impl Iterator<Item = u32> + '_ {
        self.splits.iter().map(|s| s.mask)
    }

    pub fn is_planar(&self, o: &Ordering) -> Result<bool> {
        if o.n() != self.n {
            return Err(Error::SizeMismatch(self.n, o.n()));
        }
        let pos = o.positions();
        Ok(self.masks().all(|m| is_contiguous(m, &pos)))
    }

    /// Cherries as sorted label pairs (size-2 sides of splits, or of the
    /// complement).
    pub fn cherries(&self) -> Vec<(u8, u8)> {
        let mut out: Vec<(u8, u8)> = self
            .splits
            .iter()
            .flat_map(|s| [s.mask, s.complement_mask()])
            .filter(|m| m.count_ones() == 2)
            .map(|m| {
                let v = mask_members(m);
                (v[0], v[1])
            })
            .collect();
        out.sort_unstable();
        out
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_splits(f, &self.splits)
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({self})")
    }
}

fn write_splits(f: &mut fmt::Formatter<'_>, splits: &[Split]) -> fmt::Result {
    if splits.is_empty() {
        return write!(f, "{{}}");
    }
    write!(f, "{}", splits.iter().join("|"))
}

fn parse_splits(n: usize, s: &str) -> Result<Vec<Split>> {
    let s = s.trim();
    if s == "{}" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split('|')
        .map(|part| {
            let body = part.trim().trim_start_matches('{').trim_end_matches('}');
            let labels = body
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u8>()
                        .map_err(|_| Error::InvalidSplit(format!("bad label {t:?}")))
                })
                .collect::<Result<Vec<u8>>>()?;
            Split::new(n, &labels)
        })
        .collect()
}

fn collect_laminar(n: usize, splits: impl IntoIterator<Item = Split>) -> Result<Vec<Split>> {
    check_range("n", n, MIN_N, MAX_LABELS)?;
    let mut v: Vec<Split> = splits.into_iter().collect();
    if let Some(s) = v.iter().find(|s| s.n() != n) {
        return Err(Error::SizeMismatch(s.n(), n));
    }
    v.sort();
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidTree("duplicate split".into()));
    }
    for (a, b) in v.iter().tuple_combinations() {
        if !a.is_compatible(b) {
            return Err(Error::InvalidTree(format!("splits {a} and {b} cross")));
        }
    }
    Ok(v)
}

/// A tree with exactly one degree-4 vertex (one contracted internal edge).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegenerateTree {
    n: usize,
    splits: Vec<Split>,
}

impl DegenerateTree {
    pub fn from_splits(n: usize, splits: impl IntoIterator<Item = Split>) -> Result<Self> {
        let splits = collect_laminar(n, splits)?;
        if splits.len() + 4 != n {
            return Err(Error::InvalidTree(format!(
                "a tree with one degree-4 vertex on {n} leaves has {} splits, got {}",
                n - 4,
                splits.len()
            )));
        }
        Ok(DegenerateTree { n, splits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    /// The three binary trees obtained by resolving the degree-4 vertex.
    pub fn smoothings(&self) -> Result<Vec<Tree>> {
        let n = self.n;
        let masks: Vec<u32> = self.splits.iter().map(|s| s.mask).collect();
        // every compatible split not already present resolves the
        // high-degree vertex; a single degree-4 vertex has three resolutions
        let extra: Vec<u32> = (1u32..(1u32 << (n - 1)))
            .filter(|m| {
                let size = m.count_ones() as usize;
                size >= 2 && size <= n - 2
            })
            .filter(|m| !masks.contains(m) && masks.iter().all(|&s| masks_compatible(s, *m)))
            .collect();
        if extra.len() != 3 {
            return Err(Error::InvalidTree(format!(
                "expected 3 smoothings of {self}, found {}",
                extra.len()
            )));
        }
        let mut trees: Vec<Tree> = extra
            .into_iter()
            .map(|m| Tree::from_masks_unchecked(n, masks.iter().copied().chain([m])))
            .collect();
        trees.sort();
        Ok(trees)
    }
}

impl fmt::Display for DegenerateTree {
    /// For `n = 5` this is the `(ab)(cde)` notation: the cherry, then the
    /// leaves at the degree-4 vertex.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 5 {
            let s = self.splits[0];
            let (pair, rest) = if s.len() == 2 {
                (s.mask, s.complement_mask())
            } else {
                (s.complement_mask(), s.mask)
            };
            let digits = |m: u32| mask_members(m).iter().join("");
            return write!(f, "({})({})", digits(pair), digits(rest));
        }
        write_splits(f, &self.splits)
    }
}

impl fmt::Debug for DegenerateTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DegenerateTree({self})")
    }
}

/// All unrooted binary trees on `n` labelled leaves, sorted.
///
/// Built by leaf insertion: leaf `k+1` is attached to every edge of every
/// tree on `k` leaves. Edges are keyed by the side not containing leaf 1.
pub fn enumerate_all_trees(n: usize) -> Result<Vec<Tree>> {
    check_range("n", n, MIN_N, ALL_TREES_MAX_N)?;
    let mut current: Vec<Vec<u32>> = vec![vec![bit(2), bit(3), bit(2) | bit(3)]];
    for k in 3..n as u8 {
        let new_leaf = bit(k + 1);
        let mut next = Vec::with_capacity(current.len() * (2 * k as usize - 3));
        for edges in &current {
            for &target in edges {
                let mut e: Vec<u32> = edges
                    .iter()
                    .map(|&t| if t & target == target { t | new_leaf } else { t })
                    .collect();
                e.push(target);
                e.push(new_leaf);
                next.push(e);
            }
        }
        current = next;
    }
    let full = full_mask(n);
    let n_bit = bit(n as u8);
    let mut trees: Vec<Tree> = current
        .into_iter()
        .map(|edges| {
            let internal = edges.into_iter().filter(|m| {
                let c = m.count_ones() as usize;
                c >= 2 && c <= n - 2
            });
            let canonical = internal.map(|m| if m & n_bit != 0 { full & !m } else { m });
            Tree::from_masks_unchecked(n, canonical)
        })
        .collect();
    trees.sort();
    Ok(trees)
}

/// Planar binary trees of `o`, via triangulations of the polygon whose sides
/// carry the labels of `o` in order. The diagonal between vertices `i < j`
/// cuts off the leaves `o[i..j]`.
pub fn enumerate_planar(o: &Ordering) -> Vec<Tree> {
    let n = o.n();
    let labels = o.labels();
    let arc = |i: usize, j: usize| labels[i..j].iter().fold(0u32, |m, &l| m | bit(l));
    let mut diag_sets: Vec<Vec<u32>> = Vec::new();
    triangulations(0, n - 1, &mut |_, _| true, &mut Vec::new(), &mut |d| {
        diag_sets.push(d.to_vec())
    });
    let full = full_mask(n);
    let n_bit = bit(n as u8);
    let mut trees: Vec<Tree> = diag_sets
        .into_iter()
        .map(|diags| {
            let masks = diags.into_iter().map(|packed| {
                let (i, j) = ((packed >> 8) as usize, (packed & 0xff) as usize);
                let m = arc(i, j);
                if m & n_bit != 0 {
                    full & !m
                } else {
                    m
                }
            });
            Tree::from_masks_unchecked(n, masks)
        })
        .collect();
    trees.sort();
    trees
}

/// Enumerates triangulations of the sub-polygon on vertices `lo..=hi`
/// (closed by the chord `lo-hi`). Diagonals are packed as `(i << 8) | j`.
fn triangulations(
    lo: usize,
    hi: usize,
    allowed: &mut dyn FnMut(usize, usize) -> bool,
    acc: &mut Vec<u32>,
    emit: &mut dyn FnMut(&[u32]),
) {
    // Work list of pending sub-polygons, processed depth first.
    fn go(
        pending: &mut Vec<(usize, usize)>,
        allowed: &mut dyn FnMut(usize, usize) -> bool,
        acc: &mut Vec<u32>,
        emit: &mut dyn FnMut(&[u32]),
    ) {
        let Some((lo, hi)) = pending.pop() else {
            emit(acc);
            return;
        };
        if hi - lo < 2 {
            go(pending, allowed, acc, emit);
            pending.push((lo, hi));
            return;
        }
        for apex in lo + 1..hi {
            let left_ok = apex - lo < 2 || allowed(lo, apex);
            let right_ok = hi - apex < 2 || allowed(apex, hi);
            if !(left_ok && right_ok) {
                continue;
            }
            let mark = acc.len();
            if apex - lo >= 2 {
                acc.push(((lo as u32) << 8) | apex as u32);
            }
            if hi - apex >= 2 {
                acc.push(((apex as u32) << 8) | hi as u32);
            }
            pending.push((lo, apex));
            pending.push((apex, hi));
            go(pending, allowed, acc, emit);
            pending.pop();
            pending.pop();
            acc.truncate(mark);
        }
        pending.push((lo, hi));
    }
    let mut pending = vec![(lo, hi)];
    go(&mut pending, allowed, acc, emit);
}

/// All trees with exactly one degree-4 vertex, sorted.
pub fn enumerate_codim1(n: usize) -> Result<Vec<DegenerateTree>> {
    check_range("n", n, MIN_N, CODIM1_MAX_N)?;
    let mut set = BTreeSet::new();
    for t in enumerate_all_trees(n)? {
        for skip in 0..t.splits.len() {
            let splits: Vec<Split> = t
                .splits
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, s)| *s)
                .collect();
            set.insert(DegenerateTree { n, splits });
        }
    }
    Ok(set.into_iter().collect())
}

/// Unordered adjacent pairs shared by the two cyclic orders.
pub fn common_cherries(a: &Ordering, b: &Ordering) -> Result<Vec<(u8, u8)>> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch(a.n(), b.n()));
    }
    Ok(common_adjacent_pairs(a.labels(), b.labels()))
}

pub(crate) fn common_adjacent_pairs(a: &[u8], b: &[u8]) -> Vec<(u8, u8)> {
    let pa = crate::ordering::adjacent_pairs(a);
    let pb = crate::ordering::adjacent_pairs(b);
    pa.into_iter().filter(|p| pb.binary_search(p).is_ok()).collect()
}

/// The link of the origin for `n = 5`: degenerate trees as vertices, binary
/// trees as edges joining the two degenerate trees they contract to.
#[derive(Clone, Debug)]
pub struct LinkGraph {
    pub vertices: Vec<DegenerateTree>,
    /// `(u, v, tree)` with `u < v`.
    pub edges: Vec<(usize, usize, Tree)>,
}

impl LinkGraph {
    pub fn build(n: usize) -> Result<Self> {
        if n != 5 {
            return Err(Error::OutOfRange {
                what: "n",
                value: n,
                min: 5,
                max: 5,
            });
        }
        let vertices = enumerate_codim1(n)?;
        let index: HashMap<&DegenerateTree, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut edges = Vec::new();
        for t in enumerate_all_trees(n)? {
            let ends: Vec<usize> = t
                .splits
                .iter()
                .map(|s| {
                    let d = DegenerateTree {
                        n,
                        splits: t.splits.iter().filter(|x| *x != s).copied().collect(),
                    };
                    index[&d]
                })
                .collect();
            let (u, v) = (ends[0].min(ends[1]), ends[0].max(ends[1]));
            edges.push((u, v, t));
        }
        Ok(LinkGraph { vertices, edges })
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(u, v, _) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency().iter().map(Vec::len).collect()
    }

    /// Length of the shortest cycle, by BFS from every vertex.
    pub fn girth(&self) -> Option<usize> {
        let adj = self.adjacency();
        let mut best: Option<usize> = None;
        for root in 0..adj.len() {
            let mut dist = vec![usize::MAX; adj.len()];
            let mut parent = vec![usize::MAX; adj.len()];
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        let cycle = dist[u] + dist[v] + 1;
                        best = Some(best.map_or(cycle, |b| b.min(cycle)));
                    }
                }
            }
        }
        best
    }

    /// Indices of the edges whose trees are planar for `o`.
    pub fn planar_edges(&self, o: &Ordering) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, (_, _, t))| t.is_planar(o).unwrap_or(false))
            .map(|(i, _)| i)
            .collect()
    }

    /// Whether the given edges form one simple cycle; returns its vertices.
    pub fn edges_form_cycle(&self, edge_ids: &[usize]) -> Option<Vec<usize>> {
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        for &e in edge_ids {
            let (u, v, _) = &self.edges[e];
            adj.entry(*u).or_default().push(*v);
            adj.entry(*v).or_default().push(*u);
        }
        if adj.values().any(|n| n.len() != 2) || adj.len() != edge_ids.len() {
            return None;
        }
        let start = *adj.keys().min()?;
        let mut cycle = vec![start];
        let mut prev = start;
        let mut cur = adj[&start][0];
        while cur != start {
            cycle.push(cur);
            let next = if adj[&cur][0] == prev { adj[&cur][1] } else { adj[&cur][0] };
            prev = cur;
            cur = next;
        }
        (cycle.len() == adj.len()).then_some(cycle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordering {
        s.parse().unwrap()
    }

    fn double_factorial(k: usize) -> usize {
        (1..=k).rev().step_by(2).product()
    }

    fn catalan(m: usize) -> usize {
        (0..m).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
    }

    #[test]
    fn split_canonical_side_excludes_n() {
        let s = Split::new(5, &[3, 4, 5]).unwrap();
        assert_eq!(s.members(), vec![1, 2]);
        assert!(Split::new(5, &[1]).is_err());
        assert!(Split::new(5, &[1, 2, 3, 4]).is_err());
        assert!(Split::new(5, &[1, 1]).is_err());
        assert!(Split::new(5, &[1, 6]).is_err());
    }

    #[test]
    fn tree_counts() {
        for n in 4..=7 {
            assert_eq!(enumerate_all_trees(n).unwrap().len(), double_factorial(2 * n - 5));
        }
        assert!(enumerate_all_trees(3).is_err());
        assert!(enumerate_all_trees(9).is_err());
    }

    #[test]
    fn all_trees_are_valid_and_distinct() {
        for n in 4..=7 {
            let trees = enumerate_all_trees(n).unwrap();
            for t in &trees {
                Tree::from_splits(n, t.splits().iter().copied()).unwrap();
            }
            assert!(trees.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn planarity_examples() {
        let t12 = Tree::parse(4, "{1,2}").unwrap();
        let t23 = Tree::parse(4, "{2,3}").unwrap();
        let o = ord("1,3,2,4");
        assert!(!t12.is_planar(&o).unwrap());
        assert!(t23.is_planar(&o).unwrap());
        assert!(t12.is_planar(&ord("1,2,3,4,5")).is_err());
    }

    #[test]
    fn planar_enumeration() {
        let p4 = enumerate_planar(&ord("1,2,3,4"));
        assert_eq!(
            p4,
            vec![Tree::parse(4, "{1,2}").unwrap(), Tree::parse(4, "{2,3}").unwrap()]
        );
        assert_eq!(enumerate_planar(&ord("1,2,3,4,5")).len(), 5);
        assert_eq!(enumerate_planar(&ord("1,2,3,4,5,6")).len(), 14);
    }

    #[test]
    fn planar_matches_filtered_oracle() {
        for n in 4..=7 {
            let all = enumerate_all_trees(n).unwrap();
            let cat = crate::ordering::OrderingCatalog::enumerate(n).unwrap();
            for o in cat.iter().step_by(7) {
                let oracle: Vec<Tree> =
                    all.iter().filter(|t| t.is_planar(o).unwrap()).cloned().collect();
                let planar = enumerate_planar(o);
                assert_eq!(planar.len(), catalan(n - 2));
                assert_eq!(planar, oracle, "ordering {o}");
            }
        }
    }

    #[test]
    fn codim1_examples() {
        let d5 = enumerate_codim1(5).unwrap();
        assert_eq!(d5.len(), 10);
        let b = DegenerateTree::from_splits(5, [Split::new(5, &[1, 2]).unwrap()]).unwrap();
        assert!(d5.contains(&b));
        assert_eq!(b.to_string(), "(12)(345)");
        assert_eq!(enumerate_codim1(4).unwrap().len(), 1);
        assert!(enumerate_codim1(8).is_err());
    }

    #[test]
    fn smoothing_examples() {
        let b = DegenerateTree::from_splits(5, [Split::new(5, &[1, 2]).unwrap()]).unwrap();
        let expected: Vec<Tree> = ["{1,2}|{3,4}", "{1,2}|{4,5}", "{1,2}|{3,5}"]
            .iter()
            .map(|s| Tree::parse(5, s).unwrap())
            .sorted()
            .collect();
        assert_eq!(b.smoothings().unwrap(), expected);

        let a = DegenerateTree::from_splits(5, [Split::new(5, &[3, 4]).unwrap()]).unwrap();
        let sa: BTreeSet<Tree> = a.smoothings().unwrap().into_iter().collect();
        let sb: BTreeSet<Tree> = b.smoothings().unwrap().into_iter().collect();
        let shared: Vec<&Tree> = sa.intersection(&sb).collect();
        assert_eq!(shared, vec![&Tree::parse(5, "{1,2}|{3,4}").unwrap()]);

        for d in enumerate_codim1(5).unwrap() {
            assert_eq!(d.smoothings().unwrap().len(), 3);
        }
        for d in enumerate_codim1(7).unwrap() {
            assert_eq!(d.smoothings().unwrap().len(), 3);
        }
    }

    #[test]
    fn petersen_graph() {
        let g = LinkGraph::build(5).unwrap();
        assert_eq!(g.vertices.len(), 10);
        assert_eq!(g.edges.len(), 15);
        assert!(g.degrees().iter().all(|&d| d == 3));
        assert_eq!(g.girth(), Some(5));
        let c1 = g.edges_form_cycle(&g.planar_edges(&ord("1,2,3,4,5"))).unwrap();
        let c2 = g.edges_form_cycle(&g.planar_edges(&ord("1,3,5,2,4"))).unwrap();
        assert_eq!((c1.len(), c2.len()), (5, 5));
        assert!(c1.iter().all(|v| !c2.contains(v)));
        assert!(LinkGraph::build(6).is_err());
    }

    #[test]
    fn cherry_examples() {
        let id = ord("1,2,3,4,5,6");
        assert_eq!(common_cherries(&id, &ord("1,3,6,5,2,4")).unwrap(), vec![(5, 6)]);
        assert_eq!(
            common_cherries(&id, &ord("1,3,5,6,4,2")).unwrap(),
            vec![(1, 2), (5, 6)]
        );
        assert_eq!(common_cherries(&id, &id).unwrap().len(), 6);
        assert!(common_cherries(&id, &ord("1,2,3,4,5")).is_err());
    }

    #[test]
    fn tree_text_round_trip() {
        let t = Tree::parse(5, "{4,5}|{1,2}").unwrap();
        assert_eq!(t.to_string(), "{1,2}|{1,2,3}");
        assert_eq!(Tree::parse(5, &t.to_string()).unwrap(), t);
        assert!(Tree::parse(5, "{1,2}|{2,3}").is_err());
        assert!(Tree::parse(5, "{1,2}").is_err());
    }
}
