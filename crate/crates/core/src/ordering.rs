//! Cyclic orderings of `{1..n}` modulo rotation and reflection.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};

/// Smallest number of labels for which orderings are defined.
pub const MIN_N: usize = 4;
/// Largest label count accepted by [`Ordering`]; splits are `u32` masks.
pub const MAX_LABELS: usize = 32;
/// Largest `n` for which [`OrderingCatalog::enumerate`] is allowed
/// (`9!/2 = 181440` orderings).
pub const CATALOG_MAX_N: usize = 10;

/// Canonical representative of a dihedral class of cyclic orderings.
///
/// The representative starts with label 1 and is lexicographically no larger
/// than its reflection (also rotated to start with 1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Ordering {
    labels: Vec<u8>,
}

impl Ordering {
    /// Canonicalizes any permutation of `{1..n}`, `n >= 4`.
    pub fn canonicalize(seq: &[u8]) -> Result<Self> {
        validate_permutation(seq)?;
        Ok(Self::canonicalize_unchecked(seq))
    }

    pub(crate) fn canonicalize_unchecked(seq: &[u8]) -> Self {
        let n = seq.len();
        let start = seq.iter().position(|&l| l == 1).expect("label 1 present");
        let forward: Vec<u8> = (0..n).map(|k| seq[(start + k) % n]).collect();
        // reflection of the rotated sequence, still starting with 1
        let backward: Vec<u8> = (0..n).map(|k| forward[(n - k) % n]).collect();
        Ordering {
            labels: forward.min(backward),
        }
    }

    /// The identity ordering `(1, 2, ..., n)`.
    pub fn identity(n: usize) -> Result<Self> {
        check_range("n", n, MIN_N, MAX_LABELS)?;
        Ok(Ordering {
            labels: (1..=n as u8).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Applies `perm` (label `k` goes to `perm[k-1]`) and canonicalizes.
    pub fn relabel(&self, perm: &[u8]) -> Result<Self> {
        if perm.len() != self.n() {
            return Err(Error::SizeMismatch(perm.len(), self.n()));
        }
        validate_bijection(perm)?;
        let mapped: Vec<u8> = self.labels.iter().map(|&l| perm[l as usize - 1]).collect();
        Ok(Self::canonicalize_unchecked(&mapped))
    }

    /// Position of each label in the cycle, indexed by `label - 1`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.n()];
        for (i, &l) in self.labels.iter().enumerate() {
            pos[l as usize - 1] = i;
        }
        pos
    }

    /// Unordered adjacent pairs `(min, max)` of the cycle, sorted.
    pub fn adjacent_pairs(&self) -> Vec<(u8, u8)> {
        adjacent_pairs(&self.labels)
    }
}

pub(crate) fn adjacent_pairs(cycle: &[u8]) -> Vec<(u8, u8)> {
    let n = cycle.len();
    let mut pairs: Vec<(u8, u8)> = (0..n)
        .map(|i| {
            let (a, b) = (cycle[i], cycle[(i + 1) % n]);
            (a.min(b), a.max(b))
        })
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

fn validate_bijection(seq: &[u8]) -> Result<()> {
    let n = seq.len();
    let mut seen = vec![false; n];
    for &l in seq {
        let l = l as usize;
        if l == 0 || l > n || seen[l - 1] {
            return Err(Error::InvalidPermutation(format!("{seq:?}")));
        }
        seen[l - 1] = true;
    }
    Ok(())
}

fn validate_permutation(seq: &[u8]) -> Result<()> {
    check_range("n", seq.len(), MIN_N, MAX_LABELS)?;
    validate_bijection(seq).map_err(|_| Error::InvalidOrdering(format!("{seq:?} is not a permutation")))
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.labels.iter().join(","))
    }
}

impl fmt::Debug for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Ordering {
    type Err = Error;

    /// Parses `"1,3,5,2,4"`; surrounding parentheses and spaces are allowed,
    /// and any rotation or reflection is accepted.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let labels = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u8>()
                    .map_err(|_| Error::InvalidOrdering(format!("bad label {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        Ordering::canonicalize(&labels)
    }
}

impl TryFrom<String> for Ordering {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Ordering> for String {
    fn from(o: Ordering) -> String {
        o.to_string()
    }
}

/// All canonical orderings for one `n`, in lexicographic order.
///
/// The position of an ordering in this list is its row/column index in every
/// matrix built by this crate.
#[derive(Clone, Debug)]
pub struct OrderingCatalog {
    n: usize,
    orderings: Vec<Ordering>,
    index: HashMap<Ordering, usize>,
}

impl PartialEq for OrderingCatalog {
    fn eq(&self, other: &Self) -> bool {
        self.orderings() == other.orderings()
    }
}

impl Eq for OrderingCatalog {}

impl OrderingCatalog {
    pub fn enumerate(n: usize) -> Result<Self> {
        check_range("n", n, MIN_N, CATALOG_MAX_N)?;
        // permutations of a sorted input come out in lexicographic order
        let orderings: Vec<Ordering> = (2..=n as u8)
            .permutations(n - 1)
            .filter(|p| p[0] < p[n - 2])
            .map(|p| {
                let mut labels = Vec::with_capacity(n);
                labels.push(1);
                labels.extend(p);
                Ordering { labels }
            })
            .collect();
        let index = orderings
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), i))
            .collect();
        Ok(OrderingCatalog {
            n,
            orderings,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.orderings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orderings.is_empty()
    }

    pub fn orderings(&self) -> &[Ordering] {
        &self.orderings
    }

    pub fn get(&self, i: usize) -> &Ordering {
        &self.orderings[i]
    }

    pub fn index_of(&self, o: &Ordering) -> Option<usize> {
        self.index.get(o).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Ordering> {
        self.orderings.iter()
    }
}
