//! KLT ordering sets, their block-diagonal partition, and block densities.
//!
//! With `m = ceil((n-3)/2) + 1`, the two families are
//! `A = (1, w(2..n-2), n-1, n)` and `B = (1, g(2..m), n, g(m+1..n-2), n-1)`
//! for permutations `w`, `g` of `{2..n-2}`. The raw label sequences are kept
//! next to the canonical orderings because block membership depends on which
//! slots the labels occupy.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytics::super_catalan;
use crate::error::{check_range, Error, Result};
use crate::intersection::fast_nonzero_raw;
use crate::ordering::{Ordering, MAX_LABELS};

pub const KLT_MIN_N: usize = 5;
/// Largest `n` for which the full sets are materialized (`(n-3)! = 40320`).
pub const KLT_MAX_N: usize = 11;
pub const BLOCK_DENSITY_EXACT_MAX_N: usize = 8;

/// An ordering together with the slot layout it was defined by.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KltOrdering {
    pub raw: Vec<u8>,
    pub canonical: Ordering,
}

impl KltOrdering {
    fn new(raw: Vec<u8>) -> Self {
        let canonical = Ordering::canonicalize_unchecked(&raw);
        KltOrdering { raw, canonical }
    }
}

#[derive(Clone, Debug)]
pub struct KltSets {
    pub n: usize,
    pub m: usize,
    pub set_a: Vec<KltOrdering>,
    pub set_b: Vec<KltOrdering>,
}

/// `ceil((n-3)/2) + 1`.
pub fn klt_m(n: usize) -> usize {
    (n - 3).div_ceil(2) + 1
}

/// `floor((n-3)/2) + 1`.
pub fn klt_m_bar(n: usize) -> usize {
    (n - 3) / 2 + 1
}

/// Block size `d = ceil((n-3)/2)! * floor((n-3)/2)!`.
pub fn block_size(n: usize) -> usize {
    let f = |k: usize| (1..=k).product::<usize>();
    f((n - 3).div_ceil(2)) * f((n - 3) / 2)
}

fn a_raw(n: usize, middle: &[u8]) -> Vec<u8> {
    let mut v = Vec::with_capacity(n);
    v.push(1);
    v.extend_from_slice(middle);
    v.push(n as u8 - 1);
    v.push(n as u8);
    v
}

fn b_raw(n: usize, m: usize, gamma: &[u8]) -> Vec<u8> {
    let mut v = Vec::with_capacity(n);
    v.push(1);
    v.extend_from_slice(&gamma[..m - 1]);
    v.push(n as u8);
    v.extend_from_slice(&gamma[m - 1..]);
    v.push(n as u8 - 1);
    v
}

/// Both KLT families, each listed by permutations of `{2..n-2}` in
/// lexicographic order.
pub fn klt_sets(n: usize) -> Result<KltSets> {
    check_range("n", n, KLT_MIN_N, KLT_MAX_N)?;
    let m = klt_m(n);
    let perms: Vec<Vec<u8>> = (2..=n as u8 - 2).permutations(n - 3).collect();
    Ok(KltSets {
        n,
        m,
        set_a: perms.iter().map(|w| KltOrdering::new(a_raw(n, w))).collect(),
        set_b: perms.iter().map(|g| KltOrdering::new(b_raw(n, m, g))).collect(),
    })
}

fn check_klt_a(a: &[u8]) -> Result<usize> {
    let n = a.len();
    let ok = (KLT_MIN_N..=MAX_LABELS).contains(&n)
        && a[0] == 1
        && a[n - 2] as usize == n - 1
        && a[n - 1] as usize == n
        && a[1..n - 2].iter().sorted().copied().eq(2..=n as u8 - 2);
    if ok {
        Ok(n)
    } else {
        Err(Error::NotKltForm(format!("{a:?} is not (1, w, n-1, n)")))
    }
}

fn check_klt_b(b: &[u8]) -> Result<usize> {
    let n = b.len();
    if !(KLT_MIN_N..=MAX_LABELS).contains(&n) {
        return Err(Error::NotKltForm(format!("{b:?}: n out of range")));
    }
    let m = klt_m(n);
    let gamma: Vec<u8> = b[1..m].iter().chain(&b[m + 1..n - 1]).copied().collect();
    let ok = b[0] == 1
        && b[m] as usize == n
        && b[n - 1] as usize == n - 1
        && gamma.iter().sorted().copied().eq(2..=n as u8 - 2);
    if ok {
        Ok(n)
    } else {
        Err(Error::NotKltForm(format!("{b:?} is not (1, g(2..m), n, g(m+1..n-2), n-1)")))
    }
}

/// The sufficient vanishing condition: `{w(2..m)}` meets `{g(m+1..n-2)}`.
pub fn vanishing_predicate(a: &[u8], b: &[u8]) -> Result<bool> {
    let n = check_klt_a(a)?;
    let nb = check_klt_b(b)?;
    if n != nb {
        return Err(Error::SizeMismatch(n, nb));
    }
    let m = klt_m(n);
    let head = &a[1..m];
    let tail = &b[m + 1..n - 1];
    Ok(head.iter().any(|l| tail.contains(l)))
}

#[derive(Clone, Debug, Serialize)]
pub struct KltBlock {
    #[serde(rename = "H")]
    pub h: Vec<u8>,
    #[serde(rename = "G")]
    pub g: Vec<u8>,
    #[serde(rename = "A")]
    pub a: Vec<KltOrdering>,
    #[serde(rename = "B")]
    pub b: Vec<KltOrdering>,
}

#[derive(Clone, Debug)]
pub struct BlockPartition {
    pub n: usize,
    pub d: usize,
    pub blocks: Vec<KltBlock>,
}

/// Blocks indexed by the subsets `H` of `{2..n-2}` with `|H| = m - 1`
/// (lexicographic); `G` is the complement. `A_I = (1, H, G, n-1, n)` and
/// `B_I = (1, H, n, G, n-1)` over all internal orders of `H` and `G`.
pub fn block_partition(n: usize) -> Result<BlockPartition> {
    check_range("n", n, KLT_MIN_N, KLT_MAX_N)?;
    let m = klt_m(n);
    let labels: Vec<u8> = (2..=n as u8 - 2).collect();
    let blocks = labels
        .iter()
        .copied()
        .combinations(m - 1)
        .map(|h| {
            let g: Vec<u8> = labels.iter().copied().filter(|l| !h.contains(l)).collect();
            let mut a = Vec::new();
            let mut b = Vec::new();
            for hp in h.iter().copied().permutations(h.len()) {
                for gp in g.iter().copied().permutations(g.len()) {
                    let gamma: Vec<u8> = hp.iter().chain(&gp).copied().collect();
                    a.push(KltOrdering::new(a_raw(n, &gamma)));
                    b.push(KltOrdering::new(b_raw(n, m, &gamma)));
                }
            }
            KltBlock { h, g, a, b }
        })
        .collect();
    Ok(BlockPartition {
        n,
        d: block_size(n),
        blocks,
    })
}

impl BlockPartition {
    /// Nonzero count of the `A_I x B_J` rectangle, by cherry pruning.
    pub fn nonzeros_between(&self, i: usize, j: usize) -> usize {
        let (bi, bj) = (&self.blocks[i], &self.blocks[j]);
        bi.a
            .par_iter()
            .map(|a| {
                bj.b
                    .iter()
                    .filter(|b| fast_nonzero_raw(a.canonical.labels(), b.canonical.labels()))
                    .count()
            })
            .sum()
    }

    /// Index of the block whose `A` contains `(1, 2, ..., n)`.
    pub fn canonical_block(&self) -> usize {
        let id: Vec<u8> = (1..=self.n as u8).collect();
        self.blocks
            .iter()
            .position(|blk| blk.a.iter().any(|a| a.raw == id))
            .expect("identity ordering lies in some block")
    }

    pub fn block_density(&self, i: usize) -> BigRational {
        BigRational::new(
            BigInt::from(self.nonzeros_between(i, i)),
            BigInt::from(self.d * self.d),
        )
    }
}

/// Nonzero fraction of the block containing the identity ordering,
/// by enumeration.
pub fn block_density_exact(n: usize) -> Result<BigRational> {
    check_range("n", n, KLT_MIN_N, BLOCK_DENSITY_EXACT_MAX_N)?;
    let p = block_partition(n)?;
    Ok(p.block_density(p.canonical_block()))
}

/// `4 S_{m-1} S_{mbar-1} / ((m-1)! (mbar-1)!)`.
///
/// Only valid for `n >= 7`: for smaller `n` one of the two parts has fewer
/// than three labels, its reflection is not a distinct ordering, and the
/// factor of two per part over-counts (the value exceeds 1).
pub fn block_density_formula(n: usize) -> Result<BigRational> {
    if n < 7 {
        return Err(Error::OutOfRange {
            what: "n (the closed form double-counts reflections of parts with fewer than 3 labels)",
            value: n,
            min: 7,
            max: usize::MAX,
        });
    }
    let (m, mb) = (klt_m(n), klt_m_bar(n));
    let fact = |k: usize| (1..=k).fold(BigInt::from(1), |a, i| a * i);
    Ok(BigRational::new(
        BigInt::from(4) * super_catalan(m - 1)? * super_catalan(mb - 1)?,
        fact(m - 1) * fact(mb - 1),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intersection::count_dp;

    fn ord(s: &str) -> Ordering {
        s.parse().unwrap()
    }

    #[test]
    fn n5_sets() {
        let k = klt_sets(5).unwrap();
        let a: Vec<Ordering> = k.set_a.iter().map(|x| x.canonical.clone()).collect();
        let b: Vec<Vec<u8>> = k.set_b.iter().map(|x| x.raw.clone()).collect();
        assert_eq!(a, vec![ord("1,2,3,4,5"), ord("1,3,2,4,5")]);
        assert_eq!(b, vec![vec![1, 2, 5, 3, 4], vec![1, 3, 5, 2, 4]]);
        assert!(klt_sets(4).is_err());
    }

    #[test]
    fn n6_sets() {
        let k = klt_sets(6).unwrap();
        assert_eq!(k.m, 3);
        assert_eq!((k.set_a.len(), k.set_b.len()), (6, 6));
        assert!(k.set_b.iter().all(|b| b.raw[3] == 6 && b.raw[5] == 5));
    }

    #[test]
    fn predicate_examples() {
        assert!(vanishing_predicate(&[1, 2, 3, 4, 5], &[1, 3, 5, 2, 4]).unwrap());
        assert!(!vanishing_predicate(&[1, 2, 3, 4, 5], &[1, 2, 5, 3, 4]).unwrap());
        assert!(vanishing_predicate(&[1, 2, 4, 3, 5], &[1, 3, 5, 2, 4]).is_err());
        assert!(vanishing_predicate(&[1, 2, 3, 4, 5], &[1, 3, 4, 2, 5]).is_err());
    }

    #[test]
    fn predicate_sound_up_to_7() {
        for n in 5..=7 {
            let k = klt_sets(n).unwrap();
            for a in &k.set_a {
                for b in &k.set_b {
                    if vanishing_predicate(&a.raw, &b.raw).unwrap() {
                        assert_eq!(count_dp(&a.canonical, &b.canonical).unwrap(), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn block_shapes() {
        for (n, d, count) in [(5, 1, 2), (6, 2, 3), (7, 4, 6), (8, 12, 10)] {
            let p = block_partition(n).unwrap();
            assert_eq!(p.d, d);
            assert_eq!(p.blocks.len(), count);
            assert!(p.blocks.iter().all(|b| b.a.len() == d && b.b.len() == d));
        }
    }

    #[test]
    fn formula_values() {
        assert_eq!(block_density_formula(7).unwrap(), BigRational::from_integer(1.into()));
        assert_eq!(
            block_density_formula(11).unwrap(),
            BigRational::new(484.into(), 576.into())
        );
        assert!(block_density_formula(6).is_err());
    }

    #[test]
    fn exact_density_small() {
        assert_eq!(block_density_exact(5).unwrap(), BigRational::from_integer(1.into()));
        assert_eq!(block_density_exact(7).unwrap(), block_density_formula(7).unwrap());
    }
}
