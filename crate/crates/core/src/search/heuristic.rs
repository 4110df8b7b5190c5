//! Randomized local search for large permutation submatrices.
//!
//! Works directly on the binary matrix: the state is a set of matched pairs,
//! and a pair `(r, c)` can join when `M[r][c] = 1` while row `r` is zero on
//! every chosen column and column `c` is zero on every chosen row. Moves are
//! additions, plateau swaps with a short tabu list, and random drops.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::bitset::Bitset;
use crate::matrix::BinaryMatrix;
use crate::rng::Lcg64;

const TABU_TENURE: u64 = 7;
const STALL_LIMIT: u64 = 2_000;

struct Zeros {
    rows: Vec<Bitset>,
    cols: Vec<Bitset>,
}

impl Zeros {
    fn new(m: &BinaryMatrix) -> Zeros {
        let size = m.size();
        let full = Bitset::full(size);
        let rows: Vec<Bitset> = m.rows().iter().map(|r| full.and_not(r)).collect();
        let cols = (0..size)
            .map(|c| (0..size).filter(|&r| !m.get(r, c)).fold(Bitset::new(size), |mut b, r| {
                b.set(r);
                b
            }))
            .collect();
        Zeros { rows, cols }
    }

    /// Rows and columns still free when every pair except `skip` is kept.
    fn allowed(&self, pairs: &[(usize, usize)], skip: Option<usize>, size: usize) -> (Bitset, Bitset) {
        let mut ar = Bitset::full(size);
        let mut ac = Bitset::full(size);
        for (i, &(r, c)) in pairs.iter().enumerate() {
            if Some(i) != skip {
                ar.and_assign(&self.cols[c]);
                ac.and_assign(&self.rows[r]);
            }
        }
        (ar, ac)
    }
}

fn addable(m: &BinaryMatrix, ar: &Bitset, ac: &Bitset) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in ar.iter() {
        for c in m.row(r).and(ac).iter() {
            out.push((r, c));
        }
    }
    out
}

fn pick<T: Copy>(rng: &mut Lcg64, v: &[T]) -> T {
    v[rng.next_u32() as usize % v.len()]
}

fn chain(m: &BinaryMatrix, zeros: &Zeros, moves: u64, seed: u64) -> Vec<(usize, usize)> {
    let size = m.size();
    let mut rng = Lcg64::new(seed);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut best: Vec<(usize, usize)> = Vec::new();
    let mut tabu: HashMap<(usize, usize), u64> = HashMap::new();
    let mut last_gain = 0;
    for step in 0..moves {
        let (ar, ac) = zeros.allowed(&pairs, None, size);
        let adds = addable(m, &ar, &ac);
        if !adds.is_empty() {
            pairs.push(pick(&mut rng, &adds));
            if pairs.len() > best.len() {
                best = pairs.clone();
                best.sort_unstable();
                last_gain = step;
            }
            continue;
        }
        if step - last_gain > STALL_LIMIT {
            // restart from a random half of the current set
            let keep = pairs.len() / 2;
            while pairs.len() > keep {
                let i = rng.next_u32() as usize % pairs.len();
                pairs.swap_remove(i);
            }
            last_gain = step;
            continue;
        }
        let mut swaps = Vec::new();
        for i in 0..pairs.len() {
            let (ar, ac) = zeros.allowed(&pairs, Some(i), size);
            for p in addable(m, &ar, &ac) {
                if p != pairs[i] && tabu.get(&p).is_none_or(|&t| t <= step) {
                    swaps.push((i, p));
                }
            }
        }
        if swaps.is_empty() {
            if !pairs.is_empty() {
                let i = rng.next_u32() as usize % pairs.len();
                let out = pairs.swap_remove(i);
                tabu.insert(out, step + TABU_TENURE);
            }
            continue;
        }
        let (i, p) = pick(&mut rng, &swaps);
        let out = std::mem::replace(&mut pairs[i], p);
        tabu.insert(out, step + TABU_TENURE);
    }
    best
}

/// Best set of pairs over `chains` independent runs of `moves` steps. The
/// result depends only on the arguments, not on the thread count.
pub fn local_search(m: &BinaryMatrix, chains: usize, moves: u64, seed: u64) -> Vec<(usize, usize)> {
    let zeros = Zeros::new(m);
    (0..chains as u64)
        .into_par_iter()
        .map(|k| chain(m, &zeros, moves, seed.wrapping_add(k.wrapping_mul(0x9e37_79b9_7f4a_7c15))))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Vec::new(), |acc, p| if p.len() > acc.len() || (p.len() == acc.len() && p < acc) { p } else { acc })
}
