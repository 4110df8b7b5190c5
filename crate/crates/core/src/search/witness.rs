//! Clique witnesses, their file format, and independent verification.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intersection::count_dp;
use crate::linalg::bareiss_rank;
use crate::matrix::BinaryMatrix;
use crate::ordering::{Ordering, OrderingCatalog};

/// Row set R and column set C of a permutation submatrix, stored as the
/// matched pairs `(row, col)` of catalog indices sorted by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueWitness {
    pub n: usize,
    pub pairs: Vec<(usize, usize)>,
    /// Set when the search stopped on its budget before proving optimality.
    pub lower_bound: bool,
    pub nodes: u64,
}

impl CliqueWitness {
    pub fn new(n: usize, mut pairs: Vec<(usize, usize)>, lower_bound: bool, nodes: u64) -> Self {
        pairs.sort_unstable();
        CliqueWitness {
            n,
            pairs,
            lower_bound,
            nodes,
        }
    }

    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    pub fn rows(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn cols(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.pairs.iter().map(|p| p.1).collect();
        c.sort_unstable();
        c
    }

    /// `permutation[i]` is the position in `cols()` matched with `rows()[i]`.
    pub fn permutation(&self) -> Vec<usize> {
        let cols = self.cols();
        self.pairs
            .iter()
            .map(|&(_, c)| cols.binary_search(&c).expect("column present"))
            .collect()
    }

    /// Checks that `M[R][C]` has exactly one 1 per row and column, at the
    /// recorded pairs.
    pub fn is_permutation_in(&self, m: &BinaryMatrix) -> bool {
        let cols = self.cols();
        let mut rows = self.rows();
        rows.dedup();
        if rows.len() != self.size() || cols.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        self.pairs
            .iter()
            .all(|&(r, c)| cols.iter().all(|&l| m.get(r, l) == (l == c)))
    }

    pub fn to_file(&self, catalog: &OrderingCatalog) -> WitnessFile {
        WitnessFile {
            schema: 1,
            n: self.n,
            size: self.size(),
            rows: self.rows().iter().map(|&i| catalog.get(i).to_string()).collect(),
            cols: self.cols().iter().map(|&i| catalog.get(i).to_string()).collect(),
            permutation: self.permutation(),
            lower_bound: self.lower_bound,
            nodes: self.nodes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub schema: u32,
    pub n: usize,
    pub size: usize,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub permutation: Vec<usize>,
    pub lower_bound: bool,
    pub nodes: u64,
}

impl WitnessFile {
    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn orderings(&self) -> Result<(Vec<Ordering>, Vec<Ordering>)> {
        let parse = |v: &[String]| v.iter().map(|s| s.parse()).collect::<Result<Vec<Ordering>>>();
        Ok((parse(&self.rows)?, parse(&self.cols)?))
    }
}

/// Result of recomputing `I(a, b)` on `A x B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub counts: Vec<Vec<u64>>,
    /// Whether each row and each column holds exactly one non-zero entry.
    pub permutation_diagonal: bool,
    /// For a permutation-diagonal matrix, the column of each row's entry.
    pub permutation: Option<Vec<usize>>,
    /// Permutation-diagonal with every non-zero entry equal to 1.
    pub permutation_identity: bool,
    pub rank: usize,
}

pub fn verify_witness(a: &[Ordering], b: &[Ordering]) -> Result<WitnessReport> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(a.len(), b.len()));
    }
    let counts: Vec<Vec<u64>> = a
        .iter()
        .map(|x| b.iter().map(|y| count_dp(x, y)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let k = a.len();
    let mut permutation = Vec::with_capacity(k);
    let mut col_hits = vec![0usize; k];
    for row in &counts {
        let nz: Vec<usize> = (0..k).filter(|&j| row[j] != 0).collect();
        for &j in &nz {
            col_hits[j] += 1;
        }
        if nz.len() == 1 {
            permutation.push(nz[0]);
        }
    }
    let permutation_diagonal = permutation.len() == k && col_hits.iter().all(|&c| c == 1);
    let permutation_identity = permutation_diagonal && counts.iter().flatten().all(|&v| v <= 1);
    let as_int: Vec<Vec<i128>> = counts.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    Ok(WitnessReport {
        rank: bareiss_rank(&as_int),
        permutation: permutation_diagonal.then_some(permutation),
        permutation_diagonal,
        permutation_identity,
        counts,
    })
}

/// Verifies a search result against recomputed intersection numbers.
pub fn verify_clique_witness(w: &CliqueWitness, catalog: &OrderingCatalog) -> Result<WitnessReport> {
    let a: Vec<Ordering> = w.rows().iter().map(|&i| catalog.get(i).clone()).collect();
    let b: Vec<Ordering> = w.cols().iter().map(|&i| catalog.get(i).clone()).collect();
    verify_witness(&a, &b)
}
