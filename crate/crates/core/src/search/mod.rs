//! Diagonal-degree searches: the largest permutation submatrix of the
//! binary intersection matrix, and the symmetric variant with equal row and
//! column sets.
//!
//! The exact search fixes the row of the identity ordering (catalog index 0)
//! and splits on its partner column `j`: the remaining rows must vanish on
//! column `j` and the remaining columns must vanish on row 0. Each such
//! subproblem is a max-clique problem on its own compatibility graph.

mod clique;
mod graph;
mod heuristic;
mod witness;

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::atomic::AtomicUsize;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::error::{check_range, Error, Result};
use crate::matrix::BinaryMatrix;
use crate::ordering::MIN_N;

pub use clique::{max_clique, FrameRecord};
pub use graph::CompatibilityGraph;
pub use heuristic::local_search;
pub use witness::{verify_clique_witness, verify_witness, CliqueWitness, WitnessFile, WitnessReport};

use clique::CliqueEngine;

pub const SYMMETRIC_MAX_N: usize = 7;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Stop after this many branch nodes and report a lower bound.
    pub node_budget: Option<u64>,
    /// Return the lexicographically smallest maximum witness.
    pub deterministic: bool,
    /// Search one subproblem per orbit of the dihedral relabelings fixing
    /// the identity ordering.
    pub orbit_reduction: bool,
    /// Local-search chains run before the exact phase. Their witness only
    /// raises the incumbent; a row-0 witness of equal size still wins the
    /// deterministic tie-break since its first pair is `(0, j)`.
    pub heuristic_chains: usize,
    pub heuristic_moves: u64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_budget: None,
            deterministic: true,
            orbit_reduction: false,
            heuristic_chains: 0,
            heuristic_moves: 0,
            seed: 0,
        }
    }
}

/// Columns `j` of row 0 holding a 1, one per subproblem.
pub fn row_fixing_columns(m: &BinaryMatrix) -> Vec<usize> {
    m.row(0).iter().collect()
}

/// Row and column index sets of the subproblem pairing row 0 with column `j`.
pub fn subproblem(m: &BinaryMatrix, j: usize) -> (Vec<usize>, Vec<usize>) {
    let rows = (0..m.size()).filter(|&k| !m.get(k, j)).collect();
    let cols = (0..m.size()).filter(|&l| !m.get(0, l)).collect();
    (rows, cols)
}

fn subproblem_graph(m: &BinaryMatrix, j: usize) -> CompatibilityGraph {
    let (rows, cols) = subproblem(m, j);
    CompatibilityGraph::from_submatrix(m.rows(), &rows, &cols)
}

fn lift(g: &CompatibilityGraph, j: usize, clique: &[u32]) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = clique.iter().map(|&v| g.vertex(v as usize)).collect();
    pairs.push((0, j));
    pairs.sort_unstable();
    pairs
}

fn better(candidate: &[(usize, usize)], incumbent: &[(usize, usize)]) -> bool {
    candidate.len() > incumbent.len() || (candidate.len() == incumbent.len() && candidate < incumbent)
}

/// Orbits of the row-0 partner columns under the 2n dihedral relabelings,
/// each sorted, listed by smallest member.
pub fn subproblem_orbits(m: &BinaryMatrix) -> Result<Vec<Vec<usize>>> {
    let n = m.n();
    let catalog = m.catalog();
    let rotation: Vec<u8> = (1..=n as u8).map(|k| k % n as u8 + 1).collect();
    let reflection: Vec<u8> = (1..=n as u8).map(|k| n as u8 + 1 - k).collect();
    let mut group: Vec<Vec<u8>> = Vec::new();
    let mut g: Vec<u8> = (1..=n as u8).collect();
    for _ in 0..n {
        group.push(g.clone());
        group.push(g.iter().map(|&l| reflection[l as usize - 1]).collect());
        g = g.iter().map(|&l| rotation[l as usize - 1]).collect();
    }
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    for j in row_fixing_columns(m) {
        if seen.contains(&j) {
            continue;
        }
        let mut orbit = BTreeSet::new();
        for g in &group {
            let image = catalog.get(j).relabel(g)?;
            let idx = catalog
                .index_of(&image)
                .ok_or_else(|| Error::InvalidOrdering(image.to_string()))?;
            orbit.insert(idx);
        }
        seen.extend(orbit.iter().copied());
        orbits.push(orbit.into_iter().collect());
    }
    Ok(orbits)
}

fn plan(m: &BinaryMatrix, opts: &SearchOptions) -> Result<Vec<usize>> {
    if opts.orbit_reduction {
        Ok(subproblem_orbits(m)?.into_iter().map(|o| o[0]).collect())
    } else {
        Ok(row_fixing_columns(m))
    }
}

fn heuristic_start(m: &BinaryMatrix, opts: &SearchOptions) -> Vec<(usize, usize)> {
    if opts.heuristic_chains == 0 || opts.heuristic_moves == 0 {
        return Vec::new();
    }
    local_search(m, opts.heuristic_chains, opts.heuristic_moves, opts.seed)
}

/// Largest permutation submatrix of `m`. Without a node budget the result
/// is an exact maximum; with one it is the best found, flagged as a lower
/// bound unless the search happened to finish.
///
/// Subproblems run in parallel. Only the non-deterministic mode shares the
/// incumbent between them, so in deterministic mode the witness and the
/// node count do not depend on scheduling.
pub fn max_permutation_submatrix(m: &BinaryMatrix, opts: &SearchOptions) -> Result<CliqueWitness> {
    check_range("n", m.n(), MIN_N, crate::matrix::BINARY_MAX_N)?;
    if let Some(budget) = opts.node_budget {
        let mut search = BudgetedSearch::new(m, opts)?;
        search.run(budget)?;
        return Ok(search.witness());
    }
    let columns = plan(m, opts)?;
    let start = heuristic_start(m, opts);
    let shared = AtomicUsize::new(start.len());
    let results: Vec<(Vec<(usize, usize)>, u64)> = columns
        .par_iter()
        .map(|&j| {
            let g = subproblem_graph(m, j);
            let engine = CliqueEngine::new(g.adjacency(), opts.deterministic);
            let mut engine = if opts.deterministic {
                engine.with_floor(start.len().saturating_sub(1))
            } else {
                engine.with_shared(&shared, 1)
            };
            engine.start_all();
            engine.run(None);
            (lift(&g, j, engine.best()), engine.nodes())
        })
        .collect();
    let mut best = start;
    let mut nodes = 0;
    for (pairs, k) in results {
        nodes += k;
        if better(&pairs, &best) {
            best = pairs;
        }
    }
    Ok(CliqueWitness::new(m.n(), best, false, nodes))
}

/// Frontier of a paused budgeted search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub schema: u32,
    pub n: usize,
    pub deterministic: bool,
    /// Partner columns of row 0 in search order.
    pub plan: Vec<usize>,
    /// Index into `plan` of the subproblem in progress.
    pub position: usize,
    /// Clique stack of that subproblem, bottom first.
    pub frames: Vec<FrameRecord>,
    pub best: Vec<(usize, usize)>,
    pub nodes: u64,
}

impl Checkpoint {
    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string(self)? + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// Sequential row-fixed search that can stop on a node budget and resume
/// from a checkpoint.
pub struct BudgetedSearch<'m> {
    m: &'m BinaryMatrix,
    deterministic: bool,
    plan: Vec<usize>,
    position: usize,
    frames: Option<Vec<FrameRecord>>,
    best: Vec<(usize, usize)>,
    nodes: u64,
}

impl<'m> BudgetedSearch<'m> {
    pub fn new(m: &'m BinaryMatrix, opts: &SearchOptions) -> Result<Self> {
        Ok(BudgetedSearch {
            m,
            deterministic: opts.deterministic,
            plan: plan(m, opts)?,
            position: 0,
            frames: None,
            best: heuristic_start(m, opts),
            nodes: 0,
        })
    }

    pub fn resume(m: &'m BinaryMatrix, cp: &Checkpoint) -> Result<Self> {
        if cp.n != m.n() {
            return Err(Error::SizeMismatch(cp.n, m.n()));
        }
        if cp.position > cp.plan.len() || cp.plan.iter().any(|&j| j >= m.size() || !m.get(0, j)) {
            return Err(Error::Format("checkpoint plan does not match the matrix".into()));
        }
        Ok(BudgetedSearch {
            m,
            deterministic: cp.deterministic,
            plan: cp.plan.clone(),
            position: cp.position,
            frames: (!cp.frames.is_empty()).then(|| cp.frames.clone()),
            best: cp.best.clone(),
            nodes: cp.nodes,
        })
    }

    pub fn is_done(&self) -> bool {
        self.position >= self.plan.len()
    }

    /// Expands at most `budget` further nodes; returns whether the whole
    /// search is finished.
    pub fn run(&mut self, budget: u64) -> Result<bool> {
        let mut left = budget;
        while !self.is_done() {
            let j = self.plan[self.position];
            let g = subproblem_graph(self.m, j);
            let floor = self.best.len().saturating_sub(1);
            let mut engine = CliqueEngine::new(g.adjacency(), self.deterministic).with_floor(floor);
            match self.frames.take() {
                Some(frames) => engine.resume(&frames, Vec::new())?,
                None => engine.start_all(),
            }
            let finished = engine.run(Some(left));
            self.nodes += engine.nodes();
            left = left.saturating_sub(engine.nodes());
            if !engine.best().is_empty() {
                let pairs = lift(&g, j, engine.best());
                if better(&pairs, &self.best) {
                    self.best = pairs;
                }
            }
            if !finished {
                self.frames = Some(engine.frames());
                return Ok(false);
            }
            self.position += 1;
        }
        Ok(true)
    }

    pub fn witness(&self) -> CliqueWitness {
        CliqueWitness::new(self.m.n(), self.best.clone(), !self.is_done(), self.nodes)
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            schema: 1,
            n: self.m.n(),
            deterministic: self.deterministic,
            plan: self.plan.clone(),
            position: self.position,
            frames: self.frames.clone().unwrap_or_default(),
            best: self.best.clone(),
            nodes: self.nodes,
        }
    }
}

/// Largest set of orderings with pairwise vanishing intersection numbers,
/// as sorted catalog indices (lexicographically smallest among maxima).
pub fn symmetric_degree(m: &BinaryMatrix) -> Result<Vec<usize>> {
    check_range("n", m.n(), MIN_N, SYMMETRIC_MAX_N)?;
    let size = m.size();
    let full = Bitset::full(size);
    let adj: Vec<Bitset> = (0..size)
        .map(|a| {
            let mut z = full.and_not(m.row(a));
            z.clear(a);
            z
        })
        .collect();
    Ok(max_clique(&adj, true).into_iter().map(|v| v as usize).collect())
}
