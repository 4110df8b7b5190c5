//! Maximum clique by branch and bound over an explicit stack.
//!
//! Branching follows Bron-Kerbosch with a pivot of maximum degree inside the
//! candidate set; a greedy colouring of the candidates bounds the clique
//! size reachable from each node. Because the search state is a plain stack
//! of frames it can be paused after any node and serialized.

use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct Frame {
    r: Vec<u32>,
    p: Bitset,
    branch: Vec<u32>,
    next: usize,
}

/// Serialized form of one stack frame; `p` is the candidate bitset in the
/// hex row encoding of the binary matrix file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameRecord {
    pub r: Vec<u32>,
    pub p: String,
    pub branch: Vec<u32>,
    pub next: usize,
}

impl Frame {
    fn record(&self) -> FrameRecord {
        FrameRecord {
            r: self.r.clone(),
            p: self.p.to_hex(),
            branch: self.branch.clone(),
            next: self.next,
        }
    }

    fn from_record(rec: &FrameRecord, nv: usize) -> Result<Frame> {
        let p = Bitset::from_hex(&rec.p, nv).ok_or_else(|| Error::Format("bad frame bitset".into()))?;
        if rec.next > rec.branch.len() || rec.r.iter().chain(&rec.branch).any(|&v| v as usize >= nv) {
            return Err(Error::Format("frame refers to unknown vertices".into()));
        }
        Ok(Frame {
            r: rec.r.clone(),
            p,
            branch: rec.branch.clone(),
            next: rec.next,
        })
    }
}

/// In deterministic mode ties with the incumbent are still explored so the
/// lexicographically smallest maximum clique (as a sorted vertex list) wins.
pub(crate) struct CliqueEngine<'a> {
    adj: &'a [Bitset],
    stack: Vec<Frame>,
    best: Vec<u32>,
    floor: usize,
    deterministic: bool,
    shared: Option<(&'a AtomicUsize, usize)>,
    nodes: u64,
}

impl<'a> CliqueEngine<'a> {
    pub fn new(adj: &'a [Bitset], deterministic: bool) -> Self {
        CliqueEngine {
            adj,
            stack: Vec::new(),
            best: Vec::new(),
            floor: 0,
            deterministic,
            shared: None,
            nodes: 0,
        }
    }

    /// Shares the incumbent size with other engines; `offset` is added to
    /// local clique sizes before publishing.
    pub fn with_shared(mut self, shared: &'a AtomicUsize, offset: usize) -> Self {
        self.shared = Some((shared, offset));
        self
    }

    /// A clique of this size is already known elsewhere.
    pub fn with_floor(mut self, floor: usize) -> Self {
        self.floor = floor;
        self
    }

    pub fn start(&mut self, candidates: Bitset) {
        self.stack.clear();
        self.expand(Vec::new(), candidates);
    }

    pub fn start_all(&mut self) {
        self.start(Bitset::full(self.adj.len()));
    }

    pub fn resume(&mut self, frames: &[FrameRecord], best: Vec<u32>) -> Result<()> {
        let nv = self.adj.len();
        self.stack = frames.iter().map(|f| Frame::from_record(f, nv)).collect::<Result<_>>()?;
        self.best = best;
        self.best.sort_unstable();
        Ok(())
    }

    pub fn frames(&self) -> Vec<FrameRecord> {
        self.stack.iter().map(Frame::record).collect()
    }

    pub fn best(&self) -> &[u32] {
        &self.best
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    fn target(&self) -> usize {
        let shared = self
            .shared
            .map_or(0, |(s, off)| s.load(AtomicOrdering::Relaxed).saturating_sub(off));
        self.best.len().max(self.floor).max(shared)
    }

    /// Smallest clique size still worth reaching.
    fn needed(&self) -> usize {
        let t = self.target();
        if self.deterministic {
            t.max(1)
        } else {
            t + 1
        }
    }

    fn leaf(&mut self, r: &[u32]) {
        let size = r.len();
        if size == 0 || size < self.needed() {
            return;
        }
        let mut sorted = r.to_vec();
        sorted.sort_unstable();
        let better = size > self.best.len() || (size == self.best.len() && sorted < self.best);
        if better {
            self.best = sorted;
            if let Some((s, off)) = self.shared {
                s.fetch_max(size + off, AtomicOrdering::Relaxed);
            }
        }
    }

    fn colour_bound(&self, p: &Bitset, cap: usize) -> usize {
        let mut rest = p.clone();
        let mut colours = 0;
        while !rest.is_empty() {
            colours += 1;
            if colours >= cap {
                return colours;
            }
            let mut q = rest.clone();
            while let Some(v) = q.first() {
                rest.clear(v);
                q = q.and_not(&self.adj[v]);
                q.clear(v);
            }
        }
        colours
    }

    fn expand(&mut self, r: Vec<u32>, p: Bitset) {
        self.nodes += 1;
        if p.is_empty() {
            self.leaf(&r);
            return;
        }
        let need = self.needed();
        if r.len() + p.count() < need {
            return;
        }
        let want = need.saturating_sub(r.len());
        if self.colour_bound(&p, want) < want {
            return;
        }
        let pivot = p
            .iter()
            .max_by_key(|&u| (p.and_count(&self.adj[u]), std::cmp::Reverse(u)))
            .expect("non-empty candidates");
        let branch: Vec<u32> = p.and_not(&self.adj[pivot]).iter().map(|v| v as u32).collect();
        self.stack.push(Frame { r, p, branch, next: 0 });
    }

    /// Runs until the search is complete or `budget` total nodes have been
    /// expanded; returns whether the search finished.
    pub fn run(&mut self, budget: Option<u64>) -> bool {
        loop {
            if budget.is_some_and(|b| self.nodes >= b) {
                return self.stack.is_empty();
            }
            let need = self.needed();
            let Some(top) = self.stack.last_mut() else {
                return true;
            };
            if top.next >= top.branch.len() || top.r.len() + top.p.count() < need {
                self.stack.pop();
                continue;
            }
            let v = top.branch[top.next] as usize;
            top.next += 1;
            let child_p = top.p.and(&self.adj[v]);
            top.p.clear(v);
            let mut child_r = top.r.clone();
            child_r.push(v as u32);
            self.expand(child_r, child_p);
        }
    }
}

/// Exact maximum clique of a graph given by its adjacency rows.
pub fn max_clique(adj: &[Bitset], deterministic: bool) -> Vec<u32> {
    let mut engine = CliqueEngine::new(adj, deterministic);
    engine.start_all();
    engine.run(None);
    engine.best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adjacency(nv: usize, edges: &[(usize, usize)]) -> Vec<Bitset> {
        let mut adj = vec![Bitset::new(nv); nv];
        for &(a, b) in edges {
            adj[a].set(b);
            adj[b].set(a);
        }
        adj
    }

    fn brute(adj: &[Bitset]) -> usize {
        let nv = adj.len();
        (0u32..1 << nv)
            .filter(|&mask| {
                (0..nv).all(|a| mask >> a & 1 == 0 || (0..nv).all(|b| a == b || mask >> b & 1 == 0 || adj[a].get(b)))
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn small_graphs() {
        let tri = adjacency(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        assert_eq!(max_clique(&tri, true), vec![0, 1, 2]);
        let empty = adjacency(3, &[]);
        assert_eq!(max_clique(&empty, true), vec![0]);
    }

    #[test]
    fn lexicographic_tie_break() {
        // two triangles {1,2,3} and {0,4,5}
        let g = adjacency(6, &[(1, 2), (2, 3), (1, 3), (0, 4), (4, 5), (0, 5)]);
        assert_eq!(max_clique(&g, true), vec![0, 4, 5]);
    }

    #[test]
    fn random_graphs_match_brute_force() {
        let mut rng = crate::rng::Lcg64::new(11);
        for _ in 0..60 {
            let nv = 12;
            let mut edges = Vec::new();
            for a in 0..nv {
                for b in a + 1..nv {
                    if rng.unit_f64() < 0.55 {
                        edges.push((a, b));
                    }
                }
            }
            let adj = adjacency(nv, &edges);
            assert_eq!(max_clique(&adj, false).len(), brute(&adj));
            assert_eq!(max_clique(&adj, true).len(), brute(&adj));
        }
    }

    #[test]
    fn pause_and_resume() {
        let mut rng = crate::rng::Lcg64::new(5);
        let nv = 40;
        let mut edges = Vec::new();
        for a in 0..nv {
            for b in a + 1..nv {
                if rng.unit_f64() < 0.6 {
                    edges.push((a, b));
                }
            }
        }
        let adj = adjacency(nv, &edges);
        let full = max_clique(&adj, true);
        let mut engine = CliqueEngine::new(&adj, true);
        engine.start_all();
        let mut budget = 0;
        loop {
            budget += 7;
            if engine.run(Some(budget)) {
                break;
            }
            let frames = engine.frames();
            let best = engine.best().to_vec();
            let nodes = engine.nodes;
            engine = CliqueEngine::new(&adj, true);
            engine.resume(&frames, best).unwrap();
            engine.nodes = nodes;
        }
        assert_eq!(engine.best(), &full[..]);
    }
}
