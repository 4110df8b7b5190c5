//! The ONES compatibility graph of a binary matrix.

use rayon::prelude::*;

use crate::bitset::Bitset;
use crate::matrix::BinaryMatrix;

/// Vertices are the 1-entries `(row, col)` of a (sub)matrix in lexicographic
/// order. Two entries are adjacent when together they form a 2x2
/// permutation submatrix: distinct rows, distinct columns, and both cross
/// entries zero.
#[derive(Clone, Debug)]
pub struct CompatibilityGraph {
    vertices: Vec<(usize, usize)>,
    adjacency: Vec<Bitset>,
}

impl CompatibilityGraph {
    pub fn build(m: &BinaryMatrix) -> Self {
        let all: Vec<usize> = (0..m.size()).collect();
        Self::from_submatrix(m.rows(), &all, &all)
    }

    /// Graph of the submatrix on `row_ids x col_ids` (both ascending). Vertex
    /// labels keep the original row and column indices.
    pub fn from_submatrix(rows: &[Bitset], row_ids: &[usize], col_ids: &[usize]) -> Self {
        let mut vertices = Vec::new();
        let mut by_row: Vec<Vec<u32>> = Vec::with_capacity(row_ids.len());
        for &i in row_ids {
            let mut ids = Vec::new();
            for &j in col_ids {
                if rows[i].get(j) {
                    ids.push(vertices.len() as u32);
                    vertices.push((i, j));
                }
            }
            by_row.push(ids);
        }
        let nv = vertices.len();
        let adjacency: Vec<Bitset> = (0..nv)
            .into_par_iter()
            .map(|u| {
                let (i, j) = vertices[u];
                let mut nb = Bitset::new(nv);
                for (ri, &k) in row_ids.iter().enumerate() {
                    if k == i || rows[k].get(j) {
                        continue;
                    }
                    for &v in &by_row[ri] {
                        let l = vertices[v as usize].1;
                        if l != j && !rows[i].get(l) {
                            nb.set(v as usize);
                        }
                    }
                }
                nb
            })
            .collect();
        CompatibilityGraph { vertices, adjacency }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Bitset::count).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> &[(usize, usize)] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> (usize, usize) {
        self.vertices[v]
    }

    pub fn adjacency(&self) -> &[Bitset] {
        &self.adjacency
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].get(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(rows: &[&[u8]]) -> CompatibilityGraph {
        let n = rows.len();
        let bits: Vec<Bitset> = rows
            .iter()
            .map(|r| {
                let mut b = Bitset::new(n);
                for (j, &x) in r.iter().enumerate() {
                    if x == 1 {
                        b.set(j);
                    }
                }
                b
            })
            .collect();
        let ids: Vec<usize> = (0..n).collect();
        CompatibilityGraph::from_submatrix(&bits, &ids, &ids)
    }

    #[test]
    fn identity_two() {
        let g = graph(&[&[1, 0], &[0, 1]]);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn all_ones_has_no_edges() {
        let g = graph(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn antidiagonal_pair() {
        let g = graph(&[&[0, 1], &[1, 0]]);
        assert_eq!(g.vertices(), &[(0, 1), (1, 0)]);
        assert!(g.are_adjacent(0, 1));
    }

    #[test]
    fn n5_vertex_count() {
        let m = BinaryMatrix::build(5).unwrap();
        let g = CompatibilityGraph::build(&m);
        assert_eq!(g.vertex_count(), 12 * 11);
        for u in 0..g.vertex_count() {
            assert!(!g.are_adjacent(u, u));
            for v in g.adjacency()[u].iter() {
                assert!(g.are_adjacent(v, u));
                let (a, b) = (g.vertex(u), g.vertex(v));
                assert!(a.0 != b.0 && a.1 != b.1);
            }
        }
    }
}
