//! Full intersection matrices over the ordering catalog, and their on-disk
//! form.
//!
//! File layout: one JSON header line
//! `{"schema":1,"n":..,"kind":"counts"|"binary","catalog":[..]}` followed by
//! one line per row: comma-separated integers for counts, or the hex
//! encoding of the row bitset for binary matrices (see [`Bitset::to_hex`]).

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::error::{check_range, Error, Result};
use crate::intersection::{count_dp_raw, fast_nonzero_raw};
use crate::ordering::{Ordering, OrderingCatalog, MIN_N};

pub const COUNTS_MAX_N: usize = 7;
pub const BINARY_MAX_N: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Counts,
    Binary,
}

impl MatrixKind {
    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Counts => "counts",
            MatrixKind::Binary => "binary",
        }
    }
}

#[derive(Clone, Debug)]
pub struct IntersectionMatrix {
    catalog: OrderingCatalog,
    entries: Vec<u32>,
}

impl IntersectionMatrix {
    /// All `I(a, b)` via the interval DP; rows are computed in parallel.
    pub fn build(n: usize) -> Result<Self> {
        check_range("n", n, MIN_N, COUNTS_MAX_N)?;
        let catalog = OrderingCatalog::enumerate(n)?;
        let size = catalog.len();
        let positions: Vec<Vec<usize>> = catalog.iter().map(Ordering::positions).collect();
        let rows: Vec<Vec<u32>> = (0..size)
            .into_par_iter()
            .map(|i| {
                let a = catalog.get(i).labels();
                (0..size).map(|j| count_dp_raw(a, &positions[j]) as u32).collect()
            })
            .collect();
        Ok(IntersectionMatrix {
            catalog,
            entries: rows.concat(),
        })
    }

    pub fn n(&self) -> usize {
        self.catalog.n()
    }

    pub fn size(&self) -> usize {
        self.catalog.len()
    }

    pub fn catalog(&self) -> &OrderingCatalog {
        &self.catalog
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.size() + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        let s = self.size();
        &self.entries[i * s..(i + 1) * s]
    }

    pub fn to_binary(&self) -> BinaryMatrix {
        let size = self.size();
        let rows = (0..size)
            .map(|i| {
                let mut b = Bitset::new(size);
                for (j, &v) in self.row(i).iter().enumerate() {
                    if v != 0 {
                        b.set(j);
                    }
                }
                b
            })
            .collect();
        BinaryMatrix {
            catalog: self.catalog.clone(),
            rows,
        }
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        write_header(&mut w, &self.catalog, MatrixKind::Counts)?;
        for i in 0..self.size() {
            let line: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let catalog = read_header(&mut lines, MatrixKind::Counts)?;
        let size = catalog.len();
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            let line = lines
                .next()
                .ok_or_else(|| Error::Format(format!("missing row {i}")))??;
            let row = line
                .split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Format(format!("bad entry {t:?}"))))
                .collect::<Result<Vec<u32>>>()?;
            if row.len() != size {
                return Err(Error::Format(format!("row {i} has {} entries", row.len())));
            }
            entries.extend(row);
        }
        Ok(IntersectionMatrix { catalog, entries })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMatrix {
    catalog: OrderingCatalog,
    rows: Vec<Bitset>,
}

impl BinaryMatrix {
    /// `I(a, b) != 0` via cherry pruning; symmetric, so only the upper
    /// triangle is evaluated.
    pub fn build(n: usize) -> Result<Self> {
        check_range("n", n, MIN_N, BINARY_MAX_N)?;
        let catalog = OrderingCatalog::enumerate(n)?;
        let size = catalog.len();
        let upper: Vec<Vec<bool>> = (0..size)
            .into_par_iter()
            .map(|i| {
                let a = catalog.get(i).labels();
                (i..size)
                    .map(|j| fast_nonzero_raw(a, catalog.get(j).labels()))
                    .collect()
            })
            .collect();
        let mut rows = vec![Bitset::new(size); size];
        for (i, row) in upper.iter().enumerate() {
            for (k, &nz) in row.iter().enumerate() {
                if nz {
                    rows[i].set(i + k);
                    rows[i + k].set(i);
                }
            }
        }
        Ok(BinaryMatrix { catalog, rows })
    }

    /// Builds from explicit rows over an arbitrary index set; used for
    /// submatrices and tests. `catalog` is only carried along.
    pub fn from_rows(catalog: OrderingCatalog, rows: Vec<Bitset>) -> Result<Self> {
        let size = catalog.len();
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(Error::Format("row count or width does not match the catalog".into()));
        }
        Ok(BinaryMatrix { catalog, rows })
    }

    pub fn n(&self) -> usize {
        self.catalog.n()
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn catalog(&self) -> &OrderingCatalog {
        &self.catalog
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn row(&self, i: usize) -> &Bitset {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Bitset] {
        &self.rows
    }

    pub fn row_count(&self, i: usize) -> usize {
        self.rows[i].count()
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        write_header(&mut w, &self.catalog, MatrixKind::Binary)?;
        for r in &self.rows {
            writeln!(w, "{}", r.to_hex())?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let catalog = read_header(&mut lines, MatrixKind::Binary)?;
        let size = catalog.len();
        let mut rows = Vec::with_capacity(size);
        for i in 0..size {
            let line = lines
                .next()
                .ok_or_else(|| Error::Format(format!("missing row {i}")))??;
            rows.push(
                Bitset::from_hex(&line, size)
                    .ok_or_else(|| Error::Format(format!("bad hex in row {i}")))?,
            );
        }
        Ok(BinaryMatrix { catalog, rows })
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    schema: u32,
    n: usize,
    kind: MatrixKind,
    catalog: Vec<Ordering>,
}

fn write_header<W: Write>(w: &mut W, catalog: &OrderingCatalog, kind: MatrixKind) -> Result<()> {
    let header = Header {
        schema: 1,
        n: catalog.n(),
        kind,
        catalog: catalog.orderings().to_vec(),
    };
    serde_json::to_writer(&mut *w, &header)?;
    writeln!(w)?;
    Ok(())
}

fn read_header<I>(lines: &mut I, kind: MatrixKind) -> Result<OrderingCatalog>
where
    I: Iterator<Item = std::io::Result<String>>,
{
    let first = lines.next().ok_or_else(|| Error::Format("empty file".into()))??;
    let header: Header = serde_json::from_str(&first)?;
    if header.schema != 1 {
        return Err(Error::Format(format!("unsupported schema {}", header.schema)));
    }
    if header.kind != kind {
        return Err(Error::Format(format!(
            "expected a {} matrix, file holds {}",
            kind.name(),
            header.kind.name()
        )));
    }
    let catalog = OrderingCatalog::enumerate(header.n)?;
    if header.catalog != catalog.orderings() {
        return Err(Error::Format("catalog in header does not match the canonical catalog".into()));
    }
    Ok(catalog)
}

/// Value multiset of the row of `(1, 2, ..., n)`: value -> multiplicity.
pub fn row_profile(n: usize) -> Result<BTreeMap<u32, usize>> {
    check_range("n", n, MIN_N, COUNTS_MAX_N)?;
    let catalog = OrderingCatalog::enumerate(n)?;
    let id = catalog.get(0).labels();
    let mut profile = BTreeMap::new();
    for o in catalog.iter() {
        *profile.entry(count_dp_raw(id, &o.positions()) as u32).or_insert(0) += 1;
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::catalan_u64;

    #[test]
    fn counts_matrix_invariants() {
        for n in 4..=6 {
            let m = IntersectionMatrix::build(n).unwrap();
            let diag = catalan_u64(n - 2) as u32;
            let mut first: Vec<u32> = m.row(0).to_vec();
            first.sort_unstable();
            for i in 0..m.size() {
                assert_eq!(m.get(i, i), diag);
                let mut r = m.row(i).to_vec();
                assert!(r.iter().all(|&v| v <= diag));
                r.sort_unstable();
                assert_eq!(r, first);
                for j in 0..m.size() {
                    assert_eq!(m.get(i, j), m.get(j, i));
                }
            }
        }
    }

    #[test]
    fn binary_matches_counts() {
        for n in 4..=6 {
            let counts = IntersectionMatrix::build(n).unwrap();
            assert_eq!(BinaryMatrix::build(n).unwrap(), counts.to_binary());
        }
    }

    #[test]
    fn row_nonzeros() {
        for (n, s) in [(5, 11), (6, 45)] {
            let b = BinaryMatrix::build(n).unwrap();
            assert!((0..b.size()).all(|i| b.row_count(i) == s));
        }
    }

    #[test]
    fn profiles() {
        let p5 = row_profile(5).unwrap();
        assert_eq!(p5.get(&0), Some(&1));
        assert_eq!(p5.get(&5), Some(&1));
        assert_eq!(p5.values().sum::<usize>(), 12);
        assert_eq!(row_profile(6).unwrap().get(&0), Some(&15));
    }

    #[test]
    fn persistence_round_trip() {
        let m = IntersectionMatrix::build(5).unwrap();
        let mut buf = Vec::new();
        m.write_to(&mut buf).unwrap();
        let back = IntersectionMatrix::read_from(&buf[..]).unwrap();
        assert_eq!(back.entries, m.entries);

        let b = m.to_binary();
        let mut buf = Vec::new();
        b.write_to(&mut buf).unwrap();
        assert_eq!(BinaryMatrix::read_from(&buf[..]).unwrap(), b);
        // kind mismatch is rejected
        assert!(IntersectionMatrix::read_from(&buf[..]).is_err());
    }

    #[test]
    fn loader_rejects_tampered_catalog() {
        let m = IntersectionMatrix::build(4).unwrap();
        let mut buf = Vec::new();
        m.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap().replacen("1,2,3,4", "1,2,4,3", 1);
        assert!(IntersectionMatrix::read_from(text.as_bytes()).is_err());
    }
}
