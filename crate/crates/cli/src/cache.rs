//! On-disk cache of intersection matrices keyed by `(n, kind)`.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use tropgr_core::matrix::MatrixKind;
use tropgr_core::{BinaryMatrix, IntersectionMatrix, Result};

pub const CACHE_ENV: &str = "TROPGR_CACHE_DIR";
const DEFAULT_DIR: &str = "tropgr-cache";

/// Directory from the flag or the environment, if either is set.
pub fn configured_dir(flag: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf).or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
}

pub fn cache_dir(flag: Option<&Path>) -> PathBuf {
    configured_dir(flag).unwrap_or_else(|| PathBuf::from(DEFAULT_DIR))
}

pub fn cache_path(dir: &Path, n: usize, kind: MatrixKind) -> PathBuf {
    dir.join(format!("n{n}-{}.txt", kind.name()))
}

pub fn write_counts(m: &IntersectionMatrix, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    m.write_to(BufWriter::new(File::create(path)?))
}

pub fn write_binary(m: &BinaryMatrix, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    m.write_to(BufWriter::new(File::create(path)?))
}

/// Loads the cached binary matrix, or builds and stores it. A stale or
/// corrupt cache file is rebuilt rather than trusted.
pub fn binary_matrix(dir: &Path, n: usize) -> Result<BinaryMatrix> {
    let path = cache_path(dir, n, MatrixKind::Binary);
    if let Ok(f) = File::open(&path) {
        if let Ok(m) = BinaryMatrix::read_from(BufReader::new(f)) {
            if m.n() == n {
                return Ok(m);
            }
        }
    }
    let m = BinaryMatrix::build(n)?;
    write_binary(&m, &path)?;
    Ok(m)
}
