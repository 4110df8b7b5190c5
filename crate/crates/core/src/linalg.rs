//! Exact rank by fraction-free elimination, and numerical singular values.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rank of an integer matrix by Bareiss elimination. Every division is
/// exact, so `T` only needs exact ring division (e.g. `BigInt`, `i128` for
/// small inputs).
pub fn bareiss_rank<T>(rows: &[Vec<T>]) -> usize
where
    T: Clone + Zero + One + PartialEq + std::ops::Sub<Output = T> + std::ops::Mul<Output = T> + std::ops::Div<Output = T>,
{
    let mut a: Vec<Vec<T>> = rows.to_vec();
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let ncols = a[0].len();
    let mut prev = T::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == m {
            break;
        }
        let Some(p) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..m {
            for c in col + 1..ncols {
                let v = a[rank][col].clone() * a[r][c].clone() - a[r][col].clone() * a[rank][c].clone();
                a[r][c] = v / prev.clone();
            }
            a[r][col] = T::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Exact rank of a rational matrix: each row is scaled by the lcm of its
/// denominators, then eliminated fraction-free.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter().map(|v| (v * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    bareiss_rank(&ints)
}

/// Singular values in decreasing order.
pub fn singular_values(rows: &[Vec<f64>]) -> Vec<f64> {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let n = rows[0].len();
    let mat = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
    let mut sv: Vec<f64> = mat.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values with `sigma_k / sigma_1 >= tol`.
pub fn numerical_rank(sv: &[f64], tol: f64) -> usize {
    match sv.first() {
        Some(&s1) if s1 > 0.0 => sv.iter().take_while(|&&s| s / s1 >= tol).count(),
        _ => 0,
    }
}

/// `|a - b| <= tol * max(|a|, |b|)`, treating two exact zeros as equal.
pub fn relative_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}
