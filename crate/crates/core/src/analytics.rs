//! Super Catalan numbers, Legendre values at 3, matrix densities and polygon
//! dissection counts.
//!
//! Table values are exact; floating point is used only for the asymptotic
//! reference curves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::klt;

pub fn catalan(m: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..m {
        c = c * (2 * (2 * i + 1)) / (i + 2);
    }
    c
}

/// Catalan numbers that fit in a `u64` (`m <= 35`).
pub fn catalan_u64(m: usize) -> u64 {
    let mut c: u128 = 1;
    for i in 0..m as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    u64::try_from(c).expect("Catalan number overflows u64")
}

/// `S_1..=S_max` by the three-term recursion.
pub fn super_catalan_table(max: usize) -> Result<Vec<BigInt>> {
    check_range("r", max, 1, usize::MAX)?;
    let mut s = vec![BigInt::one(), BigInt::one()];
    for r in 3..=max {
        let num = BigInt::from(3 * (2 * r - 3)) * &s[r - 2] - BigInt::from(r as i64 - 3) * &s[r - 3];
        let (q, rem) = num.div_rem(&BigInt::from(r));
        assert!(rem.is_zero(), "super Catalan recursion is not exact at r = {r}");
        s.push(q);
    }
    s.truncate(max);
    Ok(s)
}

/// `S_r`: number of dissections of a convex `(r+1)`-gon by non-crossing
/// diagonals. `S_1 = S_2 = 1`.
pub fn super_catalan(r: usize) -> Result<BigInt> {
    Ok(super_catalan_table(r)?.pop().expect("non-empty table"))
}

/// `P_l(3)` from `P_0 = 1`, `P_1 = 3` and the three-term recursion.
pub fn legendre_at_3(l: usize) -> BigRational {
    let three = BigRational::from_integer(3.into());
    let (mut prev, mut cur) = (BigRational::one(), three.clone());
    if l == 0 {
        return prev;
    }
    for k in 1..l {
        let k_r = BigRational::from_integer(k.into());
        let next = (BigRational::from_integer((2 * k + 1).into()) * &three * &cur - &k_r * &prev)
            / BigRational::from_integer((k + 1).into());
        prev = cur;
        cur = next;
    }
    cur
}

/// `(3 P_{r-1}(3) - P_{r-2}(3)) / (4r)`, defined for `r >= 2`.
pub fn super_catalan_via_legendre(r: usize) -> Result<BigRational> {
    check_range("r", r, 2, usize::MAX)?;
    let three = BigRational::from_integer(3.into());
    Ok((three * legendre_at_3(r - 1) - legendre_at_3(r - 2))
        / BigRational::from_integer((4 * r).into()))
}

/// Leading large-`l` behaviour of `P_l(x)` for `x > 1`. Reference curve only.
pub fn legendre_asymptotic(l: f64, x: f64) -> f64 {
    let y = (1.0 - 1.0 / (x * x)).sqrt();
    (1.0 + y).powf((l + 1.0) / 2.0)
        / (1.0 - y).powf(l / 2.0)
        / (2.0 * std::f64::consts::PI * l * y).sqrt()
}

/// Exponent constant of the full-matrix density asymptote,
/// `1 + ln(3 + sqrt 8)`.
pub fn density_constant() -> f64 {
    1.0 + (3.0 + 8f64.sqrt()).ln()
}

/// Exponent constant of the KLT-block density asymptote (one `ln 2` more).
pub fn klt_density_constant() -> f64 {
    density_constant() + std::f64::consts::LN_2
}

/// `exp(-n (ln n - c))`.
pub fn asymptote(n: usize, c: f64) -> f64 {
    let n = n as f64;
    (-n * (n.ln() - c)).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityRow {
    pub n: usize,
    #[serde(serialize_with = "ser_display")]
    pub nonzeros: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub total: BigInt,
    #[serde(serialize_with = "ser_rational")]
    pub density: BigRational,
    pub asymptote: f64,
}

fn ser_display<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::scalar::format_rational(r))
}

impl DensityRow {
    pub fn density_f64(&self) -> f64 {
        self.density.to_f64().unwrap_or(f64::NAN)
    }

    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.n,
            self.nonzeros,
            self.total,
            self.density_f64(),
            self.asymptote
        )
    }
}

pub const DENSITY_CSV_HEADER: &str = "n,nonzeros,total,density,asymptote";

pub fn density_csv(rows: &[DensityRow]) -> String {
    let mut out = String::from(DENSITY_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// Row density of the full intersection matrix: `S_{n-1} / ((n-1)!/2)`.
pub fn density_full(n: usize) -> Result<DensityRow> {
    check_range("n", n, 4, usize::MAX)?;
    let nonzeros = super_catalan(n - 1)?;
    let total = factorial(n - 1) / BigInt::from(2);
    let density = BigRational::new(nonzeros.clone(), total.clone());
    Ok(DensityRow {
        n,
        nonzeros,
        total,
        density,
        asymptote: asymptote(n, density_constant()),
    })
}

pub const DENSITY_TABLE_MAX_N: usize = 60;

pub fn density_table(n_min: usize, n_max: usize) -> Result<Vec<DensityRow>> {
    check_range("n_min", n_min, 5, DENSITY_TABLE_MAX_N)?;
    check_range("n_max", n_max, n_min, DENSITY_TABLE_MAX_N)?;
    (n_min..=n_max).map(density_full).collect()
}

/// KLT block densities from the closed formula; `n >= 7`.
pub fn klt_density_table(n_min: usize, n_max: usize) -> Result<Vec<DensityRow>> {
    check_range("n_min", n_min, 7, usize::MAX)?;
    check_range("n_max", n_max, n_min, usize::MAX)?;
    (n_min..=n_max)
        .map(|n| {
            let density = klt::block_density_formula(n)?;
            let d = klt::block_size(n);
            let total = BigInt::from(d);
            let nonzeros = (&density * BigRational::from_integer(total.clone() * &total)).to_integer();
            Ok(DensityRow {
                n,
                nonzeros,
                total: total.clone() * total,
                density,
                asymptote: asymptote(n, klt_density_constant()),
            })
        })
        .collect()
}

pub const DISSECTION_MAX_P: usize = 12;

/// `D(p, j)` for `j = 0..=p-3`: dissections of a convex `p`-gon by `j`
/// pairwise non-crossing diagonals, by direct enumeration.
pub fn dissection_counts(p: usize) -> Result<Vec<u64>> {
    check_range("p", p, 3, DISSECTION_MAX_P)?;
    let diagonals: Vec<(usize, usize)> = (0..p)
        .flat_map(|i| (i + 2..p).map(move |j| (i, j)))
        .filter(|&(i, j)| !(i == 0 && j == p - 1))
        .collect();
    let crosses = |(a, b): (usize, usize), (c, d): (usize, usize)| {
        (a < c && c < b && b < d) || (c < a && a < d && d < b)
    };
    let mut counts = vec![0u64; p - 2];
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    fn rec(
        start: usize,
        diagonals: &[(usize, usize)],
        chosen: &mut Vec<(usize, usize)>,
        counts: &mut [u64],
        crosses: &dyn Fn((usize, usize), (usize, usize)) -> bool,
    ) {
        counts[chosen.len()] += 1;
        for k in start..diagonals.len() {
            let d = diagonals[k];
            if chosen.iter().all(|&c| !crosses(c, d)) {
                chosen.push(d);
                rec(k + 1, diagonals, chosen, counts, crosses);
                chosen.pop();
            }
        }
    }
    rec(0, &diagonals, &mut chosen, &mut counts, &crosses);
    Ok(counts)
}

/// Consistency helper: `S_r` as an error-free `u64` when it fits.
pub fn super_catalan_u64(r: usize) -> Result<u64> {
    super_catalan(r)?
        .to_u64()
        .ok_or_else(|| Error::Format(format!("S_{r} does not fit in u64")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn super_catalan_values() {
        let t = super_catalan_table(8).unwrap();
        let expected: Vec<BigInt> = [1, 1, 3, 11, 45, 197, 903, 4279].iter().map(|&v| big(v)).collect();
        assert_eq!(t, expected);
        assert!(super_catalan(0).is_err());
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre_at_3(0), BigRational::one());
        assert_eq!(legendre_at_3(1), BigRational::from_integer(big(3)));
        assert_eq!(legendre_at_3(2), BigRational::from_integer(big(13)));
        assert_eq!(legendre_at_3(3), BigRational::from_integer(big(63)));
    }

    #[test]
    fn legendre_identity() {
        let t = super_catalan_table(60).unwrap();
        for r in 2..=60 {
            assert_eq!(
                super_catalan_via_legendre(r).unwrap(),
                BigRational::from_integer(t[r - 1].clone()),
                "r = {r}"
            );
        }
    }

    #[test]
    fn catalan_values() {
        let c: Vec<u64> = (0..=4).map(catalan_u64).collect();
        assert_eq!(c, vec![1, 1, 2, 5, 14]);
        assert_eq!(catalan(30), BigInt::from(catalan_u64(30)));
    }

    #[test]
    fn density_examples() {
        assert_eq!(density_full(5).unwrap().density, BigRational::new(big(11), big(12)));
        assert_eq!(density_full(6).unwrap().density, BigRational::new(big(3), big(4)));
        let c = density_constant();
        assert!((c - 2.7627).abs() < 1e-4);
        assert!((klt_density_constant() - 3.4558).abs() < 1e-4);
    }

    #[test]
    fn density_table_decreasing() {
        let rows = density_table(5, 19).unwrap();
        assert_eq!(rows.len(), 15);
        assert!(rows.windows(2).all(|w| w[1].density < w[0].density));
        assert!(density_table(4, 10).is_err());
        assert!(density_table(5, 61).is_err());
    }

    #[test]
    fn dissection_examples() {
        assert_eq!(dissection_counts(3).unwrap(), vec![1]);
        assert_eq!(dissection_counts(4).unwrap(), vec![1, 2]);
        assert_eq!(dissection_counts(5).unwrap(), vec![1, 5, 5]);
        for p in 4..=9 {
            let total: u64 = dissection_counts(p).unwrap().iter().sum();
            assert_eq!(BigInt::from(total), super_catalan(p - 1).unwrap());
        }
        assert!(dissection_counts(13).is_err());
    }

    #[test]
    fn csv_has_header() {
        let csv = density_csv(&density_table(5, 6).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], DENSITY_CSV_HEADER);
        assert!(lines[2].starts_with("6,45,60,0.75,"));
    }
}
