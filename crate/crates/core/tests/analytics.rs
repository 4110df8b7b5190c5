use num_traits::ToPrimitive;
use tropgr_core::analytics::{density_constant, density_table, dissection_counts, klt_density_constant, super_catalan};

/// Dissections of a convex p-gon by brute force over diagonal subsets,
/// grouped by the number of diagonals.
fn dissections_by_brute_force(p: usize) -> Vec<u64> {
    let diagonals: Vec<(usize, usize)> = (0..p)
        .flat_map(|i| (i + 2..p).filter(move |&j| !(i == 0 && j == p - 1)).map(move |j| (i, j)))
        .collect();
    let crosses = |(a, b): (usize, usize), (c, d): (usize, usize)| (a < c && c < b && b < d) || (c < a && a < d && d < b);
    let mut out = vec![0u64; p.saturating_sub(2)];
    for mask in 0u32..1 << diagonals.len() {
        let chosen: Vec<(usize, usize)> = (0..diagonals.len()).filter(|&k| mask >> k & 1 == 1).map(|k| diagonals[k]).collect();
        let ok = chosen.iter().enumerate().all(|(i, &x)| chosen[i + 1..].iter().all(|&y| !crosses(x, y)));
        if ok {
            out[chosen.len()] += 1;
        }
    }
    out
}

#[test]
fn dissection_counts_match_brute_force() {
    for p in 4..=8 {
        assert_eq!(dissection_counts(p).unwrap(), dissections_by_brute_force(p), "p = {p}");
        let total: u64 = dissections_by_brute_force(p).iter().sum();
        assert_eq!(super_catalan(p - 1).unwrap(), total.into());
    }
}

#[test]
fn super_catalan_first_values() {
    let v: Vec<u64> = (3..=8).map(|r| super_catalan(r).unwrap().to_u64().unwrap()).collect();
    assert_eq!(v, vec![3, 11, 45, 197, 903, 4279]);
}

fn ratio(r: usize) -> f64 {
    super_catalan(r).unwrap().to_f64().unwrap() / super_catalan(r - 1).unwrap().to_f64().unwrap()
}

#[test]
fn ratio_follows_the_corrected_asymptote() {
    let limit = 3.0 + 8f64.sqrt();
    for r in [40, 60, 100] {
        let predicted = limit * (1.0 - 1.5 / r as f64);
        assert!((ratio(r) - predicted).abs() / predicted < 1e-4, "r = {r}");
    }
    assert!((30..200).all(|r| ratio(r) < ratio(r + 1) && ratio(r + 1) < limit));
    assert!((limit - ratio(150)) / limit < 0.01);
    assert!((limit - ratio(40)) / limit > 0.03);
}

#[test]
fn log_asymptote_remainder_is_bounded() {
    let remainder = |n: usize| {
        let s = super_catalan(n - 1).unwrap().to_f64().unwrap().ln();
        (s - (n as f64 * (3.0 + 8f64.sqrt()).ln() - 1.5 * (n as f64).ln())).abs()
    };
    let spread = (20..=60).map(remainder).fold(0.0f64, f64::max) - (20..=60).map(remainder).fold(f64::MAX, f64::min);
    assert!(spread < (60f64).ln() - (20f64).ln());
}

#[test]
fn asymptote_constants_to_two_decimals() {
    assert_eq!(format!("{:.2}", density_constant()), "2.76");
    assert_eq!(format!("{:.2}", klt_density_constant()), "3.46");
}

#[test]
fn density_table_first_rows() {
    let rows = density_table(5, 19).unwrap();
    assert_eq!(rows.len(), 15);
    let head: Vec<String> = rows[..3].iter().map(|r| r.density.to_string()).collect();
    assert_eq!(head, vec!["11/12", "3/4", "197/360"]);
}
