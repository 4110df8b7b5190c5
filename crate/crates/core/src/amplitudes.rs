//! Biadjoint amplitudes as sums over shared planar trees.
//!
//! For a Mandelstam matrix `s`, each split `L` carries
//! `Q = sum_{a<b in L} s_ab` (equal on both sides), each binary tree the
//! product `R = prod 1/Q` over its splits, and the amplitude of a pair of
//! orderings is the sum of `R` over the trees planar for both. The overall
//! sign of the pair is not computed here; see `scattering::sign_inference`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::ordering::{Ordering, MAX_LABELS, MIN_N};
use crate::rng::Lcg64;
use crate::scalar::Scalar;
use crate::tree::{enumerate_planar, Split, Tree};

/// Numerator bound for sampled entries.
pub const SAMPLE_BOUND: u32 = 1_000_000;
pub const SAMPLE_RETRIES: usize = 64;

/// Symmetric `n x n` matrix with zero diagonal and zero row sums.
#[derive(Clone, Debug, PartialEq)]
pub struct MandelstamMatrix<T> {
    n: usize,
    seed: Option<u64>,
    s: Vec<T>,
}

impl<T: Scalar> MandelstamMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        check_range("n", n, MIN_N, MAX_LABELS)?;
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Format("Mandelstam matrix must be square".into()));
        }
        for a in 0..n {
            if !rows[a][a].is_zero() {
                return Err(Error::Format(format!("s[{0}][{0}] is not zero", a + 1)));
            }
            let sum = rows[a].iter().fold(T::zero(), |acc, v| acc + v.clone());
            if !sum.is_zero() {
                return Err(Error::Format(format!("row {} does not sum to zero", a + 1)));
            }
            for b in 0..n {
                if rows[a][b] != rows[b][a] {
                    return Err(Error::Format(format!("s is not symmetric at ({}, {})", a + 1, b + 1)));
                }
            }
        }
        Ok(MandelstamMatrix {
            n,
            seed: None,
            s: rows.into_iter().flatten().collect(),
        })
    }

    /// Seeded sample: `n(n-3)/2` free integer draws in `[-10^6, 10^6]` for
    /// `s_ab`, `a < b <= n-1` in lexicographic order except `(n-2, n-1)`;
    /// `s_{n-2,n-1}` then makes the `{1..n-1}` block sum to zero, and the
    /// last column restores every row sum. Redraws (continuing the stream)
    /// while some `Q` vanishes.
    pub fn sample(n: usize, seed: u64) -> Result<Self> {
        check_range("n", n, MIN_N, MAX_LABELS)?;
        let mut rng = Lcg64::new(seed);
        for _ in 0..SAMPLE_RETRIES {
            let ints = draw_integer_kinematics(n, &mut rng);
            let s = MandelstamMatrix {
                n,
                seed: Some(seed),
                s: ints
                    .iter()
                    .map(|&v| T::from_i64(v).expect("scalar holds sampled integers"))
                    .collect(),
            };
            if s.first_vanishing_split().is_none() {
                return Ok(s);
            }
        }
        Err(Error::RetryExhausted(SAMPLE_RETRIES))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Entry for labels `a`, `b` (1-based).
    pub fn get(&self, a: u8, b: u8) -> &T {
        &self.s[(a as usize - 1) * self.n + (b as usize - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.s.chunks(self.n).map(<[T]>::to_vec).collect()
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> MandelstamMatrix<U> {
        MandelstamMatrix {
            n: self.n,
            seed: self.seed,
            s: self.s.iter().map(f).collect(),
        }
    }

    /// `Q` of the side given as a label mask.
    pub fn q_mask(&self, mask: u32) -> T {
        let labels = crate::tree::mask_members(mask);
        let mut q = T::zero();
        for (i, &a) in labels.iter().enumerate() {
            for &b in &labels[i + 1..] {
                q = q + self.get(a, b).clone();
            }
        }
        q
    }

    /// Some split on which `Q` vanishes, if any.
    pub fn first_vanishing_split(&self) -> Option<Split> {
        let n = self.n;
        (1u32..(1u32 << (n - 1)))
            .filter(|m| (2..=n - 2).contains(&(m.count_ones() as usize)))
            .find(|&m| self.q_mask(m).is_zero())
            .map(|m| Split::from_canonical_unchecked(n, m))
    }

    pub fn is_generic(&self) -> bool {
        self.first_vanishing_split().is_none()
    }

    /// `s'[p(a)][p(b)] = s[a][b]` for the label permutation `p`.
    pub fn relabel(&self, perm: &[u8]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::SizeMismatch(perm.len(), self.n));
        }
        Ordering::identity(self.n)?.relabel(perm)?;
        let n = self.n;
        let mut s = vec![T::zero(); n * n];
        for a in 0..n {
            for b in 0..n {
                let (pa, pb) = (perm[a] as usize - 1, perm[b] as usize - 1);
                s[pa * n + pb] = self.s[a * n + b].clone();
            }
        }
        Ok(MandelstamMatrix { n, seed: self.seed, s })
    }
}

fn draw_integer_kinematics(n: usize, rng: &mut Lcg64) -> Vec<i64> {
    let mut s = vec![0i64; n * n];
    let idx = |a: usize, b: usize| (a - 1) * n + (b - 1);
    let mut block_sum = 0i64;
    for a in 1..n {
        for b in a + 1..n {
            if (a, b) == (n - 2, n - 1) {
                continue;
            }
            let v = rng.symmetric_int(SAMPLE_BOUND);
            s[idx(a, b)] = v;
            s[idx(b, a)] = v;
            block_sum += v;
        }
    }
    s[idx(n - 2, n - 1)] = -block_sum;
    s[idx(n - 1, n - 2)] = -block_sum;
    for a in 1..n {
        let row: i64 = (1..n).map(|b| s[idx(a, b)]).sum();
        s[idx(a, n)] = -row;
        s[idx(n, a)] = -row;
    }
    s
}

/// `Q_e` for a split; the same value on either side.
pub fn q_edge<T: Scalar>(s: &MandelstamMatrix<T>, split: &Split) -> Result<T> {
    if split.n() != s.n() {
        return Err(Error::SizeMismatch(split.n(), s.n()));
    }
    Ok(s.q_mask(split.mask()))
}

/// `prod_e 1/Q_e` over the internal edges of `t`.
pub fn r_tree<T: Scalar>(s: &MandelstamMatrix<T>, t: &Tree) -> Result<T> {
    if t.n() != s.n() {
        return Err(Error::SizeMismatch(t.n(), s.n()));
    }
    let mut r = T::one();
    for split in t.splits() {
        let q = s.q_mask(split.mask());
        if q.is_zero() {
            return Err(Error::NonGeneric(split.to_string()));
        }
        r = r / q;
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeValue<T> {
    /// The tree sum; equals the amplitude up to an overall sign.
    pub value: T,
    pub term_count: usize,
}

impl<T: Scalar> AmplitudeValue<T> {
    pub fn magnitude(&self) -> T {
        self.value.abs()
    }
}

/// Sum of `R(T)` over trees planar for both orderings, in sorted tree order.
pub fn amplitude_unsigned<T: Scalar>(
    s: &MandelstamMatrix<T>,
    a: &Ordering,
    b: &Ordering,
) -> Result<AmplitudeValue<T>> {
    if a.n() != b.n() || a.n() != s.n() {
        return Err(Error::SizeMismatch(a.n(), b.n().max(s.n())));
    }
    let mut value = T::zero();
    let mut term_count = 0;
    for t in enumerate_planar(a) {
        if t.is_planar(b)? {
            value = value + r_tree(s, &t)?;
            term_count += 1;
        }
    }
    Ok(AmplitudeValue { value, term_count })
}

/// JSON form of exact kinematics: entries as `[numerator, denominator]`
/// decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KinematicsFile {
    pub schema: u32,
    pub n: usize,
    pub seed: Option<u64>,
    pub s: Vec<Vec<[String; 2]>>,
}

impl MandelstamMatrix<BigRational> {
    pub fn to_file(&self) -> KinematicsFile {
        KinematicsFile {
            schema: 1,
            n: self.n,
            seed: self.seed,
            s: self
                .rows()
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| [v.numer().to_string(), v.denom().to_string()])
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_file(file: &KinematicsFile) -> Result<Self> {
        if file.schema != 1 {
            return Err(Error::Format(format!("unsupported schema {}", file.schema)));
        }
        let rows = file
            .s
            .iter()
            .map(|row| {
                row.iter()
                    .map(|[num, den]| {
                        let num: BigInt = num.parse().map_err(|_| Error::Format(format!("bad numerator {num:?}")))?;
                        let den: BigInt = den.parse().map_err(|_| Error::Format(format!("bad denominator {den:?}")))?;
                        if den == BigInt::from(0) {
                            return Err(Error::Format("zero denominator".into()));
                        }
                        Ok(BigRational::new(num, den))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != file.n {
            return Err(Error::Format(format!("expected {} rows, got {}", file.n, rows.len())));
        }
        let mut m = MandelstamMatrix::from_rows(rows)?;
        m.seed = file.seed;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational_from_i64;
    use crate::ExactMandelstam;
    use num_traits::{One, Zero};

    fn ord(s: &str) -> Ordering {
        s.parse().unwrap()
    }

    #[test]
    fn sample_satisfies_constraints() {
        for n in 4..=8 {
            let s = ExactMandelstam::sample(n, 11).unwrap();
            MandelstamMatrix::from_rows(s.rows()).unwrap();
            assert!(s.is_generic());
        }
        assert_eq!(ExactMandelstam::sample(6, 3).unwrap(), ExactMandelstam::sample(6, 3).unwrap());
        assert_ne!(ExactMandelstam::sample(6, 3).unwrap(), ExactMandelstam::sample(6, 4).unwrap());
    }

    #[test]
    fn free_parameter_count() {
        // n(n-3)/2 draws: n = 4 consumes exactly two values
        let mut rng = Lcg64::new(5);
        let ints = draw_integer_kinematics(4, &mut rng);
        let mut check = Lcg64::new(5);
        let (x, y) = (check.symmetric_int(SAMPLE_BOUND), check.symmetric_int(SAMPLE_BOUND));
        assert_eq!((ints[1], ints[2]), (x, y));
        assert_eq!(ints[4 + 2], -(x + y));
        assert_eq!(rng.next_u32(), check.next_u32());
    }

    #[test]
    fn float_sampling_matches_exact() {
        let e = ExactMandelstam::sample(6, 9).unwrap();
        let f = MandelstamMatrix::<f64>::sample(6, 9).unwrap();
        assert_eq!(e.map(|v| num_traits::ToPrimitive::to_f64(v).unwrap()), f);
    }

    #[test]
    fn q_edge_examples() {
        let s = ExactMandelstam::sample(5, 1).unwrap();
        let s12 = Split::new(5, &[1, 2]).unwrap();
        assert_eq!(q_edge(&s, &s12).unwrap(), s.get(1, 2).clone());
        let s123 = Split::new(5, &[1, 2, 3]).unwrap();
        assert_eq!(q_edge(&s, &s123).unwrap(), s.get(4, 5).clone());
        assert_eq!(s.q_mask(0b00111), s.q_mask(0b11000));
    }

    #[test]
    fn r_tree_examples() {
        let s = ExactMandelstam::sample(5, 2).unwrap();
        let t = Tree::parse(5, "{1,2}|{1,2,3}").unwrap();
        let expected = BigRational::one() / (s.get(1, 2).clone() * s.get(4, 5).clone());
        assert_eq!(r_tree(&s, &t).unwrap(), expected);

        let rows = vec![
            vec![0, 0, 1, -1],
            vec![0, 0, -1, 1],
            vec![1, -1, 0, 0],
            vec![-1, 1, 0, 0],
        ]
        .into_iter()
        .map(|r| r.into_iter().map(rational_from_i64).collect())
        .collect();
        let degenerate = ExactMandelstam::from_rows(rows).unwrap();
        assert!(!degenerate.is_generic());
        let t = Tree::parse(4, "{1,2}").unwrap();
        assert!(matches!(r_tree(&degenerate, &t), Err(Error::NonGeneric(_))));
    }

    #[test]
    fn amplitude_examples() {
        let s = ExactMandelstam::sample(4, 17).unwrap();
        let inv = |v: &BigRational| BigRational::one() / v;
        let id = ord("1,2,3,4");
        let self_amp = amplitude_unsigned(&s, &id, &id).unwrap();
        assert_eq!(self_amp.value, inv(s.get(1, 2)) + inv(s.get(1, 4)));
        assert_eq!(self_amp.term_count, 2);
        let cross = amplitude_unsigned(&s, &id, &ord("1,3,2,4")).unwrap();
        assert_eq!(cross.value, inv(s.get(1, 4)));

        let s5 = ExactMandelstam::sample(5, 17).unwrap();
        let zero = amplitude_unsigned(&s5, &ord("1,2,3,4,5"), &ord("1,3,5,2,4")).unwrap();
        assert!(zero.value.is_zero());
        assert_eq!(zero.term_count, 0);
    }

    #[test]
    fn kinematics_file_round_trip() {
        let s = ExactMandelstam::sample(6, 8).unwrap();
        let json = serde_json::to_string(&s.to_file()).unwrap();
        let back = ExactMandelstam::from_file(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rejects_unbalanced_rows() {
        let rows = vec![vec![rational_from_i64(0); 4]; 4];
        assert!(ExactMandelstam::from_rows(rows).is_ok());
        let mut rows = vec![vec![rational_from_i64(0); 4]; 4];
        rows[0][1] = rational_from_i64(1);
        rows[1][0] = rational_from_i64(1);
        assert!(ExactMandelstam::from_rows(rows).is_err());
    }
}
