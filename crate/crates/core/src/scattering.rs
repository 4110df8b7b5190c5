//! Numerical check of the amplitudes through the scattering equations.
//!
//! With punctures 1, 2, 3 fixed at finite gauge values, the remaining
//! `n - 3` equations `f_a = sum_b s_ab / (x_a - x_b) = 0` are solved by
//! Newton iteration with deflation of the roots already found. Each solution
//! `I` contributes `PT_I(alpha) PT_I(beta) / det'Phi_I` to the amplitude
//! matrix, where `PT` is the Parke-Taylor factor and `det'Phi` the reduced
//! Hessian determinant.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::amplitudes::{amplitude_unsigned, MandelstamMatrix};
use crate::error::{check_range, Error, Result};
use crate::linalg::{numerical_rank, rational_rank, relative_close, singular_values};
use crate::ordering::{Ordering, OrderingCatalog};
use crate::rng::Lcg64;

pub const SCATTERING_MIN_N: usize = 4;
pub const SCATTERING_MAX_N: usize = 6;
pub const RESTART_BUDGET: usize = 10_000;
pub const RESIDUAL_BOUND: f64 = 1e-10;
/// Relative threshold below which a Gram entry counts as a cancellation
/// to zero.
pub const ZERO_RATIO: f64 = 1e-8;
pub const RANK_RATIO: f64 = 1e-8;

const BATCH: usize = 16;
const NEWTON_ITERS: usize = 200;
const POLISH_ITERS: usize = 20;
const START_SEED: u64 = 0x5eed_0f5c_a77e_7123;
const LOOP_SEED: u64 = 0x10_0b5e_ed00_c0de;
const MONODROMY_AFTER: usize = 64;
const MONODROMY_LOOPS: usize = 1000;

/// Positions of punctures 1, 2, 3.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gauge(pub [f64; 3]);

impl Default for Gauge {
    fn default() -> Self {
        Gauge([0.0, 1.0, 2.0])
    }
}

type Cdd = num_complex::Complex<TwoFloat>;

#[derive(Clone, Debug)]
pub struct Solution {
    /// All `n` positions, gauge-fixed ones included.
    pub x: Vec<Complex64>,
    pub residual: f64,
    /// `det'Phi`, computed with the unnormalized kinematics.
    pub det_phi: Complex64,
    /// Positions refined in double-double precision.
    x_dd: Vec<Cdd>,
    det_phi_dd: Cdd,
}

#[derive(Clone, Debug)]
pub struct ScatteringSolutionSet {
    pub n: usize,
    pub kinematics: MandelstamMatrix<f64>,
    pub gauge: Gauge,
    pub solutions: Vec<Solution>,
    pub residual_bound: f64,
    pub starts_used: usize,
    pub loops_used: usize,
}

pub fn expected_solutions(n: usize) -> usize {
    (1..=n.saturating_sub(3)).product()
}

#[derive(Clone)]
struct Equations {
    n: usize,
    /// Kinematics (complex along homotopy paths), row-major.
    s: Vec<Complex64>,
    gauge: Gauge,
}

impl Equations {
    /// The target system, with `s` scaled to `max |s_ab| = 1`.
    fn new(s: &MandelstamMatrix<f64>, gauge: Gauge) -> Self {
        let rows = s.rows();
        let scale = rows.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        Equations {
            n: s.n(),
            s: rows.into_iter().flatten().map(|v| Complex64::new(v / scale, 0.0)).collect(),
            gauge,
        }
    }

    fn with_s(&self, s: Vec<Complex64>) -> Self {
        Equations { n: self.n, s, gauge: self.gauge }
    }

    /// The system at `(1 - t) self + t other`.
    fn lerp(&self, other: &Equations, t: f64) -> Self {
        self.with_s(self.s.iter().zip(&other.s).map(|(a, b)| a * (1.0 - t) + b * t).collect())
    }

    fn s(&self, a: usize, b: usize) -> Complex64 {
        self.s[a * self.n + b]
    }

    fn full(&self, free: &DVector<Complex64>) -> Vec<Complex64> {
        let mut x: Vec<Complex64> = self.gauge.0.iter().map(|&g| Complex64::new(g, 0.0)).collect();
        x.extend(free.iter().copied());
        x
    }

    /// `f_a` for all `n` punctures.
    fn all_residuals(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|a| {
                (0..self.n)
                    .filter(|&b| b != a)
                    .map(|b| self.s(a, b) / (x[a] - x[b]))
                    .sum()
            })
            .collect()
    }

    /// `g_a = f_a * prod_{b=1,2,3} (x_a - x_b)` for the free punctures.
    /// The gauge poles are cleared, so `g` grows at infinity where `f`
    /// decays; Newton on `f` alone drifts off to infinity.
    fn value(&self, x: &[Complex64]) -> DVector<Complex64> {
        let f = self.all_residuals(x);
        DVector::from_iterator(
            self.n - 3,
            (3..self.n).map(|a| f[a] * (0..3).map(|b| x[a] - x[b]).product::<Complex64>()),
        )
    }

    fn value_and_jacobian(&self, x: &[Complex64]) -> (DVector<Complex64>, DMatrix<Complex64>) {
        let k = self.n - 3;
        let f = self.all_residuals(x);
        let mut jac = hessian_block(self.n, |a, b| self.s(a, b), x);
        let mut g = DVector::from_element(k, Complex64::zero());
        for i in 0..k {
            let a = i + 3;
            let p: Complex64 = (0..3).map(|b| x[a] - x[b]).product();
            let dlog: Complex64 = (0..3).map(|b| (x[a] - x[b]).inv()).sum();
            g[i] = f[a] * p;
            for c in 0..k {
                jac[(i, c)] *= p;
            }
            jac[(i, i)] += f[a] * p * dlog;
        }
        (g, jac)
    }

    fn residual(&self, x: &[Complex64]) -> f64 {
        self.all_residuals(x).iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }
}

/// Rows and columns `4..=n` of `Phi`: off-diagonal `s_ab/(x_a - x_b)^2`,
/// diagonal minus the off-diagonal row sum over all punctures. This is also
/// the Jacobian of `f_4..f_n` with respect to the free positions.
fn hessian_block<F: Fn(usize, usize) -> Complex64>(n: usize, s: F, x: &[Complex64]) -> DMatrix<Complex64> {
    let k = n - 3;
    let mut m = DMatrix::from_element(k, k, Complex64::zero());
    for i in 0..k {
        let a = i + 3;
        let mut diag = Complex64::zero();
        for b in 0..n {
            if b == a {
                continue;
            }
            let d = x[a] - x[b];
            let v = s(a, b) / (d * d);
            diag -= v;
            if b >= 3 {
                m[(i, b - 3)] = v;
            }
        }
        m[(i, i)] = diag;
    }
    m
}

fn max_norm(v: &DVector<Complex64>) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

fn is_sane(x: &[Complex64]) -> bool {
    x.iter().all(|z| z.re.is_finite() && z.im.is_finite() && z.norm() < 1e8)
        && (0..x.len()).all(|a| (a + 1..x.len()).all(|b| (x[a] - x[b]).norm() > 1e-9))
}

/// Newton from one start on `f * prod_k (1 + 1/h_k)` with
/// `h_k = v_k . (y - r_k)`: the deflation pushes iterates away from known
/// roots without changing `f` far from them. The deflated step is the plain
/// step rescaled (Sherman-Morrison). Finished by undeflated polishing.
fn newton_from(eq: &Equations, start: DVector<Complex64>, roots: &[DVector<Complex64>], vs: &[DVector<Complex64>]) -> Option<DVector<Complex64>> {
    let k = eq.n - 3;
    let mut y = start;
    let mut converged = false;
    for _ in 0..NEWTON_ITERS {
        let x = eq.full(&y);
        if !is_sane(&x) {
            return None;
        }
        let (f, jac) = eq.value_and_jacobian(&x);
        let plain = jac.lu().solve(&(-&f))?;
        let mut w = DVector::from_element(k, Complex64::zero());
        for (r, v) in roots.iter().zip(vs) {
            let h: Complex64 = v.dot(&(&y - r));
            if h.norm() < 1e-300 {
                return None;
            }
            w -= v / (h * (h + 1.0));
        }
        let denom = Complex64::new(1.0, 0.0) + w.dot(&plain);
        if denom.norm() < 1e-300 {
            return None;
        }
        let step = plain / denom;
        y += &step;
        if max_norm(&step) <= 1e-12 * (1.0 + max_norm(&y)) {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    polish(eq, y)
}

/// Plain Newton to full precision; `None` unless the residual bound holds.
fn polish(eq: &Equations, mut y: DVector<Complex64>) -> Option<DVector<Complex64>> {
    for _ in 0..POLISH_ITERS {
        let x = eq.full(&y);
        if !is_sane(&x) {
            return None;
        }
        let (f, jac) = eq.value_and_jacobian(&x);
        let step = jac.lu().solve(&(-&f))?;
        y += &step;
        if max_norm(&step) <= 1e-15 * (1.0 + max_norm(&y)) {
            break;
        }
    }
    let x = eq.full(&y);
    (is_sane(&x) && eq.residual(&x) < RESIDUAL_BOUND).then_some(y)
}

/// Follows a root of `from` to a root of `to` along the straight segment
/// in kinematic space: RK4 predictor on `dy/dt = -J^-1 dg/dt`, Newton
/// corrector, step halving on failure.
fn track(from: &Equations, to: &Equations, y0: &DVector<Complex64>) -> Option<DVector<Complex64>> {
    let delta = from.with_s(to.s.iter().zip(&from.s).map(|(b, a)| b - a).collect());
    let tangent = |t: f64, y: &DVector<Complex64>| -> Option<DVector<Complex64>> {
        let x = from.full(y);
        if !is_sane(&x) {
            return None;
        }
        let (_, jac) = from.lerp(to, t).value_and_jacobian(&x);
        jac.lu().solve(&(-delta.value(&x)))
    };
    let mut y = y0.clone();
    let (mut t, mut h, mut streak) = (0.0f64, 0.02f64, 0);
    while t < 1.0 {
        h = h.min(1.0 - t);
        let predicted = (|| {
            let k1 = tangent(t, &y)?;
            let k2 = tangent(t + h / 2.0, &(&y + &k1 * Complex64::from(h / 2.0)))?;
            let k3 = tangent(t + h / 2.0, &(&y + &k2 * Complex64::from(h / 2.0)))?;
            let k4 = tangent(t + h, &(&y + &k3 * Complex64::from(h)))?;
            Some(&y + (k1 + k2 * Complex64::from(2.0) + k3 * Complex64::from(2.0) + k4) * Complex64::from(h / 6.0))
        })();
        let corrected = predicted.and_then(|p| correct(&from.lerp(to, t + h), p));
        match corrected {
            Some(c) => {
                y = c;
                t += h;
                streak += 1;
                if streak >= 3 {
                    h = (2.0 * h).min(0.1);
                    streak = 0;
                }
            }
            None => {
                h /= 2.0;
                streak = 0;
                if h < 1e-10 {
                    return None;
                }
            }
        }
    }
    polish(to, y)
}

/// Up to three Newton steps that must contract quickly.
fn correct(eq: &Equations, mut y: DVector<Complex64>) -> Option<DVector<Complex64>> {
    let mut last = f64::INFINITY;
    for _ in 0..3 {
        let x = eq.full(&y);
        if !is_sane(&x) {
            return None;
        }
        let (f, jac) = eq.value_and_jacobian(&x);
        let step = jac.lu().solve(&(-&f))?;
        let size = max_norm(&step) / (1.0 + max_norm(&y));
        if size > 1e-2 || size > 0.5 * last {
            return None;
        }
        y += &step;
        last = size;
        if size < 1e-11 {
            break;
        }
    }
    (last < 1e-8).then_some(y)
}

/// Random complex kinematics satisfying the same linear constraints,
/// completed as in the integer sampler.
fn random_complex_kinematics(n: usize, rng: &mut Lcg64) -> Vec<Complex64> {
    let mut s = vec![Complex64::zero(); n * n];
    let idx = |a: usize, b: usize| (a - 1) * n + (b - 1);
    let mut block = Complex64::zero();
    for a in 1..n {
        for b in a + 1..n {
            if (a, b) == (n - 2, n - 1) {
                continue;
            }
            let v = Complex64::new(2.0 * rng.unit_f64() - 1.0, 2.0 * rng.unit_f64() - 1.0);
            s[idx(a, b)] = v;
            s[idx(b, a)] = v;
            block += v;
        }
    }
    s[idx(n - 2, n - 1)] = -block;
    s[idx(n - 1, n - 2)] = -block;
    for a in 1..n {
        let row: Complex64 = (1..n).map(|b| s[idx(a, b)]).sum();
        s[idx(a, n)] = -row;
        s[idx(n, a)] = -row;
    }
    s
}

fn random_point(rng: &mut Lcg64, k: usize, radius: f64) -> DVector<Complex64> {
    DVector::from_iterator(
        k,
        (0..k).map(|_| {
            Complex64::new(radius * (2.0 * rng.unit_f64() - 1.0), radius * (2.0 * rng.unit_f64() - 1.0))
        }),
    )
}

/// Solutions often sit in tight clusters around a gauge point or around
/// each other, so each coordinate is placed near a gauge point, near an
/// earlier coordinate or anywhere, at a log-uniform distance in
/// `[1e-6, 1e6]`.
fn multiscale_start(rng: &mut Lcg64, gauge: &Gauge, k: usize) -> DVector<Complex64> {
    let mut y: Vec<Complex64> = Vec::with_capacity(k);
    for i in 0..k {
        let choice = (rng.next_u32() as usize) % (4 + i);
        let center = match choice {
            0..=2 => Complex64::new(gauge.0[choice], 0.0),
            3 => Complex64::zero(),
            c => y[c - 4],
        };
        let radius = 10f64.powf(-6.0 + 12.0 * rng.unit_f64());
        let angle = std::f64::consts::TAU * rng.unit_f64();
        y.push(center + Complex64::from_polar(radius, angle));
    }
    DVector::from_vec(y)
}

fn start_rng(index: usize) -> Lcg64 {
    let mut rng = Lcg64::new(START_SEED ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.next_u32();
    rng
}

fn distinct(y: &DVector<Complex64>, roots: &[DVector<Complex64>]) -> bool {
    roots
        .iter()
        .all(|r| max_norm(&(y - r)) > 1e-6 * (1.0 + max_norm(r)))
}

/// All `(n-3)!` solutions for generic kinematics.
///
/// Newton starts run in batches of 16; every start in a batch deflates
/// against the roots known when the batch began. Some roots have tiny
/// basins, so once a few batches have run, each further batch is followed
/// by a monodromy loop: every known root is tracked around a random
/// triangle `s -> s1 -> s2 -> s` of complex kinematics, and the endpoints are
/// again roots of the target, often new ones. Results are merged in a fixed
/// order, so the outcome does not depend on the thread count.
pub fn solve_scattering(s: &MandelstamMatrix<f64>, gauge: Gauge) -> Result<ScatteringSolutionSet> {
    let n = s.n();
    check_range("n", n, SCATTERING_MIN_N, SCATTERING_MAX_N)?;
    if !s.is_generic() {
        let split = s.first_vanishing_split().expect("non-generic");
        return Err(Error::NonGeneric(split.to_string()));
    }
    let eq = Equations::new(s, gauge);
    let k = n - 3;
    let expected = expected_solutions(n);
    let mut roots: Vec<DVector<Complex64>> = Vec::new();
    let mut vs: Vec<DVector<Complex64>> = Vec::new();
    let mut used = 0;
    let mut loops = 0;
    let add = |y: DVector<Complex64>, roots: &mut Vec<DVector<Complex64>>, vs: &mut Vec<DVector<Complex64>>, tag: usize| {
        if roots.len() < expected && distinct(&y, roots) {
            let mut rng = start_rng(tag);
            rng.next_u32();
            vs.push(random_point(&mut rng, k, 1.0));
            roots.push(y);
        }
    };
    while roots.len() < expected && used < RESTART_BUDGET {
        let batch = BATCH.min(RESTART_BUDGET - used);
        let found: Vec<Option<DVector<Complex64>>> = (used..used + batch)
            .into_par_iter()
            .map(|idx| {
                let mut rng = start_rng(idx);
                let start = multiscale_start(&mut rng, &eq.gauge, k);
                newton_from(&eq, start, &roots, &vs)
            })
            .collect();
        for (offset, y) in found.into_iter().enumerate() {
            if let Some(y) = y {
                add(y, &mut roots, &mut vs, used + offset);
            }
        }
        used += batch;
        if roots.len() < expected && !roots.is_empty() && used >= MONODROMY_AFTER && loops < MONODROMY_LOOPS {
            let mut rng = Lcg64::new(LOOP_SEED ^ (loops as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let s1 = eq.with_s(random_complex_kinematics(n, &mut rng));
            let s2 = eq.with_s(random_complex_kinematics(n, &mut rng));
            let ends: Vec<Option<DVector<Complex64>>> = roots
                .par_iter()
                .map(|r| {
                    let y = track(&eq, &s1, r)?;
                    let y = track(&s1, &s2, &y)?;
                    track(&s2, &eq, &y)
                })
                .collect();
            for y in ends.into_iter().flatten() {
                add(y, &mut roots, &mut vs, RESTART_BUDGET + loops);
            }
            loops += 1;
        }
    }
    if roots.len() < expected {
        return Err(Error::SolverFailure {
            found: roots.len(),
            expected,
            starts: used,
        });
    }
    let raw: Vec<TwoFloat> = s.rows().into_iter().flatten().map(TwoFloat::from).collect();
    let mut solutions = roots
        .iter()
        .enumerate()
        .map(|(i, y)| {
            let x_dd = refine_dd(&eq, &raw, y);
            let x: Vec<Complex64> = x_dd.iter().map(to_c64).collect();
            let residual = eq.residual(&x);
            let det_phi_dd = reduced_determinant_dd(n, &raw, &x_dd).ok_or(Error::SingularHessian(i))?;
            Ok(Solution {
                x,
                residual,
                det_phi: to_c64(&det_phi_dd),
                x_dd,
                det_phi_dd,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    solutions.sort_by(|a, b| {
        a.x.iter()
            .zip(&b.x)
            .map(|(p, q)| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(ScatteringSolutionSet {
        n,
        kinematics: s.clone(),
        gauge,
        solutions,
        residual_bound: RESIDUAL_BOUND,
        starts_used: used,
        loops_used: loops,
    })
}

fn dd(v: f64) -> TwoFloat {
    TwoFloat::from(v)
}

fn to_c64(z: &Cdd) -> Complex64 {
    Complex64::new(f64::from(z.re), f64::from(z.im))
}

fn to_cdd(z: &Complex64) -> Cdd {
    Cdd::new(dd(z.re), dd(z.im))
}

/// `1/d` by one Newton step from the f64 reciprocal. The division operator
/// of `TwoFloat` only delivers about f64 accuracy.
fn recip_dd(d: TwoFloat) -> TwoFloat {
    let y0 = dd(1.0 / d.hi());
    y0 + y0 * (dd(1.0) - d * y0)
}

fn cinv(z: Cdd) -> Cdd {
    let r = recip_dd(z.re * z.re + z.im * z.im);
    Cdd::new(z.re * r, -(z.im * r))
}

fn norm_dd(z: &Cdd) -> f64 {
    to_c64(z).norm()
}

/// `g` of [`Equations::value`] in double-double, with the raw kinematics.
fn value_dd(n: usize, s: &[TwoFloat], x: &[Cdd]) -> Vec<Cdd> {
    (3..n)
        .map(|a| {
            let mut f = Cdd::zero();
            for b in (0..n).filter(|&b| b != a) {
                f += cinv(x[a] - x[b]) * s[a * n + b];
            }
            (0..3).fold(f, |acc, b| acc * (x[a] - x[b]))
        })
        .collect()
}

/// Iterative refinement of an f64 root: residuals in double-double, the
/// correction solved with the f64 Jacobian.
fn refine_dd(eq: &Equations, raw: &[TwoFloat], y: &DVector<Complex64>) -> Vec<Cdd> {
    let n = eq.n;
    let scale = raw.iter().fold(0.0f64, |m, v| m.max(f64::from(*v).abs()));
    let mut x: Vec<Cdd> = eq.full(y).iter().map(to_cdd).collect();
    for _ in 0..4 {
        let xf: Vec<Complex64> = x.iter().map(to_c64).collect();
        let (_, jac) = eq.value_and_jacobian(&xf);
        let g = value_dd(n, raw, &x);
        let rhs = DVector::from_iterator(n - 3, g.iter().map(|z| -to_c64(z) / scale));
        let Some(step) = jac.lu().solve(&rhs) else { break };
        for (i, d) in step.iter().enumerate() {
            x[i + 3] += to_cdd(d);
        }
        if max_norm(&step) <= 1e-30 * (1.0 + max_norm(y)) {
            break;
        }
    }
    x
}

fn determinant_dd(m: &[Vec<Cdd>]) -> Cdd {
    match m.len() {
        0 => Cdd::new(dd(1.0), dd(0.0)),
        1 => m[0][0],
        k => (0..k)
            .map(|c| {
                let minor: Vec<Vec<Cdd>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, v)| *v).collect())
                    .collect();
                let term = m[0][c] * determinant_dd(&minor);
                if c % 2 == 0 { term } else { -term }
            })
            .fold(Cdd::zero(), |acc, t| acc + t),
    }
}

/// `det'Phi = det(Phi without rows/cols 1,2,3) / (x12 x23 x31)^2`; `None`
/// when the reduced matrix is numerically singular.
fn reduced_determinant_dd(n: usize, s: &[TwoFloat], x: &[Cdd]) -> Option<Cdd> {
    let k = n - 3;
    let mut block = vec![vec![Cdd::zero(); k]; k];
    for i in 0..k {
        let a = i + 3;
        let mut diag = Cdd::zero();
        for b in (0..n).filter(|&b| b != a) {
            let d = x[a] - x[b];
            let v = cinv(d * d) * s[a * n + b];
            diag -= v;
            if b >= 3 {
                block[i][b - 3] = v;
            }
        }
        block[i][i] = diag;
    }
    let det = determinant_dd(&block);
    let row_norms: f64 = block
        .iter()
        .map(|r| r.iter().map(|z| norm_dd(z).powi(2)).sum::<f64>().sqrt())
        .product();
    if !(norm_dd(&det) > 1e-13 * row_norms) {
        return None;
    }
    let v = (x[0] - x[1]) * (x[1] - x[2]) * (x[2] - x[0]);
    Some(det * cinv(v * v))
}

fn parke_taylor(o: &Ordering, x: &[Cdd]) -> Cdd {
    let l = o.labels();
    let mut denom = Cdd::new(dd(1.0), dd(0.0));
    for i in 0..l.len() {
        let a = l[i] as usize - 1;
        let b = l[(i + 1) % l.len()] as usize - 1;
        denom *= x[a] - x[b];
    }
    cinv(denom)
}

/// `m(alpha, beta)` over the ordering catalog, numerically.
#[derive(Clone, Debug)]
pub struct GramAmplitudeMatrix {
    pub n: usize,
    pub size: usize,
    /// Real parts of the solution sums.
    pub entries: Vec<f64>,
    /// `sum_I |term_I|` per entry; the scale of the zero test.
    pub scales: Vec<f64>,
    /// Per-solution weights `1 / det'Phi_I`.
    pub weights: Vec<Complex64>,
    /// Largest `|Im m| / scale` over all entries.
    pub max_imag_ratio: f64,
}

impl GramAmplitudeMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    pub fn is_zero(&self, i: usize, j: usize) -> bool {
        let k = i * self.size + j;
        self.entries[k].abs() <= ZERO_RATIO * self.scales[k]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.size).map(<[f64]>::to_vec).collect()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        singular_values(&self.rows())
    }

    pub fn numerical_rank(&self) -> usize {
        numerical_rank(&self.singular_values(), RANK_RATIO)
    }
}

pub fn gram_matrix(sol: &ScatteringSolutionSet, catalog: &OrderingCatalog) -> Result<GramAmplitudeMatrix> {
    if catalog.n() != sol.n {
        return Err(Error::SizeMismatch(catalog.n(), sol.n));
    }
    let size = catalog.len();
    let weights_dd: Vec<Cdd> = sol.solutions.iter().map(|s| cinv(s.det_phi_dd)).collect();
    let weights: Vec<Complex64> = weights_dd.iter().map(to_c64).collect();
    let pt: Vec<Vec<Cdd>> = sol
        .solutions
        .iter()
        .map(|s| catalog.iter().map(|o| parke_taylor(o, &s.x_dd)).collect())
        .collect();
    let mut entries = vec![0.0; size * size];
    let mut scales = vec![0.0; size * size];
    let mut max_imag_ratio = 0.0f64;
    for i in 0..size {
        for j in 0..size {
            let mut sum_dd = Cdd::zero();
            let mut scale = 0.0;
            for (p, w) in pt.iter().zip(&weights_dd) {
                let t = p[i] * p[j] * w;
                scale += norm_dd(&t);
                sum_dd += t;
            }
            let sum = to_c64(&sum_dd);
            entries[i * size + j] = sum.re;
            scales[i * size + j] = scale;
            if scale > 0.0 {
                max_imag_ratio = max_imag_ratio.max(sum.im.abs() / scale);
            }
        }
    }
    Ok(GramAmplitudeMatrix {
        n: sol.n,
        size,
        entries,
        scales,
        weights,
        max_imag_ratio,
    })
}

/// Exact `|m|`-up-to-sign values for every catalog pair.
pub fn exact_unsigned_matrix(s: &MandelstamMatrix<BigRational>, catalog: &OrderingCatalog) -> Result<Vec<Vec<BigRational>>> {
    let size = catalog.len();
    let upper: Vec<Vec<BigRational>> = (0..size)
        .into_par_iter()
        .map(|i| {
            (i..size)
                .map(|j| amplitude_unsigned(s, catalog.get(i), catalog.get(j)).map(|v| v.value))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut full = vec![vec![BigRational::zero(); size]; size];
    for (i, row) in upper.into_iter().enumerate() {
        for (k, v) in row.into_iter().enumerate() {
            full[i + k][i] = v.clone();
            full[i][i + k] = v;
        }
    }
    Ok(full)
}

/// Entry signs relating the numerical matrix to the exact unsigned sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignMatrix {
    pub size: usize,
    pub signs: Vec<i8>,
}

impl SignMatrix {
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.signs[i * self.size + j]
    }

    /// `sign (.) unsigned`.
    pub fn apply(&self, unsigned: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
        unsigned
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| match self.get(i, j) {
                        -1 => -v.clone(),
                        1 => v.clone(),
                        _ => BigRational::zero(),
                    })
                    .collect()
            })
            .collect()
    }
}

/// Signs of `g` after checking `|g| = |unsigned|` entrywise within `tol`
/// (relative) and that the zero patterns agree.
pub fn sign_inference(g: &GramAmplitudeMatrix, unsigned: &[Vec<BigRational>], tol: f64) -> Result<SignMatrix> {
    if unsigned.len() != g.size {
        return Err(Error::SizeMismatch(unsigned.len(), g.size));
    }
    let mut signs = vec![0i8; g.size * g.size];
    for (i, row) in unsigned.iter().enumerate() {
        for (j, exact) in row.iter().enumerate() {
            let numerical = g.get(i, j);
            let exact_f = exact.to_f64().unwrap_or(f64::NAN);
            let zero_exact = exact.is_zero();
            let ok = if zero_exact {
                g.is_zero(i, j)
            } else {
                !g.is_zero(i, j) && relative_close(numerical.abs(), exact_f.abs(), tol)
            };
            if !ok {
                return Err(Error::MagnitudeMismatch {
                    row: i,
                    col: j,
                    numerical,
                    exact: exact_f,
                });
            }
            if !zero_exact {
                signs[i * g.size + j] = if (numerical < 0.0) == exact.is_negative() { 1 } else { -1 };
            }
        }
    }
    Ok(SignMatrix { size: g.size, signs })
}

/// Worst relative magnitude error over nonzero entries.
pub fn max_relative_error(g: &GramAmplitudeMatrix, unsigned: &[Vec<BigRational>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in unsigned.iter().enumerate() {
        for (j, exact) in row.iter().enumerate() {
            if exact.is_zero() {
                continue;
            }
            let e = exact.to_f64().unwrap_or(f64::NAN).abs();
            worst = worst.max((g.get(i, j).abs() - e).abs() / e);
        }
    }
    worst
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub n: usize,
    pub seed: u64,
    pub size: usize,
    pub solutions: usize,
    pub starts_used: usize,
    pub max_residual: f64,
    pub singular_values: Vec<f64>,
    pub numerical_rank: usize,
    pub rank_bound: usize,
    pub zero_pattern_ok: bool,
    pub max_relative_error: f64,
    pub magnitudes_ok: bool,
    /// Exact rank of the sign-corrected matrix; computed for `n <= 5`.
    pub signed_exact_rank: Option<usize>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.zero_pattern_ok
            && self.magnitudes_ok
            && self.numerical_rank <= self.rank_bound
            && self.max_residual < RESIDUAL_BOUND
            && self.signed_exact_rank.is_none_or(|r| r == self.rank_bound)
    }
}

pub const MAGNITUDE_TOL: f64 = 1e-9;
pub const SIGNED_RANK_MAX_N: usize = 5;

/// Full pipeline for seeded kinematics: solve, assemble, compare against
/// the exact tree sums and the binary intersection matrix.
pub fn verify(n: usize, seed: u64) -> Result<VerificationReport> {
    check_range("n", n, SCATTERING_MIN_N, SCATTERING_MAX_N)?;
    let exact = MandelstamMatrix::<BigRational>::sample(n, seed)?;
    let float = exact.map(|v| v.to_f64().unwrap_or(f64::NAN));
    let sol = solve_scattering(&float, Gauge::default())?;
    let catalog = OrderingCatalog::enumerate(n)?;
    let g = gram_matrix(&sol, &catalog)?;
    let unsigned = exact_unsigned_matrix(&exact, &catalog)?;
    let binary = crate::matrix::BinaryMatrix::build(n)?;
    let size = catalog.len();
    let zero_pattern_ok = (0..size).all(|i| (0..size).all(|j| g.is_zero(i, j) != binary.get(i, j)));
    let max_relative_error = max_relative_error(&g, &unsigned);
    let signs = sign_inference(&g, &unsigned, MAGNITUDE_TOL);
    let magnitudes_ok = signs.is_ok();
    let signed_exact_rank = match signs {
        Ok(signs) if n <= SIGNED_RANK_MAX_N => Some(rational_rank(&signs.apply(&unsigned))),
        _ => None,
    };
    let sv = g.singular_values();
    Ok(VerificationReport {
        schema: 1,
        n,
        seed,
        size,
        solutions: sol.solutions.len(),
        starts_used: sol.starts_used,
        max_residual: sol.solutions.iter().fold(0.0, |m, s| m.max(s.residual)),
        numerical_rank: numerical_rank(&sv, RANK_RATIO),
        singular_values: sv,
        rank_bound: expected_solutions(n),
        zero_pattern_ok,
        max_relative_error,
        magnitudes_ok,
        signed_exact_rank,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub positions: Vec<[f64; 2]>,
    pub residual: f64,
    pub det_phi: [f64; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolutionsFile {
    pub schema: u32,
    pub n: usize,
    pub seed: Option<u64>,
    pub gauge: [f64; 3],
    pub solutions: Vec<SolutionRecord>,
}

impl ScatteringSolutionSet {
    pub fn to_file(&self) -> SolutionsFile {
        SolutionsFile {
            schema: 1,
            n: self.n,
            seed: self.kinematics.seed(),
            gauge: self.gauge.0,
            solutions: self
                .solutions
                .iter()
                .map(|s| SolutionRecord {
                    positions: s.x.iter().map(|z| [z.re, z.im]).collect(),
                    residual: s.residual,
                    det_phi: [s.det_phi.re, s.det_phi.im],
                })
                .collect(),
        }
    }
}
