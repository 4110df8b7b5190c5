use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;

use tropgr_core::amplitudes::KinematicsFile;
use tropgr_core::analytics::{density_csv, density_table, klt_density_table, DensityRow};
use tropgr_core::intersection::count_bruteforce;
use tropgr_core::klt::{block_density_exact, block_density_formula, block_partition, klt_sets, BLOCK_DENSITY_EXACT_MAX_N};
use tropgr_core::matrix::MatrixKind;
use tropgr_core::scalar::format_rational;
use tropgr_core::scattering::{solve_scattering, Gauge};
use tropgr_core::search::{
    max_permutation_submatrix, symmetric_degree, verify_clique_witness, verify_witness, BudgetedSearch, Checkpoint,
    CliqueWitness, SearchOptions,
};
use tropgr_core::tree::ALL_TREES_MAX_N;
use tropgr_core::{
    amplitude_unsigned, count_dp, fast_nonzero, polygon_decomposition, BinaryMatrix, Error, ExactMandelstam,
    IntersectionMatrix, Ordering, OrderingCatalog,
};

use crate::cache;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input files; exit code 2.
    Input(String),
    /// A computed result failed its own check; exit code 3.
    Verification(String),
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) | CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SolverFailure { .. }
            | Error::SingularHessian(_)
            | Error::MagnitudeMismatch { .. }
            | Error::RetryExhausted(_) => CliError::Verification(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn emit(output: Option<&Path>, body: &str) -> CliResult {
    match output {
        Some(p) => std::fs::write(p, body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn emit_json<T: Serialize>(output: Option<&Path>, value: &T) -> CliResult {
    emit(output, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn parse_ordering(s: &str, n: Option<usize>) -> Result<Ordering, CliError> {
    let o: Ordering = s.parse()?;
    match n {
        Some(n) if n != o.n() => Err(CliError::Input(format!("ordering {s} has {} labels, expected {n}", o.n()))),
        _ => Ok(o),
    }
}

#[derive(Args, Debug)]
pub struct OrderingsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

pub fn orderings(a: OrderingsArgs) -> CliResult {
    let catalog = OrderingCatalog::enumerate(a.n)?;
    match a.format {
        Format::Json => emit_json(
            None,
            &json!({"schema": 1, "n": a.n, "orderings": catalog.iter().map(|o| o.to_string()).collect::<Vec<_>>()}),
        ),
        _ => {
            let mut body = String::new();
            for o in catalog.iter() {
                body.push_str(&o.to_string());
                body.push('\n');
            }
            emit(None, &body)
        }
    }
}

#[derive(Args, Debug)]
pub struct IntersectArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    /// Write the full matrix over the catalog instead of a single pair.
    #[arg(long)]
    matrix: bool,
    /// Zero/non-zero only (cherry pruning).
    #[arg(long)]
    binary: bool,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

pub fn intersect(a: IntersectArgs) -> CliResult {
    if a.matrix {
        return intersect_matrix(&a);
    }
    let (Some(alpha), Some(beta)) = (&a.alpha, &a.beta) else {
        return Err(CliError::Input("pair mode needs --alpha and --beta (or use --matrix)".into()));
    };
    let x = parse_ordering(alpha, a.n)?;
    let y = parse_ordering(beta, Some(x.n()))?;
    let count = count_dp(&x, &y)?;
    if x.n() <= ALL_TREES_MAX_N {
        let oracle = count_bruteforce(&x, &y)?;
        if oracle != count {
            return Err(CliError::Verification(format!("interval count {count} vs tree enumeration {oracle}")));
        }
    }
    let nonzero = fast_nonzero(&x, &y)?;
    if nonzero != (count != 0) {
        return Err(CliError::Verification(format!("cherry pruning says {nonzero}, count is {count}")));
    }
    let decomposition = polygon_decomposition(&x, &y)?;
    let agrees = decomposition.check(count).is_ok();
    if !agrees {
        eprintln!("warning: diagram rule {decomposition} disagrees with count {count}");
    }
    let value = if a.binary { u64::from(nonzero) } else { count };
    match a.format {
        Format::Json => emit_json(
            a.output.as_deref(),
            &json!({
                "schema": 1,
                "n": x.n(),
                "alpha": x.to_string(),
                "beta": y.to_string(),
                "binary": a.binary,
                "value": value,
                "decomposition": decomposition.to_string(),
                "diagram_rule_agrees": agrees,
            }),
        ),
        _ => emit(a.output.as_deref(), &format!("{value}\ndecomposition: {decomposition}\n")),
    }
}

fn intersect_matrix(a: &IntersectArgs) -> CliResult {
    let n = a.n.ok_or_else(|| CliError::Input("--matrix needs --n".into()))?;
    let kind = if a.binary { MatrixKind::Binary } else { MatrixKind::Counts };
    let path = match &a.output {
        Some(p) => p.clone(),
        None => cache::cache_path(&cache::cache_dir(a.cache_dir.as_deref()), n, kind),
    };
    if a.binary {
        cache::write_binary(&BinaryMatrix::build(n)?, &path)?;
    } else {
        cache::write_counts(&IntersectionMatrix::build(n)?, &path)?;
    }
    println!("{}", path.display());
    Ok(())
}

#[derive(Args, Debug)]
pub struct KltArgs {
    #[arg(long)]
    n: usize,
    /// Also compute the identity block's density by enumeration.
    #[arg(long)]
    density: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn klt(a: KltArgs) -> CliResult {
    let sets = klt_sets(a.n)?;
    let partition = block_partition(a.n)?;
    let raw = |v: &[u8]| v.iter().map(u8::to_string).collect::<Vec<_>>().join(",");
    let mut out = json!({
        "schema": 1,
        "n": a.n,
        "m": sets.m,
        "block_size": partition.d,
        "blocks": partition.blocks.len(),
        "set_a": sets.set_a.iter().map(|o| raw(&o.raw)).collect::<Vec<_>>(),
        "set_b": sets.set_b.iter().map(|o| raw(&o.raw)).collect::<Vec<_>>(),
    });
    if a.n >= 7 {
        out["block_density_formula"] = json!(format_rational(&block_density_formula(a.n)?));
    }
    if a.density {
        if a.n > BLOCK_DENSITY_EXACT_MAX_N {
            return Err(CliError::Input(format!("--density is limited to n <= {BLOCK_DENSITY_EXACT_MAX_N}")));
        }
        out["block_density"] = json!(format_rational(&block_density_exact(a.n)?));
    }
    emit_json(a.output.as_deref(), &out)
}

fn parse_budget(s: &str) -> Result<u64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !(v.is_finite() && v >= 1.0 && v <= u64::MAX as f64) {
        return Err(format!("{s:?} is not a positive node count"));
    }
    Ok(v as u64)
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    n: usize,
    /// Node budget (accepts `1e9`); the result is then a lower bound.
    #[arg(long, value_parser = parse_budget)]
    budget: Option<u64>,
    /// Wall-clock limit in seconds for budgeted runs. Output then depends
    /// on machine speed.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Equal row and column sets: largest pairwise non-intersecting set.
    #[arg(long)]
    symmetric: bool,
    /// Accept any maximum witness instead of the lexicographically smallest.
    #[arg(long)]
    any_witness: bool,
    /// Search one subproblem per dihedral orbit.
    #[arg(long)]
    orbits: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    heuristic_chains: usize,
    #[arg(long, default_value_t = 20_000)]
    heuristic_moves: u64,
    /// Where to save the frontier if the budget runs out.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    resume: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

const SEARCH_CHUNK: u64 = 10_000;

pub fn search(a: SearchArgs) -> CliResult {
    let m = match cache::configured_dir(a.cache_dir.as_deref()) {
        Some(dir) => cache::binary_matrix(&dir, a.n)?,
        None => BinaryMatrix::build(a.n)?,
    };
    if a.symmetric {
        return search_symmetric(&m, a.output.as_deref());
    }
    let opts = SearchOptions {
        node_budget: a.budget,
        deterministic: !a.any_witness,
        orbit_reduction: a.orbits,
        heuristic_chains: a.heuristic_chains,
        heuristic_moves: a.heuristic_moves,
        seed: a.seed,
    };
    let budgeted = a.budget.is_some() || a.time_limit.is_some() || a.resume.is_some();
    let witness = if budgeted {
        let mut search = match &a.resume {
            Some(p) => BudgetedSearch::resume(&m, &Checkpoint::read(p)?)?,
            None => BudgetedSearch::new(&m, &opts)?,
        };
        let started = Instant::now();
        let limit = a.time_limit.map(Duration::from_secs_f64);
        let mut left = a.budget.unwrap_or(u64::MAX);
        while left > 0 && !search.is_done() && limit.is_none_or(|l| started.elapsed() < l) {
            let before = search.witness().nodes;
            search.run(left.min(SEARCH_CHUNK))?;
            left = left.saturating_sub(search.witness().nodes - before);
        }
        if let Some(p) = &a.checkpoint {
            if !search.is_done() {
                search.checkpoint().write(p)?;
            }
        }
        search.witness()
    } else {
        max_permutation_submatrix(&m, &opts)?
    };
    check_witness(&m, &witness)?;
    if witness.lower_bound {
        eprintln!("lower-bound: size >= {} after {} nodes", witness.size(), witness.nodes);
    }
    emit_json(a.output.as_deref(), &witness.to_file(m.catalog()))
}

fn check_witness(m: &BinaryMatrix, w: &CliqueWitness) -> CliResult {
    let bound: usize = (1..=m.n() - 3).product();
    if w.size() > bound {
        return Err(CliError::Verification(format!("witness size {} exceeds (n-3)! = {bound}", w.size())));
    }
    if !w.is_permutation_in(m) {
        return Err(CliError::Verification("witness is not a permutation submatrix".into()));
    }
    let report = verify_clique_witness(w, m.catalog())?;
    if !report.permutation_diagonal || report.rank != w.size() {
        return Err(CliError::Verification("recomputed intersection numbers are not diagonal".into()));
    }
    Ok(())
}

fn search_symmetric(m: &BinaryMatrix, output: Option<&Path>) -> CliResult {
    let set = symmetric_degree(m)?;
    let orderings: Vec<Ordering> = set.iter().map(|&i| m.catalog().get(i).clone()).collect();
    let report = verify_witness(&orderings, &orderings)?;
    if !report.permutation_diagonal {
        return Err(CliError::Verification("symmetric witness has a non-zero off-diagonal entry".into()));
    }
    emit_json(
        output,
        &json!({
            "schema": 1,
            "n": m.n(),
            "symmetric": true,
            "size": set.len(),
            "orderings": orderings.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
            "diagonal": (0..set.len()).map(|i| report.counts[i][i]).collect::<Vec<_>>(),
            "lower_bound": false,
        }),
    )
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn verify(a: VerifyArgs) -> CliResult {
    let report = tropgr_core::scattering::verify(a.n, a.seed)?;
    emit_json(a.output.as_deref(), &report)?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "n = {} seed = {}: rank {} (bound {}), zero pattern {}, magnitudes {}",
            a.n, a.seed, report.numerical_rank, report.rank_bound, report.zero_pattern_ok, report.magnitudes_ok
        )))
    }
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[arg(long)]
    min: Option<usize>,
    #[arg(long)]
    max: Option<usize>,
    /// KLT block densities instead of full-matrix densities.
    #[arg(long)]
    klt: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn density(a: DensityArgs) -> CliResult {
    let rows: Vec<DensityRow> = if a.klt {
        klt_density_table(a.min.unwrap_or(7), a.max.unwrap_or(30))?
    } else {
        density_table(a.min.unwrap_or(5), a.max.unwrap_or(19))?
    };
    match a.format {
        Format::Json => emit_json(a.output.as_deref(), &json!({"schema": 1, "klt": a.klt, "rows": rows})),
        _ => emit(a.output.as_deref(), &density_csv(&rows)),
    }
}

fn kinematics(n: usize, seed: u64, file: Option<&Path>) -> Result<ExactMandelstam, CliError> {
    match file {
        Some(p) => {
            let f: KinematicsFile = serde_json::from_str(&std::fs::read_to_string(p)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            let s = ExactMandelstam::from_file(&f)?;
            if s.n() != n {
                return Err(CliError::Input(format!("kinematics file has n = {}, expected {n}", s.n())));
            }
            Ok(s)
        }
        None => Ok(ExactMandelstam::sample(n, seed)?),
    }
}

#[derive(Args, Debug)]
pub struct AmplitudeArgs {
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    beta: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exact kinematics JSON instead of seeded sampling.
    #[arg(long)]
    kinematics: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn amplitude(a: AmplitudeArgs) -> CliResult {
    let x = parse_ordering(&a.alpha, None)?;
    let y = parse_ordering(&a.beta, Some(x.n()))?;
    let s = kinematics(x.n(), a.seed, a.kinematics.as_deref())?;
    let amp = amplitude_unsigned(&s, &x, &y)?;
    emit_json(
        a.output.as_deref(),
        &json!({
            "schema": 1,
            "n": x.n(),
            "seed": s.seed(),
            "alpha": x.to_string(),
            "beta": y.to_string(),
            "value": format_rational(&amp.value),
            "terms": amp.term_count,
        }),
    )
}

fn parse_gauge(s: &str) -> Result<Gauge, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("bad gauge value {t:?}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c] if a != b && b != c && a != c && v.iter().all(|x| x.is_finite()) => Ok(Gauge([a, b, c])),
        _ => Err("gauge needs three distinct finite values".into()),
    }
}

#[derive(Args, Debug)]
pub struct ScatteqArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    kinematics: Option<PathBuf>,
    /// Fixed positions of particles 1, 2, 3.
    #[arg(long, value_parser = parse_gauge, default_value = "0,1,2")]
    gauge: Gauge,
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn scatteq(a: ScatteqArgs) -> CliResult {
    let exact = kinematics(a.n, a.seed, a.kinematics.as_deref())?;
    let float = exact.map(|v| num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::NAN));
    let sol = solve_scattering(&float, a.gauge)?;
    emit_json(a.output.as_deref(), &sol.to_file())
}
