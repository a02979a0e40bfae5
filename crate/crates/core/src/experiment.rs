//! Sweep configuration, model problems, convergence sweeps and order fits.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{bss_product, trotter_product, AbstractFamily};
use crate::error::{Error, Result};
use crate::families::{assemble_decomposition, make_family, Decomposition, FamilyKind};
use crate::operator::{c, Operator, StateVector, I};
use crate::oracle::stone_propagator;
use crate::quasi_feynman::{binomial_formula, chernoff_iterate, series_formula};
use crate::quasi_feynman::{DEFAULT_BINOMIAL_POWER, DEFAULT_SERIES_ORDER, DEFAULT_TERM_CAP};

/// Errors below this are treated as exact and not fitted.
pub const EXACT_ERROR: f64 = 1e-13;

/// Exact CSV header.
pub const CSV_HEADER: &str = "method,t,n,oracle_error,norm_drift,seconds";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    /// Pauli matrices `σ_z, σ_x, σ_y` (cycled) on `C^2`.
    Pauli,
    /// Seeded random Hermitian terms, each scaled to spectral norm 1.
    RandomHermitian,
    /// Periodic second-difference Laplacian plus a diagonal potential.
    LaplacianPlusPotential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    QfExp,
    QfSeries,
    QfBinomial,
    Trotter,
    Bss,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::QfExp,
        Method::QfSeries,
        Method::QfBinomial,
        Method::Trotter,
        Method::Bss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::QfExp => "qf_exp",
            Method::QfSeries => "qf_series",
            Method::QfBinomial => "qf_binomial",
            Method::Trotter => "trotter",
            Method::Bss => "bss",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub dim: usize,
    pub kind: ProblemKind,
    #[serde(default)]
    pub seed: u64,
    /// Diagonal potential, `laplacian_plus_potential` only. Zero if omitted.
    #[serde(default)]
    pub potential: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionConfig {
    pub coefficients: Vec<f64>,
    pub families: Vec<FamilyKind>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub t: f64,
    pub n_values: Vec<u64>,
    pub methods: Vec<Method>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FormulaConfig {
    pub series_j: u64,
    pub binomial_p: u64,
    pub term_cap: u64,
}

impl Default for FormulaConfig {
    fn default() -> Self {
        Self {
            series_j: DEFAULT_SERIES_ORDER,
            binomial_p: DEFAULT_BINOMIAL_POWER,
            term_cap: DEFAULT_TERM_CAP,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv_path: Option<PathBuf>,
}

/// Full sweep description, read from TOML. Unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub problem: ProblemConfig,
    pub decomposition: DecompositionConfig,
    pub sweep: SweepSection,
    #[serde(default)]
    pub formula: FormulaConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl SweepConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let reject = |msg: String| Err(Error::Config(msg));
        let p = &self.problem;
        if p.dim == 0 {
            return reject("problem.dim must be at least 1".into());
        }
        if p.kind == ProblemKind::Pauli && p.dim != 2 {
            return reject(format!("pauli problems have dim 2, got {}", p.dim));
        }
        match (&p.potential, p.kind) {
            (Some(v), ProblemKind::LaplacianPlusPotential) => {
                if v.len() != p.dim {
                    return reject(format!("potential has {} entries for dim {}", v.len(), p.dim));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return reject("potential entries must be finite".into());
                }
            }
            (Some(_), _) => return reject("potential is only used by laplacian_plus_potential".into()),
            (None, _) => {}
        }

        let d = &self.decomposition;
        if d.coefficients.is_empty() {
            return reject("decomposition needs at least one term".into());
        }
        if d.coefficients.len() != d.families.len() {
            return reject(format!(
                "{} coefficients but {} families",
                d.coefficients.len(),
                d.families.len()
            ));
        }
        if p.kind == ProblemKind::LaplacianPlusPotential && d.coefficients.len() != 2 {
            return reject("laplacian_plus_potential has exactly two terms".into());
        }

        let s = &self.sweep;
        if !s.t.is_finite() {
            return reject("sweep.t must be finite".into());
        }
        if s.n_values.is_empty() || s.n_values[0] == 0 {
            return reject("sweep.n_values must be non-empty and positive".into());
        }
        if s.n_values.windows(2).any(|w| w[1] <= w[0]) {
            return reject("sweep.n_values must be strictly increasing".into());
        }
        if s.methods.is_empty() {
            return reject("sweep.methods must not be empty".into());
        }
        for (i, m) in s.methods.iter().enumerate() {
            if s.methods[..i].contains(m) {
                return reject(format!("method {m} listed twice"));
            }
        }

        let f = &self.formula;
        if f.binomial_p == 0 {
            return reject("formula.binomial_p must be at least 1".into());
        }
        Ok(())
    }

    /// Time range every family must cover: `|t| / min(n)`.
    pub fn family_range(&self) -> f64 {
        let t = self.sweep.t.abs();
        if t == 0.0 {
            1.0
        } else {
            t / self.sweep.n_values[0] as f64
        }
    }
}

/// A decomposition and initial state ready to propagate.
#[derive(Clone, Debug)]
pub struct Problem {
    pub decomposition: Decomposition,
    pub psi0: StateVector,
}

/// Random Hermitian operator with spectral norm 1.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> Result<Operator> {
    let raw = Operator::from_fn(dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))?;
    let herm = (&raw + &raw.adjoint()).scale_real(0.5);
    let norm = herm.norm();
    if norm == 0.0 {
        return Err(Error::InvalidArgument("degenerate random draw".into()));
    }
    Ok(herm.scale_real(1.0 / norm))
}

/// Seeded stand-alone variant of [`random_hermitian`].
pub fn seeded_random_hermitian(dim: usize, seed: u64) -> Result<Operator> {
    random_hermitian(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Periodic second-difference operator on `dim` points with spacing
/// `h = 2π / dim`.
pub fn periodic_laplacian(dim: usize) -> Result<Operator> {
    let h = 2.0 * std::f64::consts::PI / dim as f64;
    let inv_h2 = 1.0 / (h * h);
    let mut m = nalgebra::DMatrix::<num_complex::Complex64>::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] += c(-2.0 * inv_h2, 0.0);
        m[(i, (i + 1) % dim)] += c(inv_h2, 0.0);
        m[(i, (i + dim - 1) % dim)] += c(inv_h2, 0.0);
    }
    Operator::new(m)
}

fn term_generators(cfg: &SweepConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Operator>> {
    let p = &cfg.problem;
    let m = cfg.decomposition.coefficients.len();
    match p.kind {
        ProblemKind::Pauli => {
            let cycle = [Operator::pauli_z(), Operator::pauli_x(), Operator::pauli_y()];
            Ok((0..m).map(|k| cycle[k % 3].clone()).collect())
        }
        ProblemKind::RandomHermitian => (0..m).map(|_| random_hermitian(p.dim, rng)).collect(),
        ProblemKind::LaplacianPlusPotential => {
            let v = p.potential.clone().unwrap_or_else(|| vec![0.0; p.dim]);
            Ok(vec![periodic_laplacian(p.dim)?, Operator::diagonal(&v)?])
        }
    }
}

fn initial_state(cfg: &SweepConfig, rng: &mut ChaCha8Rng) -> Result<StateVector> {
    let dim = cfg.problem.dim;
    let raw = match cfg.problem.kind {
        ProblemKind::Pauli => StateVector::from_real(&[1.0, 0.0])?,
        ProblemKind::RandomHermitian => StateVector::new(
            (0..dim)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        )?,
        ProblemKind::LaplacianPlusPotential => {
            // Gaussian packet centred on the circle with unit momentum.
            let h = 2.0 * std::f64::consts::PI / dim as f64;
            StateVector::new(
                (0..dim)
                    .map(|j| {
                        let x = j as f64 * h;
                        let d = x - std::f64::consts::PI;
                        num_complex::Complex64::from_polar((-d * d).exp(), x)
                    })
                    .collect(),
            )?
        }
    };
    raw.normalized()
}

/// Builds the decomposition and normalized initial state described by the
/// configuration. Construction failures are reported as config rejections.
pub fn build_problem(cfg: &SweepConfig) -> Result<Problem> {
    cfg.validate()?;
    let as_config = |e: Error| match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.problem.seed);
    let generators = term_generators(cfg, &mut rng).map_err(as_config)?;
    let t_max = cfg.family_range();
    let families = generators
        .iter()
        .zip(&cfg.decomposition.families)
        .map(|(l, &kind)| make_family(kind, l, t_max))
        .collect::<Result<Vec<_>>>()
        .map_err(as_config)?;
    let samples = [t_max, 0.5 * t_max, 0.1 * t_max];
    let decomposition =
        assemble_decomposition(&cfg.decomposition.coefficients, families, &samples).map_err(as_config)?;
    let psi0 = initial_state(cfg, &mut rng).map_err(as_config)?;
    Ok(Problem {
        decomposition,
        psi0,
    })
}

/// One successful (method, n) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub method: Method,
    pub t: f64,
    pub n: u64,
    pub oracle_error: f64,
    pub norm_drift: f64,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FailedCell {
    pub method: Method,
    pub n: u64,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FittedOrder {
    /// Every error is below [`EXACT_ERROR`].
    Exact,
    /// Least-squares slope of `log(error)` against `log(1/n)`.
    Slope(f64),
}

impl fmt::Display for FittedOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FittedOrder::Exact => f.write_str("exact"),
            FittedOrder::Slope(s) => write!(f, "{s:.4}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    /// Sorted by (method, n).
    pub rows: Vec<SweepRow>,
    pub failures: Vec<FailedCell>,
    /// `None` when a method has too few usable rows to fit.
    pub fitted_orders: BTreeMap<Method, Option<FittedOrder>>,
}

impl ConvergenceReport {
    pub fn rows_for(&self, method: Method) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.method == method)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv_to(file)
    }

    pub fn write_csv_to(&self, sink: impl std::io::Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(CSV_HEADER.split(',')).map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.method.name().to_string(),
                r.t.to_string(),
                r.n.to_string(),
                r.oracle_error.to_string(),
                r.norm_drift.to_string(),
                r.seconds.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn run_cell(problem: &Problem, cfg: &SweepConfig, method: Method, n: u64) -> Result<(StateVector, f64)> {
    let dec = &problem.decomposition;
    let psi0 = &problem.psi0;
    let t = cfg.sweep.t;
    let f = &cfg.formula;
    let state = match method {
        Method::QfExp => chernoff_iterate(dec, t, n, psi0)?,
        Method::QfSeries => series_formula(dec, t, n, f.series_j, psi0, f.term_cap)?.state,
        Method::QfBinomial => binomial_formula(dec, t, n, f.binomial_p, psi0, f.term_cap)?.state,
        Method::Trotter => trotter_product(dec, t, n, psi0)?,
        Method::Bss => {
            let fams = dec
                .coefficients()
                .iter()
                .zip(dec.families())
                .map(|(a, fam)| AbstractFamily::from_kind(fam.kind(), &fam.generator().scale(I * *a)))
                .collect::<Result<Vec<_>>>()?;
            bss_product(&fams, t, n, psi0)?.0
        }
    };
    let drift = (state.norm() - psi0.norm()).abs();
    Ok((state, drift))
}

/// Runs every (method, n) cell against the spectral oracle. Cell failures
/// are collected rather than aborting the sweep.
pub fn run_sweep(cfg: &SweepConfig) -> Result<ConvergenceReport> {
    let problem = build_problem(cfg)?;
    let t = cfg.sweep.t;
    let exact = stone_propagator(problem.decomposition.generator(), t)?.apply(&problem.psi0)?;

    let cells: Vec<(Method, u64)> = cfg
        .sweep
        .methods
        .iter()
        .flat_map(|&m| cfg.sweep.n_values.iter().map(move |&n| (m, n)))
        .collect();
    let outcomes: Vec<std::result::Result<SweepRow, FailedCell>> = cells
        .into_par_iter()
        .map(|(method, n)| {
            let start = Instant::now();
            match run_cell(&problem, cfg, method, n) {
                Ok((state, norm_drift)) => Ok(SweepRow {
                    method,
                    t,
                    n,
                    oracle_error: state.distance(&exact),
                    norm_drift,
                    seconds: start.elapsed().as_secs_f64(),
                }),
                Err(e) => Err(FailedCell {
                    method,
                    n,
                    reason: e.to_string(),
                }),
            }
        })
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => rows.push(r),
            Err(f) => failures.push(f),
        }
    }
    rows.sort_by(|a, b| (a.method.name(), a.n).cmp(&(b.method.name(), b.n)));
    failures.sort_by(|a, b| (a.method.name(), a.n).cmp(&(b.method.name(), b.n)));

    let mut report = ConvergenceReport {
        rows,
        failures,
        fitted_orders: BTreeMap::new(),
    };
    for &m in &cfg.sweep.methods {
        let order = fit_order(&report, m).ok();
        report.fitted_orders.insert(m, order);
    }
    Ok(report)
}

/// Convergence order of one method in a report.
pub fn fit_order(report: &ConvergenceReport, method: Method) -> Result<FittedOrder> {
    let points: Vec<(u64, f64)> = report.rows_for(method).map(|r| (r.n, r.oracle_error)).collect();
    fit_order_points(&points)
}

/// Least-squares slope of `log(error)` against `log(1/n)`. Points with
/// error below [`EXACT_ERROR`] are dropped; if all are, the method is
/// reported as exact.
pub fn fit_order_points(points: &[(u64, f64)]) -> Result<FittedOrder> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("no rows to fit".into()));
    }
    if points.iter().all(|&(_, e)| e < EXACT_ERROR) {
        return Ok(FittedOrder::Exact);
    }
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(n, e)| n > 0 && e >= EXACT_ERROR && e.is_finite())
        .map(|&(n, e)| (-(n as f64).ln(), e.ln()))
        .collect();
    if usable.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 rows with error >= {EXACT_ERROR:e}, have {}",
            usable.len()
        )));
    }
    let k = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / k;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all rows share the same n".into()));
    }
    Ok(FittedOrder::Slope(sxy / sxx))
}
