//! Quasi-Feynman approximations of `e^{itL} f`.
//!
//! The building block is the unitary family
//!
//! ```text
//! R(t) = exp[ i sign(t) (S(|t|) - aI) ],   S(t) = Σ a_k S_k(t),   a = Σ a_k
//! ```
//!
//! whose `n`-th power at `t/n` converges strongly to `e^{itL}`. Expanding the
//! exponential either as a power series or as an Euler limit `(I + A/p)^p`
//! and distributing powers of `Σ_{k=1}^{m+1} a_k S_k` (with `a_{m+1} = -a`,
//! `S_{m+1} = I`) over ordered index tuples yields the two nested-sum
//! formulas implemented by [`series_formula`] and [`binomial_formula`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{ChernoffFamily, Decomposition};
use crate::operator::{c, Operator, StateVector, I};
use crate::oracle::{exp_bounded, stone_propagator};

/// Default truncation order `j` of the exponential series.
pub const DEFAULT_SERIES_ORDER: u64 = 25;
/// Default Euler power `p` of the binomial formula.
pub const DEFAULT_BINOMIAL_POWER: u64 = 4096;
/// Default cap on literal multinomial enumeration, `3^12`.
pub const DEFAULT_TERM_CAP: u64 = 531_441;

/// `sign(0) = 0`, so `R(0) = I`.
pub fn sign(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `(R(t/n))^n f` with `R` formed by the operator exponential.
    OperatorExp,
    /// Truncated exponential series in the multinomial expansion.
    Series,
    /// Euler-limit binomial expansion.
    Binomial,
}

/// How a power of the augmented sum was evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MultinomialPath {
    /// Every ordered index tuple enumerated separately.
    Literal,
    /// The augmented sum assembled once and applied repeatedly.
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuasiFeynmanConfig {
    /// Outer iteration count.
    pub n: u64,
    /// Series order `j` or Euler power `p`; unused by `OperatorExp`.
    pub truncation: u64,
    pub variant: Variant,
    /// Largest `(m+1)^truncation` enumerated literally.
    pub term_cap: u64,
}

impl QuasiFeynmanConfig {
    pub fn operator_exp(n: u64) -> Self {
        Self {
            n,
            truncation: 0,
            variant: Variant::OperatorExp,
            term_cap: DEFAULT_TERM_CAP,
        }
    }

    pub fn series(n: u64, order: u64) -> Self {
        Self {
            n,
            truncation: order,
            variant: Variant::Series,
            term_cap: DEFAULT_TERM_CAP,
        }
    }

    pub fn binomial(n: u64, power: u64) -> Self {
        Self {
            n,
            truncation: power,
            variant: Variant::Binomial,
            term_cap: DEFAULT_TERM_CAP,
        }
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("iteration count n must be >= 1".into()))
    } else {
        Ok(())
    }
}

fn check_dim(dec: &Decomposition, f: &StateVector) -> Result<()> {
    if f.dim() == dec.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: dec.dim(),
            found: f.dim(),
        })
    }
}

/// `A(t) = i sign(t) (S(|t|) - aI)`, the exponent of `R(t)`.
pub fn r_exponent(dec: &Decomposition, t: f64) -> Result<Operator> {
    if t == 0.0 {
        return Ok(Operator::zeros(dec.dim()));
    }
    Ok(dec.shifted_sum(t.abs())?.scale(I * sign(t)))
}

/// `R(t) = exp[i sign(t) (S(|t|) - aI)]`.
pub fn r_operator(dec: &Decomposition, t: f64) -> Result<Operator> {
    if t == 0.0 {
        return Ok(Operator::identity(dec.dim()));
    }
    Ok(exp_bounded(&r_exponent(dec, t)?))
}

/// `t -> R(t)` on `t >= 0` as a family with claimed generator `iL`.
pub fn r_family(dec: &Decomposition) -> Result<ChernoffFamily> {
    let owned = dec.clone();
    ChernoffFamily::custom(
        "R",
        dec.generator().scale(I),
        dec.t_max(),
        move |t| r_operator(&owned, t),
    )
}

/// `(R(t/n))^n f`, with `R(t/n)` formed once and applied `n` times.
pub fn chernoff_iterate(dec: &Decomposition, t: f64, n: u64, f: &StateVector) -> Result<StateVector> {
    check_n(n)?;
    check_dim(dec, f)?;
    let r = r_operator(dec, t / n as f64)?;
    let mut v = f.clone();
    for _ in 0..n {
        v = r.apply(&v)?;
    }
    Ok(v)
}

/// Both evaluations of `(Σ_{k=1}^{m+1} a_k S_k(|t|/n))^p f`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultinomialPower {
    pub literal: StateVector,
    pub closed: StateVector,
}

fn literal_count(terms: usize, depth: u64) -> u128 {
    u32::try_from(depth)
        .ok()
        .and_then(|d| (terms as u128).checked_pow(d))
        .unwrap_or(u128::MAX)
}

fn check_cap(terms: usize, depth: u64, cap: u64) -> Result<()> {
    let required = literal_count(terms, depth);
    if required > cap as u128 {
        Err(Error::TermCapExceeded { required, cap })
    } else {
        Ok(())
    }
}

/// `Σ_d w_d Σ_{|κ| = d} a_{κ_1}…a_{κ_d} S_{κ_1}∘…∘S_{κ_d} f`, enumerating
/// every tuple `κ` depth-first and composing right to left.
fn literal_weighted_sum(terms: &[(f64, Operator)], weights: &[Complex64], f: &StateVector) -> Result<StateVector> {
    fn visit(
        terms: &[(f64, Operator)],
        weights: &[Complex64],
        depth: usize,
        partial: &StateVector,
        product: f64,
        acc: &mut StateVector,
    ) -> Result<()> {
        acc.axpy(weights[depth] * product, partial);
        if depth + 1 < weights.len() {
            for (a, s) in terms {
                let next = s.apply(partial)?;
                visit(terms, weights, depth + 1, &next, product * a, acc)?;
            }
        }
        Ok(())
    }

    let mut acc = StateVector::zeros(f.dim());
    visit(terms, weights, 0, f, 1.0, &mut acc)?;
    Ok(acc)
}

/// `Σ_d c_d B^d f` where `c_0 = 1` and `c_{d+1} = c_d · ratios[d]`.
///
/// The ratio is folded into the running vector `c_d B^d f` at every step, so
/// coefficients such as `p! / (p^d d! (p-d)!)` that overflow on their own are
/// never formed.
fn closed_recurrence_sum(b: &Operator, ratios: &[Complex64], f: &StateVector) -> Result<StateVector> {
    let mut acc = f.clone();
    let mut v = f.clone();
    for &r in ratios {
        v = b.apply(&v)?.scale(r);
        acc.axpy(c(1.0, 0.0), &v);
    }
    Ok(acc)
}

fn unit_weight_at(p: u64) -> Vec<Complex64> {
    let mut w = vec![Complex64::default(); p as usize + 1];
    w[p as usize] = c(1.0, 0.0);
    w
}

fn closed_power(b: &Operator, p: u64, f: &StateVector) -> Result<StateVector> {
    let mut v = f.clone();
    for _ in 0..p {
        v = b.apply(&v)?;
    }
    Ok(v)
}

fn cumulative_weights(ratios: &[Complex64]) -> Vec<Complex64> {
    let mut w = Vec::with_capacity(ratios.len() + 1);
    let mut acc = c(1.0, 0.0);
    w.push(acc);
    for &r in ratios {
        acc *= r;
        w.push(acc);
    }
    w
}

/// The closed path alone: `B^p f` with `B = S(|t|/n) - aI`.
pub fn multinomial_power_closed(
    dec: &Decomposition,
    t: f64,
    n: u64,
    p: u64,
    f: &StateVector,
) -> Result<StateVector> {
    check_n(n)?;
    check_dim(dec, f)?;
    closed_power(&dec.shifted_sum(t.abs() / n as f64)?, p, f)
}

/// `(Σ_{k=1}^{m+1} a_k S_k(|t|/n))^p f` by literal enumeration of all
/// `(m+1)^p` ordered tuples and by the closed power, for cross-checking.
pub fn multinomial_power(
    dec: &Decomposition,
    t: f64,
    n: u64,
    p: u64,
    f: &StateVector,
    term_cap: u64,
) -> Result<MultinomialPower> {
    check_n(n)?;
    check_dim(dec, f)?;
    check_cap(dec.terms() + 1, p, term_cap)?;
    let tau = t.abs() / n as f64;
    let weights = unit_weight_at(p);
    let literal = literal_weighted_sum(&dec.augmented_terms(tau)?, &weights, f)?;
    let closed = closed_power(&dec.shifted_sum(tau)?, p, f)?;
    Ok(MultinomialPower { literal, closed })
}

/// Evaluates `Σ_d c_d (Σ a_k S_k)^d f` for coefficients given by their
/// successive ratios, literally when the deepest level fits under
/// `term_cap` and through the closed power otherwise.
fn expansion(
    dec: &Decomposition,
    tau: f64,
    ratios: &[Complex64],
    f: &StateVector,
    term_cap: u64,
) -> Result<(StateVector, MultinomialPath)> {
    if check_cap(dec.terms() + 1, ratios.len() as u64, term_cap).is_ok() {
        let terms = dec.augmented_terms(tau)?;
        let weights = cumulative_weights(ratios);
        Ok((literal_weighted_sum(&terms, &weights, f)?, MultinomialPath::Literal))
    } else {
        let b = dec.shifted_sum(tau)?;
        Ok((closed_recurrence_sum(&b, ratios, f)?, MultinomialPath::Closed))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesResult {
    pub state: StateVector,
    /// `Σ_{p>j} (n ||B||)^p / p! · ||f||`.
    pub remainder_bound: f64,
    pub path: MultinomialPath,
}

/// Tail `Σ_{p > j} x^p / p!` of the exponential series, `x >= 0`.
pub fn exp_series_tail(x: f64, j: u64) -> f64 {
    let mut term = 1.0_f64;
    for p in 1..=j {
        term *= x / p as f64;
    }
    let mut tail = 0.0;
    let mut p = j + 1;
    loop {
        term *= x / p as f64;
        tail += term;
        if (p as f64 > x && term <= 1e-17 * tail) || term == 0.0 || p > j + 100_000 {
            return tail;
        }
        p += 1;
    }
}

/// Truncated exponential-series formula at fixed `n`:
///
/// `Σ_{p=0}^{j} (i n sign(t))^p / p! · (Σ_{k=1}^{m+1} a_k S_k(|t|/n))^p f`.
pub fn series_formula(
    dec: &Decomposition,
    t: f64,
    n: u64,
    j: u64,
    f: &StateVector,
    term_cap: u64,
) -> Result<SeriesResult> {
    check_n(n)?;
    check_dim(dec, f)?;
    let tau = t.abs() / n as f64;
    let step = I * (n as f64 * sign(t));
    // (i n sign t)^p / p! by ratios step / p.
    let ratios: Vec<Complex64> = (1..=j).map(|p| step / p as f64).collect();
    let (state, path) = expansion(dec, tau, &ratios, f, term_cap)?;

    let remainder_bound = if t == 0.0 {
        0.0
    } else {
        let x = n as f64 * dec.shifted_sum(tau)?.norm();
        exp_series_tail(x, j) * f.norm()
    };
    Ok(SeriesResult {
        state,
        remainder_bound,
        path,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BinomialResult {
    pub state: StateVector,
    pub path: MultinomialPath,
}

/// Euler-limit binomial formula at fixed `n`:
///
/// `p! Σ_{d=0}^{p} (i n sign(t))^d / (p^d d! (p-d)!) · (Σ_{k=1}^{m+1} a_k S_k(|t|/n))^d f`,
///
/// which equals `(I + A/p)^p f` for `A = i n sign(t) (S(|t|/n) - aI)`.
pub fn binomial_formula(
    dec: &Decomposition,
    t: f64,
    n: u64,
    p: u64,
    f: &StateVector,
    term_cap: u64,
) -> Result<BinomialResult> {
    check_n(n)?;
    check_dim(dec, f)?;
    if p == 0 {
        return Err(Error::InvalidArgument("Euler power p must be >= 1".into()));
    }
    let tau = t.abs() / n as f64;
    let step = I * (n as f64 * sign(t));
    let pf = p as f64;
    // c_{d+1} = c_d (i n sign t) (p - d) / (p (d + 1)), c_0 = 1.
    let ratios: Vec<Complex64> = (0..p)
        .map(|d| step * ((p - d) as f64 / (pf * (d + 1) as f64)))
        .collect();
    let (state, path) = expansion(dec, tau, &ratios, f, term_cap)?;
    Ok(BinomialResult { state, path })
}

/// Accuracy of a propagated state against the spectral oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    /// `||ψ - e^{itL} ψ_0||`.
    pub oracle_residual: f64,
    /// `| ||ψ|| - ||ψ_0|| |`.
    pub norm_drift: f64,
    pub path: Option<MultinomialPath>,
    pub remainder_bound: Option<f64>,
}

/// Approximates `ψ(t) = e^{-itH} ψ_0 = e^{itL} ψ_0` with the selected
/// variant and measures it against the spectral propagator.
pub fn solve_schrodinger(
    dec: &Decomposition,
    psi0: &StateVector,
    t: f64,
    cfg: &QuasiFeynmanConfig,
) -> Result<(StateVector, ErrorReport)> {
    let (state, path, remainder_bound) = match cfg.variant {
        Variant::OperatorExp => (chernoff_iterate(dec, t, cfg.n, psi0)?, None, None),
        Variant::Series => {
            let r = series_formula(dec, t, cfg.n, cfg.truncation, psi0, cfg.term_cap)?;
            (r.state, Some(r.path), Some(r.remainder_bound))
        }
        Variant::Binomial => {
            let r = binomial_formula(dec, t, cfg.n, cfg.truncation, psi0, cfg.term_cap)?;
            (r.state, Some(r.path), None)
        }
    };
    let exact = stone_propagator(dec.generator(), t)?.apply(psi0)?;
    let report = ErrorReport {
        oracle_residual: state.distance(&exact),
        norm_drift: (state.norm() - psi0.norm()).abs(),
        path,
        remainder_bound,
    };
    Ok((state, report))
}
