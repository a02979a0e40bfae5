//! Competing product formulas and the Chernoff-equivalence distance.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families::{assemble_decomposition, ChernoffFamily, Decomposition, FamilyKind};
use crate::operator::{Operator, StateVector};
use crate::oracle::{exp_bounded, hermitian_eigendecompose, stone_propagator};
use crate::quasi_feynman::{chernoff_iterate, r_operator};

/// Tolerance on `||G(0) - I||` (largest entry) at construction.
const IDENTITY_AT_ZERO_TOL: f64 = 1e-14;

/// Default number of grid points for [`chernoff_distance`].
pub const DEFAULT_DISTANCE_GRID: usize = 33;

type FamilyFn = Arc<dyn Fn(f64) -> Result<Operator> + Send + Sync>;

/// An operator-valued map `t -> G(t)` with `G(0) = I`, with no claim about
/// its generator.
#[derive(Clone)]
pub struct AbstractFamily {
    label: String,
    dim: usize,
    negative_times: bool,
    evaluator: FamilyFn,
}

impl fmt::Debug for AbstractFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AbstractFamily")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("negative_times", &self.negative_times)
            .finish()
    }
}

impl AbstractFamily {
    /// Wraps an evaluator, checking `G(0) = I`. When `negative_times` is
    /// set the family is also evaluated for `t < 0`.
    pub fn new(
        label: impl Into<String>,
        negative_times: bool,
        evaluator: impl Fn(f64) -> Result<Operator> + Send + Sync + 'static,
    ) -> Result<Self> {
        let g0 = evaluator(0.0)?;
        let dim = g0.dim();
        let deviation = g0.max_abs_diff(&Operator::identity(dim));
        if deviation > IDENTITY_AT_ZERO_TOL {
            return Err(Error::InvalidArgument(format!(
                "family value at t = 0 differs from the identity by {deviation:e}"
            )));
        }
        Ok(Self {
            label: label.into(),
            dim,
            negative_times,
            evaluator: Arc::new(evaluator),
        })
    }

    /// `t -> e^{itH}` for Hermitian `H`, defined for all real `t`.
    pub fn unitary_group(label: impl Into<String>, h: &Operator) -> Result<Self> {
        let spectrum = hermitian_eigendecompose(h)?;
        Self::new(label, true, move |t| Ok(spectrum.propagator(t)))
    }

    /// `t -> R(t)` of a decomposition, defined for all `|t| <= t_max`.
    pub fn r_family(dec: &Decomposition) -> Result<Self> {
        let owned = dec.clone();
        Self::new("R", true, move |t| r_operator(&owned, t))
    }

    /// A built-in Chernoff family over an arbitrary (possibly non-Hermitian)
    /// generator `G`, on `t >= 0`: `e^{tG}`, `I + tG`, `(I - tG)^{-1}` or
    /// `I + tG + t²G²/2`.
    pub fn from_kind(kind: FamilyKind, generator: &Operator) -> Result<Self> {
        let dim = generator.dim();
        let g = generator.clone();
        let label = format!("{kind}");
        match kind {
            FamilyKind::ExactExponential => {
                Self::new(label, false, move |t| Ok(exp_bounded(&g.scale_real(t))))
            }
            FamilyKind::Linear => Self::new(label, false, move |t| {
                Ok(&Operator::identity(dim) + &g.scale_real(t))
            }),
            FamilyKind::Resolvent => Self::new(label, false, move |t| {
                (&Operator::identity(dim) - &g.scale_real(t)).inverse()
            }),
            FamilyKind::Quadratic => {
                let g2 = &g * &g;
                Self::new(label, false, move |t| {
                    let first = &Operator::identity(dim) + &g.scale_real(t);
                    Ok(&first + &g2.scale_real(0.5 * t * t))
                })
            }
            FamilyKind::Custom => Err(Error::InvalidArgument(
                "custom families are built with AbstractFamily::new".into(),
            )),
        }
    }

    /// View of a Chernoff family on its own time range.
    pub fn from_chernoff(fam: &ChernoffFamily) -> Result<Self> {
        let owned = fam.clone();
        Self::new(fam.label().to_string(), false, move |t| owned.evaluate(t))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn supports_negative_times(&self) -> bool {
        self.negative_times
    }

    pub fn evaluate(&self, t: f64) -> Result<Operator> {
        if t < 0.0 && !self.negative_times {
            return Err(Error::OutOfRange { t, t_max: 0.0 });
        }
        let g = (self.evaluator)(t)?;
        if g.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: g.dim(),
            });
        }
        Ok(g)
    }

    /// `(G(t/n))^n f`.
    pub fn iterate(&self, t: f64, n: u64, f: &StateVector) -> Result<StateVector> {
        check_n(n)?;
        apply_n_times(&self.evaluate(t / n as f64)?, n, f)
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("iteration count n must be >= 1".into()))
    } else {
        Ok(())
    }
}

fn apply_n_times(op: &Operator, n: u64, f: &StateVector) -> Result<StateVector> {
    let mut v = f.clone();
    for _ in 0..n {
        v = op.apply(&v)?;
    }
    Ok(v)
}

/// Lie-Trotter splitting over `m` factors:
/// `(e^{i t a_1 L_1 / n} ∘ … ∘ e^{i t a_m L_m / n})^n f`.
pub fn trotter_product(dec: &Decomposition, t: f64, n: u64, f: &StateVector) -> Result<StateVector> {
    check_n(n)?;
    let tau = t / n as f64;
    let mut step = Operator::identity(dec.dim());
    for (a, fam) in dec.coefficients().iter().zip(dec.families()) {
        let factor = stone_propagator(&fam.generator().scale_real(*a), tau)?;
        step = step.compose(&factor)?;
    }
    apply_n_times(&step, n, f)
}

/// Product of arbitrary families: `(S_1(t/n) ∘ … ∘ S_m(t/n))^n f`, together
/// with the norm drift `| ||result|| - ||f|| |`, which need not vanish.
pub fn bss_product(
    fams: &[AbstractFamily],
    t: f64,
    n: u64,
    f: &StateVector,
) -> Result<(StateVector, f64)> {
    check_n(n)?;
    let first = fams
        .first()
        .ok_or_else(|| Error::InvalidArgument("product needs at least one family".into()))?;
    let tau = t / n as f64;
    let mut step = Operator::identity(first.dim());
    for fam in fams {
        step = step.compose(&fam.evaluate(tau)?)?;
    }
    let v = apply_n_times(&step, n, f)?;
    let drift = (v.norm() - f.norm()).abs();
    Ok((v, drift))
}

/// Families `t -> e^{i t a_k L_k}` for each term of a decomposition.
pub fn exact_factor_families(dec: &Decomposition) -> Result<Vec<AbstractFamily>> {
    dec.coefficients()
        .iter()
        .zip(dec.families())
        .map(|(a, fam)| {
            AbstractFamily::unitary_group(format!("exp({a} i L)"), &fam.generator().scale_real(*a))
        })
        .collect()
}

/// Grid estimate of `sup_t ||(G_1(t/n))^n f - (G_2(t/n))^n f||`.
///
/// The grid maximum is a lower bound on the true supremum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChernoffDistance {
    pub value: f64,
    /// Grid point attaining the maximum.
    pub argmax: f64,
    pub grid_size: usize,
}

fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (points - 1) as f64
            }
        })
        .collect()
}

fn distance_over(
    g1: &AbstractFamily,
    g2: &AbstractFamily,
    f: &StateVector,
    n: u64,
    grid: Vec<f64>,
) -> Result<ChernoffDistance> {
    check_n(n)?;
    let grid_size = grid.len();
    let values: Vec<Result<(f64, f64)>> = grid
        .into_par_iter()
        .map(|t| {
            let a = g1.iterate(t, n, f)?;
            let b = g2.iterate(t, n, f)?;
            Ok((t, a.distance(&b)))
        })
        .collect();
    let mut best = ChernoffDistance {
        value: 0.0,
        argmax: 0.0,
        grid_size,
    };
    for v in values {
        let (t, d) = v?;
        if d > best.value {
            best.value = d;
            best.argmax = t;
        }
    }
    Ok(best)
}

/// Chernoff-equivalence distance on `[0, T]` sampled at `grid_size` uniform
/// points.
pub fn chernoff_distance(
    g1: &AbstractFamily,
    g2: &AbstractFamily,
    f: &StateVector,
    horizon: f64,
    n: u64,
    grid_size: usize,
) -> Result<ChernoffDistance> {
    check_grid(horizon, grid_size)?;
    distance_over(g1, g2, f, n, uniform_grid(0.0, horizon, grid_size))
}

/// Chernoff-equivalence distance on `[-T, T]`; both families must accept
/// negative times. `grid_size` points are used on each half.
pub fn chernoff_distance_symmetric(
    g1: &AbstractFamily,
    g2: &AbstractFamily,
    f: &StateVector,
    horizon: f64,
    n: u64,
    grid_size: usize,
) -> Result<ChernoffDistance> {
    check_grid(horizon, grid_size)?;
    if !(g1.supports_negative_times() && g2.supports_negative_times()) {
        return Err(Error::InvalidArgument(
            "both families must be defined for negative times".into(),
        ));
    }
    let mut grid = uniform_grid(-horizon, 0.0, grid_size);
    grid.pop();
    grid.extend(uniform_grid(0.0, horizon, grid_size));
    let mut d = distance_over(g1, g2, f, n, grid)?;
    d.grid_size = 2 * grid_size - 1;
    Ok(d)
}

fn check_grid(horizon: f64, grid_size: usize) -> Result<()> {
    if grid_size < 2 {
        return Err(Error::InvalidArgument("grid_size must be at least 2".into()));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("horizon must be positive, got {horizon}")));
    }
    Ok(())
}

/// Single-term formula `R(t) = exp[i a (S(t) - I)]`, run through the
/// general iteration with `m = 1`.
pub fn remizov_single(
    fam: &ChernoffFamily,
    a: f64,
    t: f64,
    n: u64,
    f: &StateVector,
) -> Result<StateVector> {
    let dec = assemble_decomposition(&[a], vec![fam.clone()], &[])?;
    chernoff_iterate(&dec, t, n, f)
}

/// `e^{i t a L}` applied to `f`; used to build exact single-term references.
pub fn exact_single(l: &Operator, a: f64, t: f64, f: &StateVector) -> Result<StateVector> {
    stone_propagator(&l.scale_real(a), t)?.apply(f)
}
