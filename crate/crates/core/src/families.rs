//! Chernoff families `S(t)`, the tangency verifier, and weighted
//! decompositions `L = a_1 L_1 + ... + a_m L_m`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{Operator, DEFAULT_HERMITIAN_TOL};
use crate::oracle::hermitian_eigendecompose;

/// `t_max * ||L||` allowed for resolvent families.
pub const RESOLVENT_MARGIN: f64 = 0.5;

/// Threshold on `||S(0) - I||` for the CT2 check.
pub const CT2_TOL: f64 = 1e-14;

/// Grid used when the caller has no preference.
pub const DEFAULT_TANGENCY_GRID: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

/// Relative slack on the upper end of a family's time range, so that
/// `t / n` computed in floating point still lands inside `[0, t_max]`.
const RANGE_SLACK: f64 = 1e-12;

/// Residual tolerance at the smallest grid point: first-order families
/// have residual of order `t ||L||^2`.
pub fn default_tangency_tol(generator: &Operator) -> f64 {
    let n = generator.norm();
    1e-2 * (1.0 + n * n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// `S(t) = e^{tL}`
    ExactExponential,
    /// `S(t) = I + tL`
    Linear,
    /// `S(t) = (I - tL)^{-1}`
    Resolvent,
    /// `S(t) = I + tL + t^2 L^2 / 2`
    Quadratic,
    /// User-supplied evaluator.
    #[serde(skip)]
    Custom,
}

impl FamilyKind {
    pub const BUILT_IN: [FamilyKind; 4] = [
        FamilyKind::ExactExponential,
        FamilyKind::Linear,
        FamilyKind::Resolvent,
        FamilyKind::Quadratic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::ExactExponential => "exact_exponential",
            FamilyKind::Linear => "linear",
            FamilyKind::Resolvent => "resolvent",
            FamilyKind::Quadratic => "quadratic",
            FamilyKind::Custom => "custom",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::BUILT_IN
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown family kind `{s}` (expected exact_exponential, linear, resolvent or quadratic)"
                ))
            })
    }
}

pub type Evaluator = Arc<dyn Fn(f64) -> Result<Operator> + Send + Sync>;

/// A map `t -> S(t)` on `[0, t_max]` together with the generator it is
/// claimed to be Chernoff-tangent to.
#[derive(Clone)]
pub struct ChernoffFamily {
    label: String,
    kind: FamilyKind,
    generator: Operator,
    t_max: f64,
    evaluator: Evaluator,
}

impl fmt::Debug for ChernoffFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChernoffFamily")
            .field("label", &self.label)
            .field("kind", &self.kind)
            .field("dim", &self.generator.dim())
            .field("t_max", &self.t_max)
            .finish()
    }
}

impl ChernoffFamily {
    /// A family with an arbitrary evaluator. The generator need not be
    /// Hermitian, which lets the verifier probe non-self-adjoint claims.
    pub fn custom(
        label: impl Into<String>,
        generator: Operator,
        t_max: f64,
        evaluator: impl Fn(f64) -> Result<Operator> + Send + Sync + 'static,
    ) -> Result<Self> {
        check_t_max(t_max)?;
        Ok(Self {
            label: label.into(),
            kind: FamilyKind::Custom,
            generator,
            t_max,
            evaluator: Arc::new(evaluator),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn generator(&self) -> &Operator {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// `S(t)`. Returns the identity exactly at `t = 0`.
    pub fn evaluate(&self, t: f64) -> Result<Operator> {
        if !(t >= 0.0 && t <= self.t_max * (1.0 + RANGE_SLACK)) {
            return Err(Error::OutOfRange {
                t,
                t_max: self.t_max,
            });
        }
        if t == 0.0 {
            return Ok(Operator::identity(self.dim()));
        }
        let s = (self.evaluator)(t)?;
        if s.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.dim(),
            });
        }
        Ok(s)
    }
}

fn check_t_max(t_max: f64) -> Result<()> {
    if t_max > 0.0 && t_max.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "t_max must be positive and finite, got {t_max}"
        )))
    }
}

/// Builds one of the built-in families over a Hermitian generator.
pub fn make_family(kind: FamilyKind, generator: &Operator, t_max: f64) -> Result<ChernoffFamily> {
    check_t_max(t_max)?;
    generator.require_hermitian(DEFAULT_HERMITIAN_TOL)?;
    let dim = generator.dim();
    let l = generator.clone();
    let evaluator: Evaluator = match kind {
        FamilyKind::ExactExponential => {
            let spectrum = hermitian_eigendecompose(generator)?;
            Arc::new(move |t| {
                Ok(spectrum.function_of(|lambda| num_complex::Complex64::new((t * lambda).exp(), 0.0)))
            })
        }
        FamilyKind::Linear => Arc::new(move |t| {
            Ok(&Operator::identity(dim) + &l.scale_real(t))
        }),
        FamilyKind::Resolvent => {
            let product = t_max * generator.norm();
            if product > RESOLVENT_MARGIN {
                return Err(Error::ResolventRange {
                    product,
                    margin: RESOLVENT_MARGIN,
                });
            }
            Arc::new(move |t| (&Operator::identity(dim) - &l.scale_real(t)).inverse())
        }
        FamilyKind::Quadratic => {
            let l2 = &l * &l;
            Arc::new(move |t| {
                let first = &Operator::identity(dim) + &l.scale_real(t);
                Ok(&first + &l2.scale_real(0.5 * t * t))
            })
        }
        FamilyKind::Custom => {
            return Err(Error::InvalidArgument(
                "custom families are built with ChernoffFamily::custom".into(),
            ))
        }
    };
    Ok(ChernoffFamily {
        label: kind.name().to_string(),
        kind,
        generator: generator.clone(),
        t_max,
        evaluator,
    })
}

/// Outcome of [`check_tangency`].
///
/// Strong continuity (CT1) is assumed for the built-in evaluators and the
/// closure condition (CT4) holds trivially in finite dimension; neither is
/// tested.
#[derive(Clone, Debug, PartialEq)]
pub struct TangencyReport {
    pub label: String,
    pub tol: f64,
    pub t_grid: Vec<f64>,
    /// `max_j ||(S(t) e_j - e_j)/t - L e_j||` per grid point.
    pub residuals: Vec<f64>,
    /// Largest sampled `||S(t)||` over `t` in `[0, 1]`.
    pub collective_bound: f64,
    pub hermitian_at_grid: bool,
    pub ct2_pass: bool,
    pub tangent: bool,
    /// Grid point and reason if the evaluator failed.
    pub failure: Option<(f64, String)>,
}

impl TangencyReport {
    pub fn final_residual(&self) -> Option<f64> {
        self.residuals.last().copied()
    }
}

impl fmt::Display for TangencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family: {}", self.label)?;
        writeln!(f, "tolerance: {:e}", self.tol)?;
        writeln!(f, "{:>12}  {:>14}", "t", "residual")?;
        for (t, r) in self.t_grid.iter().zip(&self.residuals) {
            writeln!(f, "{t:>12.3e}  {r:>14.6e}")?;
        }
        if let Some((t, reason)) = &self.failure {
            writeln!(f, "evaluation failed at t = {t:e}: {reason}")?;
        }
        writeln!(f, "collective bound C: {:.6}", self.collective_bound)?;
        writeln!(f, "S(t) Hermitian on grid: {}", self.hermitian_at_grid)?;
        writeln!(f, "CT1 (strong continuity): assumed")?;
        writeln!(f, "CT2 (S(0) = I): {}", pass(self.ct2_pass))?;
        writeln!(f, "CT3 (derivative at 0 equals L): {}", pass(self.tangent))?;
        writeln!(f, "CT4 (closure): trivial in finite dimension")?;
        write!(f, "tangent: {}", self.tangent)
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

/// Numerically checks that `fam` is Chernoff-tangent to its generator.
///
/// The residual at each grid point is measured over the standard basis,
/// which bounds the residual operator's action on every vector up to a
/// factor of `sqrt(dim)`.
pub fn check_tangency(fam: &ChernoffFamily, tol: f64, t_grid: &[f64]) -> Result<TangencyReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("tangency grid is empty".into()));
    }
    for (i, &t) in t_grid.iter().enumerate() {
        if t.is_nan() || t <= 0.0 || t > fam.t_max() {
            return Err(Error::OutOfRange {
                t,
                t_max: fam.t_max(),
            });
        }
        if i > 0 && t >= t_grid[i - 1] {
            return Err(Error::InvalidArgument("tangency grid must be strictly decreasing".into()));
        }
    }

    let dim = fam.dim();
    let identity = Operator::identity(dim);
    let ct2_pass = match fam.evaluate(0.0) {
        Ok(s0) => (&s0 - &identity).norm() < CT2_TOL,
        Err(_) => false,
    };

    let mut residuals = Vec::with_capacity(t_grid.len());
    let mut collective_bound = 1.0_f64;
    let mut hermitian_at_grid = true;
    let mut failure = None;
    for &t in t_grid {
        match fam.evaluate(t) {
            Ok(s) => {
                let quotient = (&s - &identity).scale_real(1.0 / t);
                residuals.push((&quotient - fam.generator()).max_column_norm());
                if t <= 1.0 {
                    collective_bound = collective_bound.max(s.norm());
                }
                hermitian_at_grid &= s.is_hermitian(DEFAULT_HERMITIAN_TOL);
            }
            Err(e) => {
                failure = Some((t, e.to_string()));
                break;
            }
        }
    }

    let tangent = failure.is_none()
        && ct2_pass
        && residuals.last().is_some_and(|&r| r < tol);
    Ok(TangencyReport {
        label: fam.label().to_string(),
        tol,
        t_grid: t_grid[..residuals.len()].to_vec(),
        residuals,
        collective_bound,
        hermitian_at_grid,
        ct2_pass,
        tangent,
        failure,
    })
}

/// A weighted decomposition `L = Σ a_k L_k` with one Chernoff family per
/// term, checked against the hypotheses that make `R(t)` unitary and
/// Chernoff-equivalent to `e^{itL}`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    coefficients: Vec<f64>,
    families: Vec<ChernoffFamily>,
    generator: Operator,
    coefficient_sum: f64,
    hamiltonian: Operator,
}

impl Decomposition {
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn families(&self) -> &[ChernoffFamily] {
        &self.families
    }

    /// Number of terms `m`.
    pub fn terms(&self) -> usize {
        self.families.len()
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    /// `L = Σ a_k L_k`.
    pub fn generator(&self) -> &Operator {
        &self.generator
    }

    /// `a = Σ a_k`.
    pub fn coefficient_sum(&self) -> f64 {
        self.coefficient_sum
    }

    /// `H = -L`.
    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    /// Smallest time range over all families.
    pub fn t_max(&self) -> f64 {
        self.families
            .iter()
            .map(ChernoffFamily::t_max)
            .fold(f64::INFINITY, f64::min)
    }

    /// `S(t) = Σ a_k S_k(t)`.
    pub fn weighted_sum(&self, t: f64) -> Result<Operator> {
        let mut acc = Operator::zeros(self.dim());
        for (a, fam) in self.coefficients.iter().zip(&self.families) {
            acc = &acc + &fam.evaluate(t)?.scale_real(*a);
        }
        Ok(acc)
    }

    /// `S(t) - aI = Σ a_k (S_k(t) - I)`, accumulated term by term.
    pub fn shifted_sum(&self, t: f64) -> Result<Operator> {
        let identity = Operator::identity(self.dim());
        let mut acc = Operator::zeros(self.dim());
        for (a, fam) in self.coefficients.iter().zip(&self.families) {
            acc = &acc + &(&fam.evaluate(t)? - &identity).scale_real(*a);
        }
        Ok(acc)
    }

    /// Augmented terms `(a_k, S_k(t))` for `k = 1..=m+1`, where
    /// `a_{m+1} = -a` and `S_{m+1} = I`.
    pub fn augmented_terms(&self, t: f64) -> Result<Vec<(f64, Operator)>> {
        let mut out = Vec::with_capacity(self.terms() + 1);
        for (a, fam) in self.coefficients.iter().zip(&self.families) {
            out.push((*a, fam.evaluate(t)?));
        }
        out.push((-self.coefficient_sum, Operator::identity(self.dim())));
        Ok(out)
    }
}

/// Assembles a decomposition and checks the hypotheses: the assembled
/// generator is Hermitian (3), `S(t)` is Hermitian at every sample time (4)
/// and the coefficient sum is real (5).
pub fn assemble_decomposition(
    coefficients: &[f64],
    families: Vec<ChernoffFamily>,
    sample_ts: &[f64],
) -> Result<Decomposition> {
    if families.is_empty() {
        return Err(Error::InvalidArgument("decomposition needs at least one term".into()));
    }
    if coefficients.len() != families.len() {
        return Err(Error::InvalidArgument(format!(
            "{} coefficients for {} families",
            coefficients.len(),
            families.len()
        )));
    }
    let dim = families[0].dim();
    for fam in &families {
        if fam.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: fam.dim(),
            });
        }
    }
    for (k, &a) in coefficients.iter().enumerate() {
        if a == 0.0 {
            return Err(Error::InvalidArgument(format!("coefficient a_{} is zero", k + 1)));
        }
        if !a.is_finite() {
            return Err(Error::Hypothesis {
                condition: 5,
                detail: format!("coefficient a_{} = {a} is not a finite real", k + 1),
            });
        }
    }

    let mut generator = Operator::zeros(dim);
    for (a, fam) in coefficients.iter().zip(&families) {
        generator = &generator + &fam.generator().scale_real(*a);
    }
    let asymmetry = generator.max_asymmetry();
    if asymmetry > DEFAULT_HERMITIAN_TOL {
        return Err(Error::Hypothesis {
            condition: 3,
            detail: format!("assembled generator is not Hermitian (max |L - L*| = {asymmetry:e})"),
        });
    }

    let coefficient_sum: f64 = coefficients.iter().sum();
    let hamiltonian = generator.scale_real(-1.0);
    let dec = Decomposition {
        coefficients: coefficients.to_vec(),
        families,
        generator,
        coefficient_sum,
        hamiltonian,
    };

    for &t in sample_ts {
        let s = dec.weighted_sum(t)?;
        let asymmetry = s.max_asymmetry();
        if asymmetry > DEFAULT_HERMITIAN_TOL {
            return Err(Error::Hypothesis {
                condition: 4,
                detail: format!("S({t}) is not Hermitian (max |S - S*| = {asymmetry:e})"),
            });
        }
    }

    if !coefficient_sum.is_finite() {
        return Err(Error::Hypothesis {
            condition: 5,
            detail: format!("coefficient sum {coefficient_sum} is not a finite real"),
        });
    }
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::c;

    fn scalar(x: f64) -> Operator {
        Operator::diagonal(&[x]).unwrap()
    }

    #[test]
    fn built_in_scalar_values() {
        let lin = make_family(FamilyKind::Linear, &scalar(2.0), 1.0).unwrap();
        assert!((lin.evaluate(0.25).unwrap().entry(0, 0) - c(1.5, 0.0)).norm() < 1e-15);

        let res = make_family(FamilyKind::Resolvent, &scalar(1.0), 0.5).unwrap();
        assert!((res.evaluate(0.1).unwrap().entry(0, 0).re - 1.0 / 0.9).abs() < 1e-15);

        let quad = make_family(FamilyKind::Quadratic, &Operator::pauli_x(), 1.0).unwrap();
        let expected = &Operator::identity(2).scale_real(1.02) + &Operator::pauli_x().scale_real(0.2);
        assert!(quad.evaluate(0.2).unwrap().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn every_family_is_identity_at_zero() {
        for kind in FamilyKind::BUILT_IN {
            let fam = make_family(kind, &Operator::pauli_y(), 0.1).unwrap();
            assert_eq!(fam.evaluate(0.0).unwrap(), Operator::identity(2));
        }
    }

    #[test]
    fn make_family_rejections() {
        assert!(matches!(
            make_family(FamilyKind::Resolvent, &scalar(2.0), 0.5),
            Err(Error::ResolventRange { .. })
        ));
        let shift = Operator::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            make_family(FamilyKind::Linear, &shift, 1.0),
            Err(Error::NotHermitian { .. })
        ));
        assert!(make_family(FamilyKind::Linear, &scalar(1.0), 0.0).is_err());
    }

    #[test]
    fn evaluate_outside_range_is_rejected() {
        let fam = make_family(FamilyKind::Linear, &scalar(1.0), 0.5).unwrap();
        assert!(matches!(fam.evaluate(0.6), Err(Error::OutOfRange { .. })));
        assert!(matches!(fam.evaluate(-0.1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn kind_parses_from_snake_case() {
        assert_eq!("resolvent".parse::<FamilyKind>().unwrap(), FamilyKind::Resolvent);
        assert!("custom".parse::<FamilyKind>().is_err());
    }

    #[test]
    fn linear_family_has_zero_residual() {
        let fam = make_family(FamilyKind::Linear, &Operator::pauli_x(), 0.1).unwrap();
        let report = check_tangency(&fam, 1e-2, &DEFAULT_TANGENCY_GRID).unwrap();
        // Exact in exact arithmetic; roundoff in (I + tL - I)/t stays tiny.
        assert!(report.residuals.iter().all(|&r| r < 1e-12));
        assert!(report.tangent && report.ct2_pass && report.hermitian_at_grid);
    }

    #[test]
    fn quadratic_residual_is_half_t() {
        let fam = make_family(FamilyKind::Quadratic, &Operator::pauli_z(), 0.1).unwrap();
        let report = check_tangency(&fam, 1e-2, &DEFAULT_TANGENCY_GRID).unwrap();
        for (t, r) in report.t_grid.iter().zip(&report.residuals) {
            assert!((r - t / 2.0).abs() < 1e-10 * (1.0 + t), "t={t} r={r}");
        }
        assert!(report.tangent);
    }

    #[test]
    fn wrong_generator_plateaus() {
        let l = Operator::diagonal(&[1.0, 2.0]).unwrap();
        let l2 = &l * &l;
        let fam = ChernoffFamily::custom("I + tL^2", l, 1.0, move |t| {
            Ok(&Operator::identity(2) + &l2.scale_real(t))
        })
        .unwrap();
        let report = check_tangency(&fam, 1e-2, &DEFAULT_TANGENCY_GRID).unwrap();
        for r in &report.residuals {
            assert!((r - 2.0).abs() < 1e-10);
        }
        assert!(!report.tangent);
    }

    #[test]
    fn evaluator_failure_is_reported() {
        let fam = ChernoffFamily::custom("breaks", scalar(1.0), 1.0, |t| {
            if t < 0.05 {
                Err(Error::Singular)
            } else {
                Ok(Operator::diagonal(&[1.0 + t]).unwrap())
            }
        })
        .unwrap();
        let report = check_tangency(&fam, 1e-2, &DEFAULT_TANGENCY_GRID).unwrap();
        assert!(!report.tangent);
        assert_eq!(report.residuals.len(), 1);
        assert_eq!(report.failure.as_ref().map(|f| f.0), Some(1e-2));
    }

    #[test]
    fn tangency_grid_validation() {
        let fam = make_family(FamilyKind::Linear, &scalar(1.0), 0.1).unwrap();
        assert!(check_tangency(&fam, 1e-2, &[]).is_err());
        assert!(check_tangency(&fam, 1e-2, &[1e-3, 1e-2]).is_err());
        assert!(check_tangency(&fam, 1e-2, &[0.5]).is_err());
        assert!(check_tangency(&fam, 0.0, &[0.01]).is_err());
    }

    #[test]
    fn single_term_decomposition() {
        let fam = make_family(FamilyKind::Linear, &Operator::pauli_z(), 1.0).unwrap();
        let dec = assemble_decomposition(&[1.0], vec![fam], &[0.5, 1.0]).unwrap();
        assert_eq!(dec.generator(), &Operator::pauli_z());
        assert_eq!(dec.coefficient_sum(), 1.0);
        assert_eq!(dec.hamiltonian(), &Operator::pauli_z().scale_real(-1.0));
    }

    #[test]
    fn two_term_decomposition_with_zero_sum() {
        let f1 = make_family(FamilyKind::Linear, &Operator::pauli_x(), 1.0).unwrap();
        let f2 = make_family(FamilyKind::Linear, &Operator::pauli_z(), 1.0).unwrap();
        let dec = assemble_decomposition(&[1.0, -1.0], vec![f1, f2], &[0.3]).unwrap();
        let expected = &Operator::pauli_x() - &Operator::pauli_z();
        assert!(dec.generator().max_abs_diff(&expected) == 0.0);
        assert_eq!(dec.coefficient_sum(), 0.0);
        let aug = dec.augmented_terms(0.3).unwrap();
        assert_eq!(aug.len(), 3);
        assert_eq!(aug[2], (0.0, Operator::identity(2)));
    }

    #[test]
    fn decomposition_rejections() {
        let f = |l: Operator| make_family(FamilyKind::Linear, &l, 1.0).unwrap();
        assert!(assemble_decomposition(&[], vec![], &[]).is_err());
        assert!(assemble_decomposition(&[1.0, 2.0], vec![f(Operator::pauli_x())], &[]).is_err());
        assert!(assemble_decomposition(&[0.0], vec![f(Operator::pauli_x())], &[]).is_err());
        assert!(matches!(
            assemble_decomposition(&[1.0, 1.0], vec![f(Operator::pauli_x()), f(scalar(1.0))], &[]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            assemble_decomposition(&[f64::INFINITY], vec![f(Operator::pauli_x())], &[]),
            Err(Error::Hypothesis { condition: 5, .. })
        ));
    }

    #[test]
    fn non_hermitian_weighted_sum_fails_condition_four() {
        // Hermitian generator but a family whose values are not self-adjoint.
        let skew = Operator::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(-1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let fam = ChernoffFamily::custom("skewed", Operator::pauli_z(), 1.0, move |t| {
            let lin = &Operator::identity(2) + &Operator::pauli_z().scale_real(t);
            Ok(&lin + &skew.scale_real(t * t))
        })
        .unwrap();
        assert!(matches!(
            assemble_decomposition(&[1.0], vec![fam], &[0.5]),
            Err(Error::Hypothesis { condition: 4, .. })
        ));
    }
}
