//! Reference exponentials.
//!
//! [`stone_propagator`] builds the unitary group `e^{itL}` of a Hermitian `L`
//! from its eigendecomposition and is the ground truth every approximation
//! is measured against. [`exp_bounded`] is an independent power-series route
//! (scaling and squaring) used for the general bounded exponentials `R(t)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{c, Operator, DEFAULT_HERMITIAN_TOL};

/// Scaled argument norm targeted before the Taylor sum.
const SCALING_TARGET: f64 = 0.5;
/// Relative size of the last retained Taylor term.
const TAYLOR_REL_TOL: f64 = 1e-16;
/// Hard stop for the Taylor loop; with norm <= 0.5 about 20 terms suffice.
const MAX_TAYLOR_TERMS: usize = 40;

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// (as columns of a unitary operator).
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Operator,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U diag(g(λ)) U*` for a scalar function `g` of the spectrum.
    pub fn function_of(&self, g: impl Fn(f64) -> Complex64) -> Operator {
        let u = self.eigenvectors.matrix();
        let mut scaled = u.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let gj = g(lambda);
            for z in scaled.column_mut(j).iter_mut() {
                *z *= gj;
            }
        }
        Operator::wrap(scaled * u.adjoint())
    }

    /// `U diag(λ) U*`.
    pub fn reconstruct(&self) -> Operator {
        self.function_of(|l| c(l, 0.0))
    }

    /// `e^{itL}`; exactly the identity at `t = 0`.
    pub fn propagator(&self, t: f64) -> Operator {
        if t == 0.0 {
            return Operator::identity(self.dim());
        }
        self.function_of(|l| Complex64::from_polar(1.0, t * l))
    }
}

/// Eigendecomposition of a Hermitian operator.
pub fn hermitian_eigendecompose(op: &Operator) -> Result<SpectralDecomposition> {
    op.require_hermitian(DEFAULT_HERMITIAN_TOL)?;
    // Symmetrize away the admitted asymmetry so the solver sees an exactly
    // Hermitian matrix.
    let m = op.matrix();
    let herm: DMatrix<Complex64> = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = op.dim();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors: Operator::wrap(vectors),
    })
}

/// The unitary group `e^{itL}` for Hermitian `L`, via spectral calculus.
pub fn stone_propagator(l: &Operator, t: f64) -> Result<Operator> {
    Ok(hermitian_eigendecompose(l)?.propagator(t))
}

/// `e^A` for an arbitrary bounded operator by scaling and squaring a
/// truncated Taylor series.
pub fn exp_bounded(a: &Operator) -> Operator {
    let dim = a.dim();
    // Frobenius norm bounds the spectral norm from above.
    let norm = a.frobenius_norm();
    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > SCALING_TARGET {
        scaled_norm *= 0.5;
        squarings += 1;
    }
    let x = a.matrix() * c(0.5_f64.powi(squarings as i32), 0.0);

    let mut sum = DMatrix::<Complex64>::identity(dim, dim);
    let mut term = DMatrix::<Complex64>::identity(dim, dim);
    for k in 1..=MAX_TAYLOR_TERMS {
        term = (&term * &x) * c(1.0 / k as f64, 0.0);
        sum += &term;
        if term.norm() < TAYLOR_REL_TOL * sum.norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Operator::wrap(sum)
}

/// `(I + A/k)^k`, the Euler limit form of the exponential.
pub fn euler_limit_exp(a: &Operator, k: u64) -> Result<Operator> {
    if k == 0 {
        return Err(Error::InvalidArgument("Euler power k must be >= 1".into()));
    }
    let step = &Operator::identity(a.dim()) + &a.scale_real(1.0 / k as f64);
    Ok(step.powi(k))
}
