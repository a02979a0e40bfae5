//! Dense complex operators and state vectors.
//!
//! Everything here is a value type. Arithmetic returns new values and never
//! mutates its inputs, so operators can be shared freely between threads.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for the entrywise Hermitian check.
pub const DEFAULT_HERMITIAN_TOL: f64 = 1e-10;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A bounded linear operator on `C^dim`, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: DMatrix<Complex64>,
}

impl Operator {
    /// Wraps a square matrix with finite entries.
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() == 0 {
            return Err(Error::EmptyDimension);
        }
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows(),
                found: mat.ncols(),
            });
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { mat })
    }

    /// Builds an operator from row vectors.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
        }
        Self::new(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        Self::new(DMatrix::from_fn(dim, dim, f))
    }

    /// Internal constructor for results of arithmetic on valid operators.
    pub(crate) fn wrap(mat: DMatrix<Complex64>) -> Self {
        debug_assert!(mat.is_square() && mat.nrows() > 0);
        Self { mat }
    }

    /// # Panics
    /// Panics if `dim == 0`.
    pub fn identity(dim: usize) -> Self {
        assert!(dim > 0, "operator dimension must be at least 1");
        Self::wrap(DMatrix::identity(dim, dim))
    }

    /// # Panics
    /// Panics if `dim == 0`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "operator dimension must be at least 1");
        Self::wrap(DMatrix::zeros(dim, dim))
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::from_fn(entries.len(), |i, j| {
            if i == j {
                c(entries[i], 0.0)
            } else {
                Complex64::default()
            }
        })
    }

    pub fn scalar(value: Complex64) -> Result<Self> {
        Self::new(DMatrix::from_element(1, 1, value))
    }

    pub fn pauli_x() -> Self {
        Self::wrap(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ))
    }

    pub fn pauli_y() -> Self {
        Self::wrap(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        ))
    }

    pub fn pauli_z() -> Self {
        Self::wrap(DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        ))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        Ok(StateVector::wrap(&self.mat * &v.vec))
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        self.check_dim(other)?;
        Ok(Self::wrap(&self.mat * &other.mat))
    }

    pub fn adjoint(&self) -> Operator {
        Self::wrap(self.mat.adjoint())
    }

    /// Largest entrywise modulus of `self - self*`.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_asymmetry() <= tol
    }

    /// Returns the conjugate transpose together with the Hermitian flag
    /// `max |A - A*| <= tol`.
    pub fn hermitian_check(&self, tol: f64) -> (Operator, bool) {
        (self.adjoint(), self.is_hermitian(tol))
    }

    /// Errors with the observed asymmetry unless Hermitian within `tol`.
    pub fn require_hermitian(&self, tol: f64) -> Result<()> {
        let asymmetry = self.max_asymmetry();
        if asymmetry <= tol {
            Ok(())
        } else {
            Err(Error::NotHermitian { asymmetry })
        }
    }

    /// Spectral norm (largest singular value).
    pub fn norm(&self) -> f64 {
        self.mat
            .clone()
            .singular_values()
            .iter()
            .fold(0.0_f64, |acc, &s| acc.max(s))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    /// Largest Euclidean column norm, i.e. the worst response over the
    /// standard basis.
    pub fn max_column_norm(&self) -> f64 {
        self.mat
            .column_iter()
            .map(|col| col.norm())
            .fold(0.0_f64, f64::max)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0_f64, f64::max)
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Self::wrap(&self.mat * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Operator {
        self.scale(c(factor, 0.0))
    }

    pub fn inverse(&self) -> Result<Operator> {
        self.mat
            .clone()
            .try_inverse()
            .filter(|m| m.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
            .map(Self::wrap)
            .ok_or(Error::Singular)
    }

    /// `self^k` by binary exponentiation; `k = 0` gives the identity.
    pub fn powi(&self, mut k: u64) -> Operator {
        let mut base = self.mat.clone();
        let mut acc = DMatrix::identity(self.dim(), self.dim());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Self::wrap(acc)
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        (&self.mat - &other.mat)
            .iter()
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max)
    }

    fn check_dim(&self, other: &Operator) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        Operator::wrap(&self.mat + &rhs.mat)
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        Operator::wrap(&self.mat - &rhs.mat)
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        Operator::wrap(&self.mat * &rhs.mat)
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.mat.row_iter() {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// An element of the Hilbert space `C^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    vec: DVector<Complex64>,
}

impl StateVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            vec: DVector::from_vec(entries),
        })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub(crate) fn wrap(vec: DVector<Complex64>) -> Self {
        Self { vec }
    }

    /// The `k`-th standard basis vector.
    ///
    /// # Panics
    /// Panics if `k >= dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut vec = DVector::zeros(dim);
        vec[k] = c(1.0, 0.0);
        Self { vec }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "state dimension must be at least 1");
        Self {
            vec: DVector::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        self.vec.as_slice()
    }

    pub fn vector(&self) -> &DVector<Complex64> {
        &self.vec
    }

    pub fn norm(&self) -> f64 {
        self.vec.norm()
    }

    pub fn distance(&self, other: &StateVector) -> f64 {
        (&self.vec - &other.vec).norm()
    }

    pub fn scale(&self, factor: Complex64) -> StateVector {
        Self::wrap(&self.vec * factor)
    }

    /// Returns the unit vector in the same direction, or an error for the
    /// zero vector.
    pub fn normalized(&self) -> Result<StateVector> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::InvalidArgument("cannot normalize the zero vector".into()));
        }
        Ok(self.scale(c(1.0 / n, 0.0)))
    }

    /// `self += factor * other`.
    pub(crate) fn axpy(&mut self, factor: Complex64, other: &StateVector) {
        self.vec.axpy(factor, &other.vec, c(1.0, 0.0));
    }
}

impl Add for &StateVector {
    type Output = StateVector;

    fn add(self, rhs: &StateVector) -> StateVector {
        StateVector::wrap(&self.vec + &rhs.vec)
    }
}

impl Sub for &StateVector {
    type Output = StateVector;

    fn sub(self, rhs: &StateVector) -> StateVector {
        StateVector::wrap(&self.vec - &rhs.vec)
    }
}
