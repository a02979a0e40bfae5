#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;

use quasi_feynman::operator::{Operator, StateVector};

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

pub fn square(dim: usize) -> impl Strategy<Value = Operator> {
    prop::collection::vec(complex(), dim * dim)
        .prop_map(move |e| Operator::from_fn(dim, |i, j| e[i * dim + j]).unwrap())
}

/// Hermitian operator of the given dimension with spectral norm in
/// `[max_norm / 10, max_norm]`.
pub fn hermitian(dim: usize, max_norm: f64) -> impl Strategy<Value = Operator> {
    (square(dim), 0.1..=1.0f64).prop_filter_map("degenerate draw", move |(g, frac)| {
        let h = (&g + &g.adjoint()).scale_real(0.5);
        let norm = h.norm();
        (norm > 1e-3).then(|| h.scale_real(frac * max_norm / norm))
    })
}

pub fn state(dim: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec(complex(), dim)
        .prop_filter_map("zero vector", |v| StateVector::new(v).unwrap().normalized().ok())
}

/// Largest singular value from the Rayleigh quotient of power iteration on
/// `A* A`, independent of the library's SVD.
pub fn power_iteration_norm(a: &Operator) -> f64 {
    let dim = a.dim();
    let m = a.matrix();
    let gram = m.adjoint() * m;
    let mut v = nalgebra::DVector::from_fn(dim, |i, _| Complex64::new(1.0 + i as f64 * 0.37, 0.1 * i as f64));
    v /= Complex64::new(v.norm(), 0.0);
    let rayleigh = |v: &nalgebra::DVector<Complex64>| (v.adjoint() * &gram * v)[(0, 0)].re;
    let mut previous = rayleigh(&v);
    for step in 1..=20_000 {
        let w = &gram * &v;
        let len = w.norm();
        if len == 0.0 {
            return 0.0;
        }
        v = w / Complex64::new(len, 0.0);
        if step % 50 == 0 {
            let current = rayleigh(&v);
            if (current - previous).abs() <= 1e-15 * current {
                break;
            }
            previous = current;
        }
    }
    rayleigh(&v).sqrt()
}
