//! Quasi-Feynman approximations of Schrödinger propagators.
//!
//! For a generator split as `L = a_1 L_1 + ... + a_m L_m` with Chernoff
//! families `S_k(t)` tangent to each `L_k`, the unitary family
//! `R(t) = exp[i sign(t) Σ a_k (S_k(|t|) - I)]` satisfies
//! `(R(t/n))^n f -> e^{itL} f`. This crate builds `R`, its two nested-sum
//! expansions, the classical product formulas it competes with, and a
//! spectral oracle to measure all of them against, on dense
//! finite-dimensional Hermitian problems.
//!
//! Modules:
//! - [`operator`]: dense complex operators and vectors
//! - [`oracle`]: spectral propagator and bounded exponentials
//! - [`families`]: Chernoff families, tangency checks, decompositions
//! - [`quasi_feynman`]: `R(t)`, its iteration and series/binomial formulas
//! - [`baselines`]: Trotter and product-of-families formulas, equivalence distance
//! - [`experiment`]: config-driven convergence sweeps

pub mod baselines;
pub mod error;
pub mod experiment;
pub mod families;
pub mod operator;
pub mod oracle;
pub mod quasi_feynman;

pub use error::{Error, Result};
pub use families::{assemble_decomposition, check_tangency, make_family, ChernoffFamily, Decomposition, FamilyKind, TangencyReport};
pub use operator::{Operator, StateVector};
pub use oracle::{exp_bounded, stone_propagator};
pub use quasi_feynman::{chernoff_iterate, r_operator, solve_schrodinger, QuasiFeynmanConfig, Variant};
