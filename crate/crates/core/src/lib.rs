//! Krylov-subspace approximation of rational matrix functions.
//!
//! Given a square complex matrix `A`, a vector `b`, and a rational function
//! `R(z) = D(z)^{-1} N(z)`, this crate computes approximations to `R(A)b`
//! from the Krylov space `span{b, Ab, ..., A^{k-1}b}`:
//!
//! * [`solvers::arnoldi_or_basic`] / [`solvers::arnoldi_or_incremental`] —
//!   the residual-optimal approximation (optimal in the `D(A)^* D(A)`-norm),
//!   obtained from a `(k+nu) x k` least-squares problem over the Arnoldi
//!   basis. For `D(z) = z`, `N = 1` this reduces to GMRES.
//! * [`solvers::arnoldi_fa`] — the classical projected-function approximation
//!   `Q_k R(H_k) Q_k^* b` (FOM for linear systems).
//! * [`solvers::optimal_projection`] — the 2-norm-optimal orthogonal
//!   projection of the true solution, used as a baseline.
//! * [`solvers::partial_fraction_solve`] — simultaneous shifted solves over
//!   one shared basis via the partial-fraction form of `R`.
//!
//! Supporting machinery: dense complex linear algebra ([`linalg`]),
//! eigensolvers and numerical-range computations ([`spectral`]), polynomial
//! and rational-function tools ([`ratfun`]), the Arnoldi iteration
//! ([`krylov`]), spectral-set error bounds ([`bounds`]), and a constructor
//! that builds a matrix with prescribed eigenvalues and a prescribed
//! residual-norm convergence curve ([`construct`]).

pub mod error;
pub mod linalg;
pub mod mtx;
pub mod rng;

pub mod krylov;
pub mod ratfun;
pub mod spectral;

pub mod bounds;
pub mod construct;
pub mod solvers;

pub use error::{Error, Result};
pub use num_complex::Complex64;
