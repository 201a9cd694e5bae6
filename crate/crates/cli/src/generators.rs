//! Test-problem generators.
//!
//! Everything here is reproducible from a 64-bit seed through the portable
//! generator in the core crate: a fixed consumption order is part of each
//! generator's contract, so identical seeds give identical problems across
//! runs and ports.

use arnoldi_or::linalg::{CMatrix, CVector};
use arnoldi_or::ratfun::{Polynomial, RationalFunction};
use arnoldi_or::rng::Prng;
use arnoldi_or::{Complex64, Error, Result};

/// Nonsymmetric Toeplitz test matrix: -1 on the subdiagonal, 1 on the main
/// diagonal and the next three superdiagonals. Highly nonnormal.
pub fn gen_grcar(n: usize) -> Result<CMatrix> {
    if n < 5 {
        return Err(Error::InvalidArgument(format!(
            "grcar matrix needs n >= 5, got {n}"
        )));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| {
        if j + 1 == i {
            Complex64::new(-1.0, 0.0)
        } else if j >= i && j <= i + 3 {
            Complex64::ONE
        } else {
            Complex64::ZERO
        }
    }))
}

/// Real matrix with i.i.d. standard normal entries plus `shift * I`.
/// Entries are drawn in column-major order (the storage order).
pub fn gen_randn_shift(n: usize, shift: Complex64, seed: u64) -> CMatrix {
    let mut rng = Prng::new(seed);
    let mut m = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.next_standard_normal(), 0.0));
    // from_fn fills row-fastest within a column, i.e. column-major order
    for i in 0..n {
        m[(i, i)] += shift;
    }
    m
}

/// Real vector with i.i.d. standard normal entries.
pub fn gen_random_rhs(n: usize, seed: u64) -> CVector {
    let mut rng = Prng::new(seed);
    CVector::new((0..n).map(|_| Complex64::new(rng.next_standard_normal(), 0.0)).collect())
        .expect("normal variates are finite")
}

/// A random rational function in factored form, with the factor data kept
/// for pole/zero plotting.
#[derive(Clone, Debug)]
pub struct GeneratedRational {
    pub rational: RationalFunction,
    pub d_leading: Complex64,
    pub d_roots: Vec<Complex64>,
    pub n_leading: Complex64,
    pub n_roots: Vec<Complex64>,
}

/// Random factored rational function
/// `N(z)/D(z) = delta prod(z - s_i) / (gamma prod(z - r_j))` with all
/// parameters standard complex normal (real part drawn before imaginary
/// part). Consumption order: `gamma`, `r_1..r_degD`, `delta`, `s_1..s_degN`.
pub fn gen_random_rational(deg_d: usize, deg_n: usize, seed: u64) -> Result<GeneratedRational> {
    if deg_d == 0 {
        return Err(Error::InvalidArgument("deg_d must be at least 1".into()));
    }
    let mut rng = Prng::new(seed);
    let d_leading = rng.next_complex_normal();
    let d_roots: Vec<Complex64> = (0..deg_d).map(|_| rng.next_complex_normal()).collect();
    let n_leading = rng.next_complex_normal();
    let n_roots: Vec<Complex64> = (0..deg_n).map(|_| rng.next_complex_normal()).collect();
    let den = Polynomial::from_roots(d_leading, &d_roots);
    let num = Polynomial::from_roots(n_leading, &n_roots);
    Ok(GeneratedRational {
        rational: RationalFunction::new(num, den)?,
        d_leading,
        d_roots,
        n_leading,
        n_roots,
    })
}
