//! The Arnoldi iteration and Hessenberg power-block utilities.
//!
//! [`ArnoldiDecomposition`] grows an orthonormal Krylov basis `Q` and upper
//! Hessenberg matrix `H` satisfying `A Q_k = Q_{k+1} H_{k+1,k}`. Modified
//! Gram-Schmidt with an optional second full pass is used; the second pass
//! is on by default because the residual-optimal solver's guarantees assume
//! an orthonormal basis.
//!
//! [`hessenberg_power_block`] returns the top-left `(k+nu) x k` block of
//! `H^j`. Powers of an upper Hessenberg matrix fill in one extra band of
//! rows per power, so for `j <= nu` those blocks are independent of any
//! upper Hessenberg extension of `H`, and the rows beyond `k+j` are
//! structurally zero. The block multiply here exploits exactly that
//! structure, so the claimed zeros are exact, not rounded.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{dot, CMatrix, CVector};

/// Breakdown threshold for the Arnoldi subdiagonal, relative to `||A||_F`.
pub const BREAKDOWN_RTOL: f64 = 1e-14;

/// Growing Arnoldi decomposition of `(A, b)`.
#[derive(Clone, Debug)]
pub struct ArnoldiDecomposition {
    n: usize,
    /// Orthonormal basis vectors `q_1, ..., q_{m+1}` (only `m` columns after
    /// a breakdown, since no new direction exists).
    q_cols: Vec<CVector>,
    /// Column `j` holds `h_{1,j+1}, ..., h_{j+2,j+1}`; the last entry is the
    /// real nonnegative subdiagonal `h_{j+2,j+1}`.
    h_cols: Vec<Vec<Complex64>>,
    steps_done: usize,
    breakdown_at: Option<usize>,
    reorth: bool,
}

impl ArnoldiDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of completed Arnoldi steps (columns of `H`).
    pub fn steps_done(&self) -> usize {
        self.steps_done
    }

    /// Step at which a happy breakdown occurred, if any (1-based).
    pub fn breakdown_at(&self) -> Option<usize> {
        self.breakdown_at
    }

    pub fn reorth(&self) -> bool {
        self.reorth
    }

    /// Number of available basis vectors.
    pub fn basis_len(&self) -> usize {
        self.q_cols.len()
    }

    pub fn q_col(&self, j: usize) -> &CVector {
        &self.q_cols[j]
    }

    /// The `n x k` matrix of the first `k` basis vectors.
    pub fn q_matrix(&self, k: usize) -> CMatrix {
        assert!(k <= self.q_cols.len());
        CMatrix::from_columns(&self.q_cols[..k])
    }

    /// Square leading block `H_k` (requires `k <= steps_done`).
    pub fn h_square(&self, k: usize) -> CMatrix {
        assert!(k <= self.steps_done);
        CMatrix::from_fn(k, k, |i, j| self.h_entry(i, j))
    }

    /// Rectangular block `H_{k+1,k}` (requires `k <= steps_done`).
    pub fn h_rect(&self, k: usize) -> CMatrix {
        assert!(k <= self.steps_done);
        CMatrix::from_fn(k + 1, k, |i, j| self.h_entry(i, j))
    }

    /// Entry `h_{i+1,j+1}` (0-based indices), zero below the subdiagonal.
    pub fn h_entry(&self, i: usize, j: usize) -> Complex64 {
        debug_assert!(j < self.steps_done);
        let col = &self.h_cols[j];
        if i < col.len() {
            col[i]
        } else {
            Complex64::ZERO
        }
    }

    /// `Q_k y` for a coefficient vector of length `k`.
    pub fn combine(&self, y: &CVector) -> CVector {
        assert!(y.len() <= self.q_cols.len());
        let mut x = CVector::zeros(self.n);
        for (j, q) in self.q_cols.iter().take(y.len()).enumerate() {
            x.axpy_in_place(y[j], q);
        }
        x
    }
}

/// Starts an Arnoldi decomposition with `q_1 = b / ||b||_2`.
pub fn arnoldi_start(a: &CMatrix, b: &CVector, reorth: bool) -> Result<ArnoldiDecomposition> {
    if !a.is_square() || a.rows() != b.len() {
        return Err(Error::invalid("Arnoldi requires square A and matching b"));
    }
    let norm = b.norm2();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(ArnoldiDecomposition {
        n: a.rows(),
        q_cols: vec![b.scale(Complex64::new(1.0 / norm, 0.0))],
        h_cols: Vec::new(),
        steps_done: 0,
        breakdown_at: None,
        reorth,
    })
}

/// Runs `extra_steps` further Arnoldi steps with modified Gram-Schmidt (one
/// full reorthogonalization pass when the flag is set).
///
/// When the new subdiagonal `h_{j+1,j}` falls below `1e-14 ||A||_F` the
/// Krylov space is invariant ("happy breakdown"): `breakdown_at` is set to
/// `j`, the final (square) `H_j` stays available, and extension stops.
/// Extending past a breakdown is an error.
pub fn arnoldi_extend(
    dec: &mut ArnoldiDecomposition,
    a: &CMatrix,
    extra_steps: usize,
) -> Result<()> {
    if extra_steps == 0 {
        return Ok(());
    }
    if let Some(step) = dec.breakdown_at {
        return Err(Error::AlreadyBrokenDown(step));
    }
    if dec.steps_done + extra_steps > dec.n {
        return Err(Error::invalid(format!(
            "cannot run {} Arnoldi steps in dimension {}",
            dec.steps_done + extra_steps,
            dec.n
        )));
    }
    let breakdown_tol = BREAKDOWN_RTOL * a.frobenius_norm();
    for _ in 0..extra_steps {
        let j = dec.steps_done;
        let mut w = a.matvec(&dec.q_cols[j]);
        let mut hcol = Vec::with_capacity(j + 2);
        for q in dec.q_cols.iter() {
            let h = dot(q, &w);
            w.axpy_in_place(-h, q);
            hcol.push(h);
        }
        if dec.reorth {
            // second pass; fold the corrections into H so the recurrence
            // A Q_k = Q_{k+1} H_{k+1,k} holds to machine precision
            for (i, q) in dec.q_cols.iter().enumerate() {
                let corr = dot(q, &w);
                w.axpy_in_place(-corr, q);
                hcol[i] += corr;
            }
        }
        let norm = w.norm2();
        hcol.push(Complex64::new(norm, 0.0));
        dec.h_cols.push(hcol);
        dec.steps_done += 1;
        if norm <= breakdown_tol {
            dec.breakdown_at = Some(dec.steps_done);
            return Ok(());
        }
        dec.q_cols.push(w.scale(Complex64::new(1.0 / norm, 0.0)));
    }
    Ok(())
}

/// Top-left `s x k` block of `H^j` where `H` is the square `s x s` leading
/// part of an upper Hessenberg matrix (`s = h.cols()`, accepting either the
/// `(s+1) x s` rectangular form or the square form).
///
/// `j = 0` returns `[I_k; 0]`. Rows `k+j+1..s` of the result are exactly
/// zero by construction: each Hessenberg multiply is restricted to the rows
/// that can be structurally nonzero.
pub fn hessenberg_power_block(h: &CMatrix, j: usize, k: usize) -> CMatrix {
    let s = h.cols();
    assert!(h.rows() == s || h.rows() == s + 1, "expected Hessenberg block shape");
    assert!(k <= s, "block width {k} exceeds Hessenberg size {s}");
    assert!(k + j <= s, "power {j} overflows the {s}-dimensional block for width {k}");
    let mut p = CMatrix::zeros(s, k);
    for c in 0..k {
        p[(c, c)] = Complex64::ONE;
    }
    for t in 1..=j {
        let filled = (k + t).min(s);
        let prev_filled = k + t - 1;
        let mut next = CMatrix::zeros(s, k);
        for c in 0..k {
            for i in 0..filled {
                let lo = i.saturating_sub(1);
                let mut acc = Complex64::ZERO;
                for m in lo..prev_filled {
                    acc += h[(i, m)] * p[(m, c)];
                }
                next[(i, c)] = acc;
            }
        }
        p = next;
    }
    p
}

/// First `nrows` entries of column `col` (0-based) of `p(H)`, where `H` is
/// the square leading block of an upper Hessenberg matrix and `p` has the
/// given ascending coefficients. Exploits the same structural zero pattern
/// as [`hessenberg_power_block`]: after `t` multiplies only rows
/// `0..col+t+1` can be nonzero.
pub fn hessenberg_poly_column(
    h: &CMatrix,
    coeffs: &[Complex64],
    col: usize,
    nrows: usize,
) -> Vec<Complex64> {
    let s = h.cols();
    assert!(h.rows() == s || h.rows() == s + 1);
    let deg = coeffs.len() - 1;
    assert!(col + deg < s + 1 && nrows <= s, "column power overflows the block");
    assert!(col + deg <= nrows, "result rows must cover the structural band");
    let mut v = vec![Complex64::ZERO; s];
    v[col] = Complex64::ONE;
    let mut acc = vec![Complex64::ZERO; nrows];
    acc[col] = coeffs[0];
    for (t, &c) in coeffs.iter().enumerate().skip(1) {
        let filled = (col + t + 1).min(s);
        let prev_filled = col + t;
        let mut next = vec![Complex64::ZERO; s];
        for (i, slot) in next.iter_mut().enumerate().take(filled) {
            let lo = i.saturating_sub(1);
            let mut sum = Complex64::ZERO;
            for m in lo..prev_filled {
                sum += h[(i, m)] * v[m];
            }
            *slot = sum;
        }
        v = next;
        if c != Complex64::ZERO {
            for i in 0..filled.min(nrows) {
                acc[i] += c * v[i];
            }
        }
    }
    acc
}
