//! The four approximation engines for `R(A) b` over Krylov spaces.
//!
//! * `arnoldi_or_*`: minimize `||R(A)b - Q_k y||` in the `D(A)^* D(A)`-norm,
//!   which by the substitution `||N(A)b - D(A) Q_k y||_2` becomes an ordinary
//!   `(k+nu) x k` least-squares problem in the Arnoldi coordinates. The
//!   basic variant rebuilds the coefficient matrix every step; the
//!   incremental variant reuses the logged Givens rotations and only
//!   processes the one new column and row per step. The two produce
//!   identical results up to roundoff.
//! * `arnoldi_fa`: the projected-function approximation
//!   `Q_k D(H_k)^{-1} N(H_k) e_1 ||b||`.
//! * `optimal_projection`: orthogonal projection of the directly computed
//!   solution onto the Krylov space (the 2-norm-optimal baseline).
//! * `partial_fraction_solve`: decompose `R` into partial fractions and run
//!   simultaneous shifted minimal-residual solves on one shared basis.
//!
//! Residual norms are always reported for the original (unnormalized) right
//! side: `b` is normalized once at problem construction and every reported
//! quantity is rescaled by the stored norm.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::krylov::{
    arnoldi_extend, arnoldi_start, hessenberg_poly_column, hessenberg_power_block,
    ArnoldiDecomposition,
};
use crate::linalg::{
    compute_givens, dense_solve, dot, givens_qr_least_squares, CMatrix, CVector, GivensRotation,
    PIVOT_RTOL,
};
use crate::ratfun::{partial_fractions, Polynomial, RationalFunction};
use crate::spectral::cond2;

/// Default relative residual tolerance (relative to `||N(A)b||_2`).
pub const DEFAULT_TOL: f64 = 1e-10;

/// Approximation engine tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Or,
    Fa,
    Opt2,
    Pfrac,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Or => "OR",
            Method::Fa => "FA",
            Method::Opt2 => "OPT2",
            Method::Pfrac => "PFRAC",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        match s.to_ascii_uppercase().as_str() {
            "OR" => Some(Method::Or),
            "FA" => Some(Method::Fa),
            "OPT2" => Some(Method::Opt2),
            "PFRAC" => Some(Method::Pfrac),
            _ => None,
        }
    }
}

/// One approximation with its step index and residual norm
/// `||N(A)b - D(A)x||_2`. The iterate `x` is only formed when the caller
/// asked for iterates, the tolerance was met, or the step is final; the
/// error norm is filled by [`residual_and_error`] style evaluation when a
/// reference solution is wanted.
#[derive(Clone, Debug)]
pub struct ApproxResult {
    pub method: Method,
    pub k: usize,
    pub residual_norm: f64,
    pub x: Option<CVector>,
    pub error_norm: Option<f64>,
}

/// A problem instance `x ~ R(A) b`. The right side is normalized once on
/// construction; `b_norm` rescales all reported quantities back.
pub struct RationalKrylovProblem {
    a: CMatrix,
    b: CVector,
    b_unit: CVector,
    b_norm: f64,
    r: RationalFunction,
    d_of_a: OnceLock<CMatrix>,
    n_of_a_b: OnceLock<CVector>,
    reference: OnceLock<std::result::Result<CVector, (f64, f64)>>,
}

impl RationalKrylovProblem {
    pub fn new(a: CMatrix, b: CVector, r: RationalFunction) -> Result<Self> {
        if !a.is_square() || a.rows() != b.len() {
            return Err(Error::invalid("problem requires square A and matching b"));
        }
        let b_norm = b.norm2();
        if b_norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let b_unit = b.scale(Complex64::new(1.0 / b_norm, 0.0));
        Ok(Self {
            a,
            b,
            b_unit,
            b_norm,
            r,
            d_of_a: OnceLock::new(),
            n_of_a_b: OnceLock::new(),
            reference: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &CVector {
        &self.b
    }

    pub fn rhs_norm(&self) -> f64 {
        self.b_norm
    }

    pub fn rational(&self) -> &RationalFunction {
        &self.r
    }

    pub fn nu(&self) -> usize {
        self.r.nu()
    }

    /// `D(A)`, evaluated once.
    pub fn d_of_a(&self) -> &CMatrix {
        self.d_of_a.get_or_init(|| self.r.denominator().matrix_eval(&self.a))
    }

    /// `N(A) b`, evaluated once (vector Horner, no `N(A)` storage).
    pub fn n_of_a_b(&self) -> &CVector {
        self.n_of_a_b.get_or_init(|| {
            let coeffs = self.r.numerator().coeffs();
            let mut acc = self.b.scale(*coeffs.last().unwrap());
            for &c in coeffs.iter().rev().skip(1) {
                acc = self.a.matvec(&acc);
                acc.axpy_in_place(c, &self.b);
            }
            acc
        })
    }

    /// The dense reference solution `D(A)^{-1} N(A) b`, solved once. The
    /// nonsingularity of `D(A)` is checked here, lazily.
    pub fn reference(&self) -> Result<&CVector> {
        let cached = self.reference.get_or_init(|| {
            match dense_solve(self.d_of_a(), self.n_of_a_b()) {
                Ok(x) => Ok(x),
                Err(Error::SingularMatrix { pivot, threshold }) => Err((pivot, threshold)),
                Err(_) => unreachable!("dense_solve shapes are consistent here"),
            }
        });
        match cached {
            Ok(x) => Ok(x),
            Err(e) => Err(Error::SingularMatrix { pivot: e.0, threshold: e.1 }),
        }
    }

    /// Fresh Arnoldi decomposition seeded with the normalized right side.
    pub fn arnoldi(&self) -> ArnoldiDecomposition {
        arnoldi_start(&self.a, &self.b_unit, true).expect("b is nonzero by construction")
    }

    /// Direct residual `||N(A)b - D(A)x||_2`.
    pub fn residual_norm(&self, x: &CVector) -> f64 {
        self.n_of_a_b().sub(&self.d_of_a().matvec(x)).norm2()
    }
}

/// Residual and error of a candidate approximation: the residual by direct
/// evaluation, the error against the cached dense reference.
pub fn residual_and_error(prob: &RationalKrylovProblem, x: &CVector) -> Result<(f64, f64)> {
    let residual = prob.residual_norm(x);
    let error = prob.reference()?.sub(x).norm2();
    Ok((residual, error))
}

/// `S = D(A)^* D(A)` together with its condition number; the norm in which
/// the residual-optimal method is optimal.
pub struct SNormContext {
    pub d_of_a: CMatrix,
    pub s: CMatrix,
    pub kappa_s: f64,
}

impl SNormContext {
    pub fn new(prob: &RationalKrylovProblem) -> Result<Self> {
        let d_of_a = prob.d_of_a().clone();
        let s = d_of_a.adjoint().matmul(&d_of_a).hermitian_part();
        let kappa_d = cond2(&d_of_a)?;
        Ok(Self { d_of_a, s, kappa_s: kappa_d * kappa_d })
    }

    /// `sqrt(kappa(S)) = kappa_2(D(A))`, the factor in the error bounds.
    pub fn kappa_s_sqrt(&self) -> f64 {
        self.kappa_s.sqrt()
    }

    /// `||v||_S` through the explicit Gram matrix (test route; squares the
    /// conditioning, so production paths use `||D(A) v||_2` instead).
    pub fn s_norm(&self, v: &CVector) -> f64 {
        dot(v, &self.s.matvec(v)).re.max(0.0).sqrt()
    }
}

/// S-norm error `||R(A)b - x||_S`, computed as `||D(A)(R(A)b - x)||_2`.
/// By the minimization identity this equals `||N(A)b - D(A)x||_2`; the two
/// evaluation routes agree to roundoff and tests pin that down.
pub fn s_norm_error(
    prob: &RationalKrylovProblem,
    x: &CVector,
    ctx: &SNormContext,
) -> Result<f64> {
    let err = prob.reference()?.sub(x);
    Ok(ctx.d_of_a.matvec(&err).norm2())
}

// ── Arnoldi-OR ──────────────────────────────────────────────────────

/// Options for the residual-optimal runs.
#[derive(Clone, Copy, Debug)]
pub struct OrOptions {
    pub kmax: usize,
    /// Stop once the residual drops below `tol * ||N(A)b||_2`.
    pub tol: f64,
    /// Form `x_k` at every step instead of only at the stopping step.
    pub keep_iterates: bool,
}

impl OrOptions {
    pub fn new(kmax: usize) -> Self {
        Self { kmax, tol: DEFAULT_TOL, keep_iterates: false }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn keeping_iterates(mut self) -> Self {
        self.keep_iterates = true;
        self
    }
}

/// Exact solve on an invariant Krylov subspace (happy breakdown at `m`):
/// `x = Q_m D(H_m)^{-1} N(H_m) e_1 ||b||` reproduces `R(A)b` exactly.
fn exact_solve_on_invariant(
    prob: &RationalKrylovProblem,
    dec: &ArnoldiDecomposition,
    m: usize,
) -> Result<ApproxResult> {
    let hm = dec.h_square(m);
    let d_hm = prob.rational().denominator().matrix_eval(&hm);
    let n_hm = prob.rational().numerator().matrix_eval(&hm);
    let rhs = n_hm.col(0).scale(Complex64::new(prob.b_norm, 0.0));
    let y = dense_solve(&d_hm, &rhs)?;
    let x = dec.combine(&y);
    let residual = prob.residual_norm(&x);
    Ok(ApproxResult { method: Method::Or, k: m, residual_norm: residual, x: Some(x), error_norm: None })
}

/// Basic residual-optimal run: at each step `k` the Arnoldi decomposition is
/// advanced to step `k + nu`, the `(k+nu) x k` coefficient matrix
/// `sum_j d_j H-hat_{k+j,k}` and right side `sum_l n_l H-hat_{k+l,k} e_1 ||b||`
/// are rebuilt from Hessenberg power blocks, and the least-squares problem
/// is solved from scratch by Givens QR.
///
/// A happy breakdown before step `k + nu` switches to the exact solve
/// `D(H) y = N(H) e_1` on the invariant subspace, which is recorded as the
/// final entry (at its own step index) with residual evaluated directly.
pub fn arnoldi_or_basic(
    prob: &RationalKrylovProblem,
    kmax: usize,
    tol: f64,
) -> Result<Vec<ApproxResult>> {
    arnoldi_or_basic_with(prob, OrOptions::new(kmax).with_tol(tol))
}

pub fn arnoldi_or_basic_with(
    prob: &RationalKrylovProblem,
    opts: OrOptions,
) -> Result<Vec<ApproxResult>> {
    let nu = prob.nu();
    let n = prob.n();
    let d_coeffs: Vec<Complex64> = prob.rational().denominator().coeffs().to_vec();
    let n_coeffs: Vec<Complex64> = prob.rational().numerator().coeffs().to_vec();
    let threshold = opts.tol * prob.n_of_a_b().norm2();

    let mut dec = prob.arnoldi();
    let mut results = Vec::new();
    for k in 1..=opts.kmax {
        let target = k + nu;
        let reachable = target.min(n);
        let need = reachable.saturating_sub(dec.steps_done());
        if dec.breakdown_at().is_none() && need > 0 {
            arnoldi_extend(&mut dec, &prob.a, need)?;
        }
        if dec.steps_done() < target {
            // invariant subspace (breakdown or full dimension): exact solve
            let m = dec.steps_done();
            results.push(exact_solve_on_invariant(prob, &dec, m)?);
            break;
        }
        let hs = dec.h_square(target);
        let mut coeff = CMatrix::zeros(target, k);
        for (j, &dj) in d_coeffs.iter().enumerate() {
            if dj == Complex64::ZERO {
                continue;
            }
            let block = hessenberg_power_block(&hs, j, k);
            coeff = coeff.add(&block.scale(dj));
        }
        let eta_raw = hessenberg_poly_column(&hs, &n_coeffs, 0, target);
        let eta = CVector::from_raw(eta_raw.iter().map(|z| z * prob.b_norm).collect());
        let (y, residual) = givens_qr_least_squares(&coeff, &eta)?;
        let done = residual <= threshold || k == opts.kmax;
        let x = if opts.keep_iterates || done {
            Some(dec.combine(&y))
        } else {
            None
        };
        results.push(ApproxResult { method: Method::Or, k, residual_norm: residual, x, error_norm: None });
        if residual <= threshold {
            break;
        }
    }
    Ok(results)
}

/// Incremental least-squares state of the residual-optimal run: the
/// rotation-transformed coefficient matrix (upper triangular, stored by
/// columns), the transformed right side, the rotation log, and the residual
/// history. One step appends one column and one row, applies the logged
/// rotations to the new column only, forms `J = deg D` new rotations, and
/// reads the residual off the tail of the transformed right side.
pub struct ORState {
    pub nu: usize,
    pub j_deg: usize,
    pub dec: ArnoldiDecomposition,
    /// Transformed columns; column `i` keeps its `i+1` structurally nonzero
    /// leading entries.
    pub dcal: Vec<Vec<Complex64>>,
    /// Transformed right side, length `k + nu`.
    pub eta: Vec<Complex64>,
    pub rotations: Vec<GivensRotation>,
    pub residual_history: Vec<f64>,
    pub k: usize,
    scale_sqr: f64,
}

impl ORState {
    /// Fresh state at step 0.
    pub fn start(prob: &RationalKrylovProblem) -> Self {
        Self::new(prob)
    }

    /// Runs one incremental step: extends the Arnoldi decomposition by one
    /// column, updates the transformed least-squares data, and returns the
    /// new residual norm (or the exact solve once the Krylov space turns
    /// invariant).
    pub fn advance(&mut self, prob: &RationalKrylovProblem) -> Result<StepOutcome> {
        or_incremental_step(prob, self)
    }

    /// Forms `x_k = Q_k y` from the current triangular system.
    pub fn current_solution(&self) -> Result<CVector> {
        let y = self.solve_coefficients()?;
        Ok(self.dec.combine(&y))
    }

    fn new(prob: &RationalKrylovProblem) -> Self {
        ORState {
            nu: prob.nu(),
            j_deg: prob.rational().denominator().degree(),
            dec: prob.arnoldi(),
            dcal: Vec::new(),
            eta: Vec::new(),
            rotations: Vec::new(),
            residual_history: Vec::new(),
            k: 0,
            scale_sqr: 0.0,
        }
    }

    /// Solves the upper triangular `k x k` system for the coefficient vector.
    fn solve_coefficients(&self) -> Result<CVector> {
        let k = self.k;
        let scale = self.scale_sqr.sqrt();
        let mut y = vec![Complex64::ZERO; k];
        for i in (0..k).rev() {
            let diag = self.dcal[i][i];
            if diag.norm() < PIVOT_RTOL * scale {
                return Err(Error::RankDeficient { index: i, value: diag.norm() });
            }
            let mut s = self.eta[i];
            for j in (i + 1)..k {
                s -= self.dcal[j][i] * y[j];
            }
            y[i] = s / diag;
        }
        Ok(CVector::from_raw(y))
    }
}

/// Incremental residual-optimal run; identical output to
/// [`arnoldi_or_basic`] up to roundoff, at the per-step cost of one new
/// Hessenberg column, the logged rotations applied to that column, `deg D`
/// new rotations, and one triangular solve.
pub fn arnoldi_or_incremental(
    prob: &RationalKrylovProblem,
    kmax: usize,
    tol: f64,
) -> Result<Vec<ApproxResult>> {
    arnoldi_or_incremental_with(prob, OrOptions::new(kmax).with_tol(tol)).map(|(r, _)| r)
}

pub fn arnoldi_or_incremental_with(
    prob: &RationalKrylovProblem,
    opts: OrOptions,
) -> Result<(Vec<ApproxResult>, ORState)> {
    let mut state = ORState::new(prob);
    let mut results = Vec::new();
    let threshold = opts.tol * prob.n_of_a_b().norm2();
    for _ in 1..=opts.kmax {
        match or_incremental_step(prob, &mut state)? {
            StepOutcome::Exact(result) => {
                results.push(result);
                break;
            }
            StepOutcome::Residual(residual) => {
                let k = state.k;
                let done = residual <= threshold || k == opts.kmax;
                let x = if opts.keep_iterates || done {
                    let y = state.solve_coefficients()?;
                    Some(state.dec.combine(&y))
                } else {
                    None
                };
                results.push(ApproxResult {
                    method: Method::Or,
                    k,
                    residual_norm: residual,
                    x,
                    error_norm: None,
                });
                if residual <= threshold {
                    break;
                }
            }
        }
    }
    Ok((results, state))
}

/// Outcome of one incremental step.
pub enum StepOutcome {
    /// Normal step: the new least-squares residual norm.
    Residual(f64),
    /// The Krylov space turned invariant; this exact solve is final.
    Exact(ApproxResult),
}

fn or_incremental_step(
    prob: &RationalKrylovProblem,
    state: &mut ORState,
) -> Result<StepOutcome> {
    let nu = state.nu;
    let j_deg = state.j_deg;
    let n = prob.n();
    let k = state.k + 1;
    let target = k + nu;
    let reachable = target.min(n);
    let need = reachable.saturating_sub(state.dec.steps_done());
    if state.dec.breakdown_at().is_none() && need > 0 {
        arnoldi_extend(&mut state.dec, &prob.a, need)?;
    }
    if state.dec.steps_done() < target {
        let m = state.dec.steps_done();
        return Ok(StepOutcome::Exact(exact_solve_on_invariant(prob, &state.dec, m)?));
    }
    let hs = state.dec.h_square(target);

    if k == 1 {
        // right side enters once: N(H_{1+nu})(:,1) ||b||, padded with zeros
        // and rotated from here on
        let eta_raw =
            hessenberg_poly_column(&hs, prob.rational().numerator().coeffs(), 0, target);
        state.eta = eta_raw.iter().map(|z| z * prob.b_norm).collect();
    } else {
        state.eta.push(Complex64::ZERO);
    }

    // new column of D(H_{k+nu})(:,1:k); its rows beyond k+J are structurally
    // zero and previous rotations only touch rows below k-1+J
    let mut col = hessenberg_poly_column(
        &hs,
        prob.rational().denominator().coeffs(),
        k - 1,
        target,
    );
    state.scale_sqr += col.iter().map(|z| z.norm_sqr()).sum::<f64>();
    for rot in &state.rotations {
        rot.apply_to_slice(&mut col);
    }
    // J new rotations annihilate rows k..k+J-1 (0-based) against row k-1
    for t in 1..=j_deg {
        let (a, b) = (col[k - 1], col[k - 1 + t]);
        let mut rot = if a == Complex64::ZERO && b == Complex64::ZERO {
            GivensRotation { i: 0, j: 0, c: 1.0, s: Complex64::ZERO }
        } else {
            compute_givens(a, b)?
        };
        rot.i = k - 1;
        rot.j = k - 1 + t;
        rot.apply_to_slice(&mut col);
        col[k - 1 + t] = Complex64::ZERO;
        rot.apply_to_slice(&mut state.eta);
        state.rotations.push(rot);
    }
    col.truncate(k);
    state.dcal.push(col);
    state.k = k;

    let residual = state.eta[k..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    state.residual_history.push(residual);
    Ok(StepOutcome::Residual(residual))
}

/// The polynomial `p_{k-1}` implied by a Krylov combination `x = Q_k y`,
/// i.e. coefficients with `x = p_{k-1}(A) b`. Follows the Arnoldi
/// recurrence, so it is only numerically meaningful for modest `k`.
pub fn implied_polynomial(dec: &ArnoldiDecomposition, y: &CVector, b_norm: f64) -> Polynomial {
    let k = y.len();
    // pi_{j}: q_{j+1} = pi_j(A) b
    let mut pis: Vec<Polynomial> = Vec::with_capacity(k);
    pis.push(Polynomial::constant(Complex64::new(1.0 / b_norm, 0.0)));
    let z = Polynomial::new(vec![Complex64::ZERO, Complex64::ONE]);
    for j in 0..k.saturating_sub(1) {
        // h_{j+2,j+1} pi_{j+1} = z pi_j - sum_{i<=j} h_{i+1,j+1} pi_i
        let mut next = z.mul(&pis[j]);
        for (i, pi) in pis.iter().enumerate() {
            next = next.add(&pi.scale(-dec.h_entry(i, j)));
        }
        let sub = dec.h_entry(j + 1, j);
        pis.push(next.scale(Complex64::new(1.0 / sub.re, 0.0)));
    }
    let mut p = Polynomial::zero();
    for (j, pi) in pis.iter().enumerate() {
        p = p.add(&pi.scale(y[j]));
    }
    p
}

// ── Arnoldi-FA ──────────────────────────────────────────────────────

/// Projected-function approximation at step `k` on a caller-provided
/// decomposition (which must have completed `k` steps).
pub fn arnoldi_fa_on(
    prob: &RationalKrylovProblem,
    dec: &ArnoldiDecomposition,
    k: usize,
) -> Result<ApproxResult> {
    assert!(k >= 1 && k <= dec.steps_done());
    let hk = dec.h_square(k);
    let d_hk = prob.rational().denominator().matrix_eval(&hk);
    let n_hk = prob.rational().numerator().matrix_eval(&hk);
    let rhs = n_hk.col(0).scale(Complex64::new(prob.b_norm, 0.0));
    let y = match dense_solve(&d_hk, &rhs) {
        Ok(y) => y,
        Err(Error::SingularMatrix { .. }) => {
            return Err(Error::SingularProjectedDenominator { k });
        }
        Err(e) => return Err(e),
    };
    let x = dec.combine(&y);
    let residual = prob.residual_norm(&x);
    Ok(ApproxResult { method: Method::Fa, k, residual_norm: residual, x: Some(x), error_norm: None })
}

/// Projected-function approximation at step `k` (fresh decomposition).
pub fn arnoldi_fa(prob: &RationalKrylovProblem, k: usize) -> Result<ApproxResult> {
    let mut dec = prob.arnoldi();
    arnoldi_extend(&mut dec, &prob.a, k.min(prob.n()))?;
    let k_eff = k.min(dec.steps_done());
    arnoldi_fa_on(prob, &dec, k_eff)
}

/// Per-step curve of the projected-function approximation. Steps where the
/// projected denominator is singular are recorded as `None` (the method can
/// skip steps; its curve need not be monotone). Stops at breakdown, where
/// the final step is exact.
pub fn arnoldi_fa_curve(
    prob: &RationalKrylovProblem,
    kmax: usize,
) -> Result<Vec<Option<ApproxResult>>> {
    let mut dec = prob.arnoldi();
    let mut out = Vec::new();
    for k in 1..=kmax.min(prob.n()) {
        let need = k.saturating_sub(dec.steps_done());
        if dec.breakdown_at().is_none() && need > 0 {
            arnoldi_extend(&mut dec, &prob.a, need)?;
        }
        if dec.steps_done() < k {
            break;
        }
        match arnoldi_fa_on(prob, &dec, k) {
            Ok(result) => out.push(Some(result)),
            Err(Error::SingularProjectedDenominator { .. }) => out.push(None),
            Err(e) => return Err(e),
        }
        if dec.breakdown_at() == Some(k) {
            break;
        }
    }
    Ok(out)
}

// ── Optimal 2-norm projection ───────────────────────────────────────

/// Orthogonal projection of the reference solution onto the Krylov space:
/// 2-norm-optimal in the space by construction.
pub fn optimal_projection_on(
    prob: &RationalKrylovProblem,
    dec: &ArnoldiDecomposition,
    k: usize,
) -> Result<ApproxResult> {
    assert!(k >= 1 && k <= dec.basis_len());
    let reference = prob.reference()?;
    let mut x = CVector::zeros(prob.n());
    for j in 0..k {
        let q = dec.q_col(j);
        x.axpy_in_place(dot(q, reference), q);
    }
    let residual = prob.residual_norm(&x);
    let error = reference.sub(&x).norm2();
    Ok(ApproxResult {
        method: Method::Opt2,
        k,
        residual_norm: residual,
        x: Some(x),
        error_norm: Some(error),
    })
}

pub fn optimal_projection(prob: &RationalKrylovProblem, k: usize) -> Result<ApproxResult> {
    let mut dec = prob.arnoldi();
    arnoldi_extend(&mut dec, &prob.a, k.min(prob.n()))?;
    optimal_projection_on(prob, &dec, k.min(dec.basis_len()))
}

pub fn optimal_projection_curve(
    prob: &RationalKrylovProblem,
    kmax: usize,
) -> Result<Vec<ApproxResult>> {
    let mut dec = prob.arnoldi();
    let mut out = Vec::new();
    for k in 1..=kmax.min(prob.n()) {
        let need = k.saturating_sub(dec.steps_done());
        if dec.breakdown_at().is_none() && need > 0 {
            arnoldi_extend(&mut dec, &prob.a, need)?;
        }
        let avail = dec.basis_len();
        if avail < k {
            break;
        }
        out.push(optimal_projection_on(prob, &dec, k)?);
        if dec.breakdown_at() == Some(k) {
            break;
        }
    }
    Ok(out)
}

// ── Partial-fraction shifted solves ─────────────────────────────────

/// Simultaneous shifted minimal-residual solves over one shared Arnoldi
/// basis: with `R = polynomial_part + sum_i w_i / (z - r_i)`, each term
/// `(A - r_i I)^{-1} b` is approximated over the same Krylov space using the
/// shifted Hessenberg relation `(A - rI) Q_k = Q_{k+1} (H_{k+1,k} - r Ihat)`,
/// and the pieces are recombined. The denominator must have simple roots.
pub fn partial_fraction_solve(
    prob: &RationalKrylovProblem,
    kmax: usize,
    tol: f64,
) -> Result<Vec<ApproxResult>> {
    let pf = partial_fractions(prob.rational())?;
    let n = prob.n();
    let threshold = tol * prob.n_of_a_b().norm2();
    // polynomial part acts on b directly (vector Horner)
    let poly_term = if pf.polynomial_part.is_zero() {
        None
    } else {
        let coeffs = pf.polynomial_part.coeffs();
        let mut acc = prob.b.scale(*coeffs.last().unwrap());
        for &c in coeffs.iter().rev().skip(1) {
            acc = prob.a.matvec(&acc);
            acc.axpy_in_place(c, &prob.b);
        }
        Some(acc)
    };

    let mut dec = prob.arnoldi();
    let mut out = Vec::new();
    for k in 1..=kmax.min(n) {
        let need = k.saturating_sub(dec.steps_done());
        if dec.breakdown_at().is_none() && need > 0 {
            arnoldi_extend(&mut dec, &prob.a, need)?;
        }
        if dec.steps_done() < k {
            break;
        }
        let h_rect = dec.h_rect(k);
        // y = sum_i w_i c_i in Krylov coordinates
        let mut y = CVector::zeros(k);
        for (&pole, &weight) in pf.poles.iter().zip(&pf.weights) {
            let mut shifted = h_rect.clone();
            for c in 0..k {
                shifted[(c, c)] -= pole;
            }
            let mut rhs = CVector::zeros(k + 1);
            rhs[0] = Complex64::new(prob.b_norm, 0.0);
            let (c_i, _) = givens_qr_least_squares(&shifted, &rhs)?;
            y.axpy_in_place(weight, &c_i);
        }
        let mut x = dec.combine(&y);
        if let Some(poly_term) = &poly_term {
            x = x.add(poly_term);
        }
        let residual = prob.residual_norm(&x);
        out.push(ApproxResult {
            method: Method::Pfrac,
            k,
            residual_norm: residual,
            x: Some(x),
            error_norm: None,
        });
        if residual <= threshold || dec.breakdown_at() == Some(k) {
            break;
        }
    }
    Ok(out)
}

// ── FA/OR residual relation for linear systems ──────────────────────

/// Outcome of the linear-system residual-relation check
/// `||r_k^FA|| = ||r_k^OR|| / sqrt(1 - (||r_k^OR|| / ||r_{k-1}^OR||)^2)`.
#[derive(Debug)]
pub struct RelationCheck {
    /// Maximum relative deviation over the checked steps.
    pub max_deviation: f64,
    /// Steps skipped because the optimal residual stagnated (the projected
    /// method is undefined there) or had already converged to roundoff.
    pub skipped: Vec<usize>,
    pub checked: usize,
}

/// Verifies the known FA/OR (FOM/GMRES) residual-norm relation. Only the
/// linear-system case `deg D = 1`, `deg N = 0` qualifies.
pub fn fa_or_relation_check(
    prob: &RationalKrylovProblem,
    kmax: usize,
) -> Result<RelationCheck> {
    let deg_d = prob.rational().denominator().degree();
    let deg_n = prob.rational().numerator().degree();
    if deg_d != 1 || deg_n != 0 {
        return Err(Error::NotLinearSystem { deg_d, deg_n });
    }
    let or = arnoldi_or_incremental(prob, kmax, 0.0)?;
    let r0 = prob.n_of_a_b().norm2();
    let fa = arnoldi_fa_curve(prob, kmax)?;

    let mut max_deviation = 0.0f64;
    let mut skipped = Vec::new();
    let mut checked = 0usize;
    let mut prev = r0;
    for step in &or {
        let k = step.k;
        let rk = step.residual_norm;
        let ratio = rk / prev;
        let fa_res = fa.get(k - 1).and_then(|r| r.as_ref());
        if ratio >= 1.0 - 1e-14 || rk <= 1e-12 * r0 || fa_res.is_none() {
            skipped.push(k);
            prev = rk;
            continue;
        }
        let predicted = rk / (1.0 - ratio * ratio).sqrt();
        let actual = fa_res.unwrap().residual_norm;
        let dev = (actual - predicted).abs() / predicted;
        max_deviation = max_deviation.max(dev);
        checked += 1;
        prev = rk;
    }
    Ok(RelationCheck { max_deviation, skipped, checked })
}

// ── Per-step CSV records ────────────────────────────────────────────

/// One `curves.csv` row. Empty fields encode sentinel/skipped entries.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub k: usize,
    pub method: Method,
    pub residual_2norm: Option<f64>,
    pub error_2norm: Option<f64>,
    pub s_norm_error: Option<f64>,
}

pub fn write_curves_csv(w: &mut impl std::io::Write, records: &[StepRecord]) -> Result<()> {
    writeln!(w, "k,method,residual_2norm,error_2norm,s_norm_error")?;
    let fmt = |v: &Option<f64>| v.map(crate::mtx::fmt_g17).unwrap_or_default();
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.k,
            r.method.label(),
            fmt(&r.residual_2norm),
            fmt(&r.error_2norm),
            fmt(&r.s_norm_error)
        )?;
    }
    Ok(())
}

pub fn read_curves_csv(r: impl std::io::BufRead) -> Result<Vec<StepRecord>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if i == 0 {
            if line.trim() != "k,method,residual_2norm,error_2norm,s_norm_error" {
                return Err(Error::Parse { line: 1, message: "bad curves.csv header".into() });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 5 {
            return Err(Error::Parse { line: i + 1, message: "expected 5 fields".into() });
        }
        let parse_opt = |s: &str, line: usize| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse::<f64>()
                    .map(Some)
                    .map_err(|_| Error::Parse { line, message: format!("bad float {s:?}") })
            }
        };
        out.push(StepRecord {
            k: parts[0]
                .parse()
                .map_err(|_| Error::Parse { line: i + 1, message: "bad step index".into() })?,
            method: Method::parse(parts[1])
                .ok_or_else(|| Error::Parse { line: i + 1, message: "bad method tag".into() })?,
            residual_2norm: parse_opt(parts[2], i + 1)?,
            error_2norm: parse_opt(parts[3], i + 1)?,
            s_norm_error: parse_opt(parts[4], i + 1)?,
        });
    }
    Ok(out)
}
