//! Eigenvalue computations and numerical-range machinery.
//!
//! * [`hermitian_eigs`] — cyclic Jacobi on complex Hermitian matrices,
//!   eigenvectors essentially for free.
//! * [`general_eigs`] — Householder reduction to Hessenberg form followed by
//!   shifted QR with the Wilkinson shift; eigenvectors by inverse iteration
//!   on request.
//! * [`numerical_range_boundary`] / [`numerical_radius`] — boundary points of
//!   `W(A) = { <Aq, q> : <q, q> = 1 }` via the top eigenpair of the rotated
//!   Hermitian part, and the numerical radius by grid search plus
//!   golden-section refinement.
//! * [`matrix_sqrt_hermitian`], [`cond2`], [`eigenvector_condition`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{dot, CMatrix, CVector, LuFactors};
use crate::rng::Prng;

/// Off-diagonal convergence tolerance of the Jacobi sweep, relative to
/// `||H||_F`.
const JACOBI_RTOL: f64 = 1e-14;

/// Relative deflation threshold of the QR iteration.
const QR_DEFLATE_RTOL: f64 = 1e-14;

/// Eigenvalues with optional unit-norm eigenvector columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub eigenvectors: Option<CMatrix>,
}

impl Spectrum {
    /// Real parts of the eigenvalues (meaningful for Hermitian input, where
    /// the imaginary parts are exactly zero).
    pub fn real_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }
}

// ── Hermitian: cyclic Jacobi ────────────────────────────────────────

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Eigenvalues are real and returned ascending; `want_vectors` requests the
/// accumulated unitary transform.
///
/// The input must satisfy `||H - H^*||_F <= 1e-12 ||H||_F`.
pub fn hermitian_eigs(h: &CMatrix, want_vectors: bool) -> Result<Spectrum> {
    if !h.is_square() {
        return Err(Error::invalid("hermitian_eigs requires a square matrix"));
    }
    let scale = h.frobenius_norm();
    let deviation = h.hermitian_deviation();
    if deviation > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.rows();
    // work on the exactly-Hermitian part so rounding in the input cannot
    // drift through the sweeps
    let mut a = h.hermitian_part();
    let mut v = if want_vectors { Some(CMatrix::identity(n)) } else { None };

    let off = |a: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let tol = JACOBI_RTOL * scale;
    let mut sweeps = 0;
    while off(&a) > tol && sweeps < 60 {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / apq.norm();
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = phase * (t * c);
                // A <- U^* A U with the plane rotation U = [[c, s], [-conj(s), c]]
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = c * aip - s.conj() * aiq;
                    a[(i, q)] = s * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = c * apj - s * aqj;
                    a[(q, j)] = s.conj() * apj + c * aqj;
                }
                a[(p, q)] = Complex64::ZERO;
                a[(q, p)] = Complex64::ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                if let Some(v) = v.as_mut() {
                    for i in 0..n {
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = c * vip - s.conj() * viq;
                        v[(i, q)] = s * vip + c * viq;
                    }
                }
            }
        }
    }
    if off(&a) > tol.max(1e-11 * scale) {
        return Err(Error::NoConvergence {
            converged: 0,
            total: n,
            partial: (0..n).map(|i| a[(i, i)]).collect(),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues: Vec<Complex64> =
        order.iter().map(|&i| Complex64::new(a[(i, i)].re, 0.0)).collect();
    let eigenvectors = v.map(|v| {
        let cols: Vec<CVector> = order.iter().map(|&i| normalize_phase(v.col(i))).collect();
        CMatrix::from_columns(&cols)
    });
    Ok(Spectrum { eigenvalues, eigenvectors })
}

/// Scales a vector so its largest-magnitude entry is real positive.
fn normalize_phase(v: CVector) -> CVector {
    let mut best = 0usize;
    let mut best_mag = 0.0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > best_mag {
            best_mag = z.norm();
            best = i;
        }
    }
    if best_mag == 0.0 {
        return v;
    }
    let phase = v[best] / best_mag;
    v.scale(phase.conj())
}

// ── General: Hessenberg + shifted QR ────────────────────────────────

/// Reduces a square matrix to upper Hessenberg form by Householder
/// reflections (similarity transform; transform itself is not accumulated).
pub fn hessenberg_reduce(a: &CMatrix) -> CMatrix {
    assert!(a.is_square());
    let n = a.rows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k, rows k+1..n
        let mut u: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm_x = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = u[0];
        let sign = if x0 == Complex64::ZERO { Complex64::ONE } else { x0 / x0.norm() };
        u[0] += sign * norm_x;
        let unorm_sqr: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        if unorm_sqr == 0.0 {
            continue;
        }
        let beta = 2.0 / unorm_sqr;
        // left: H <- P H, rows k+1..n
        for j in 0..n {
            let mut w = Complex64::ZERO;
            for (t, ui) in u.iter().enumerate() {
                w += ui.conj() * h[(k + 1 + t, j)];
            }
            w *= beta;
            for (t, ui) in u.iter().enumerate() {
                let delta = w * ui;
                h[(k + 1 + t, j)] -= delta;
            }
        }
        // right: H <- H P, columns k+1..n
        for i in 0..n {
            let mut w = Complex64::ZERO;
            for (t, ui) in u.iter().enumerate() {
                w += h[(i, k + 1 + t)] * ui;
            }
            w *= beta;
            for (t, ui) in u.iter().enumerate() {
                let delta = w * ui.conj();
                h[(i, k + 1 + t)] -= delta;
            }
        }
        // entries below the subdiagonal of column k are now zero
        for i in (k + 2)..n {
            h[(i, k)] = Complex64::ZERO;
        }
        h[(k + 1, k)] = -sign * norm_x;
    }
    h
}

/// Eigenvalues of a square matrix by the shifted QR algorithm on the
/// Hessenberg form. Eigenvectors (unit 2-norm columns, matched to the
/// eigenvalue order) come from one inverse-iteration solve each when
/// requested.
///
/// Eigenvalues are sorted by real part, then imaginary part. On iteration
/// failure the partial diagonal is reported inside
/// [`Error::NoConvergence`]; it is not a valid spectrum.
pub fn general_eigs(a: &CMatrix, want_vectors: bool) -> Result<Spectrum> {
    if !a.is_square() {
        return Err(Error::invalid("general_eigs requires a square matrix"));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Spectrum { eigenvalues: vec![], eigenvectors: None });
    }
    let scale = a.frobenius_norm();
    let mut h = hessenberg_reduce(a);
    let mut eigenvalues = Vec::with_capacity(n);

    if n == 1 {
        eigenvalues.push(h[(0, 0)]);
    } else {
        let mut hi = n - 1;
        let mut stuck_iters = 0usize;
        let mut total_iters = 0usize;
        let max_total = 60 * n;
        'outer: loop {
            // deflate converged trailing 1x1 blocks
            loop {
                if hi == 0 {
                    eigenvalues.push(h[(0, 0)]);
                    break 'outer;
                }
                let sub = h[(hi, hi - 1)].norm();
                let local = QR_DEFLATE_RTOL * (h[(hi - 1, hi - 1)].norm() + h[(hi, hi)].norm());
                let thresh = if local > 0.0 { local } else { 1e-16 * scale };
                if sub <= thresh {
                    h[(hi, hi - 1)] = Complex64::ZERO;
                    eigenvalues.push(h[(hi, hi)]);
                    hi -= 1;
                    stuck_iters = 0;
                } else {
                    break;
                }
            }
            // find the start of the active unreduced block
            let mut lo = hi;
            while lo > 0 {
                let sub = h[(lo, lo - 1)].norm();
                let local = QR_DEFLATE_RTOL * (h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm());
                let thresh = if local > 0.0 { local } else { 1e-16 * scale };
                if sub <= thresh {
                    h[(lo, lo - 1)] = Complex64::ZERO;
                    break;
                }
                lo -= 1;
            }

            total_iters += 1;
            stuck_iters += 1;
            if total_iters > max_total {
                return Err(Error::NoConvergence {
                    converged: eigenvalues.len(),
                    total: n,
                    partial: eigenvalues,
                });
            }

            let mu = if stuck_iters % 12 == 0 {
                // exceptional shift to break symmetric cycles
                h[(hi, hi)] + Complex64::new(0.75, 0.433) * h[(hi, hi - 1)].norm()
            } else {
                wilkinson_shift(
                    h[(hi - 1, hi - 1)],
                    h[(hi - 1, hi)],
                    h[(hi, hi - 1)],
                    h[(hi, hi)],
                )
            };

            qr_step(&mut h, lo, hi, mu);
        }
    }

    eigenvalues.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));

    let eigenvectors = if want_vectors {
        let cols: Vec<CVector> = eigenvalues
            .iter()
            .map(|&lambda| inverse_iteration_vector(a, lambda))
            .collect::<Result<_>>()?;
        Some(CMatrix::from_columns(&cols))
    } else {
        None
    };
    Ok(Spectrum { eigenvalues, eigenvectors })
}

/// Eigenvalue of the trailing 2x2 block closest to its bottom-right entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let r1 = (tr + disc) * 0.5;
    let r2 = (tr - disc) * 0.5;
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// One explicit shifted QR step on the active block `lo..=hi` of a
/// Hessenberg matrix: factor `H - mu I = QR` by adjacent Givens rotations,
/// then form `RQ + mu I`.
fn qr_step(h: &mut CMatrix, lo: usize, hi: usize, mu: Complex64) {
    for i in lo..=hi {
        h[(i, i)] -= mu;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let (a, b) = (h[(i, i)], h[(i + 1, i)]);
        if a == Complex64::ZERO && b == Complex64::ZERO {
            rotations.push(None);
            continue;
        }
        let rot = crate::linalg::compute_givens(a, b).expect("nonzero pair");
        // rows i, i+1 over active columns
        for j in i..=hi {
            let xi = h[(i, j)];
            let xj = h[(i + 1, j)];
            h[(i, j)] = rot.c * xi + rot.s * xj;
            h[(i + 1, j)] = -rot.s.conj() * xi + rot.c * xj;
        }
        h[(i + 1, i)] = Complex64::ZERO;
        rotations.push(Some(rot));
    }
    for (t, rot) in rotations.iter().enumerate() {
        let Some(rot) = rot else { continue };
        let col = lo + t;
        // columns col, col+1 over rows lo..=min(col+1, hi)
        for r in lo..=(col + 1).min(hi) {
            let xi = h[(r, col)];
            let xj = h[(r, col + 1)];
            h[(r, col)] = rot.c * xi + rot.s.conj() * xj;
            h[(r, col + 1)] = -rot.s * xi + rot.c * xj;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += mu;
    }
}

/// One eigenvector by inverse iteration with a deterministic start vector.
fn inverse_iteration_vector(a: &CMatrix, lambda: Complex64) -> Result<CVector> {
    let n = a.rows();
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut rng = Prng::new(0x5eed_e16e);
    let mut x = CVector::from_raw((0..n).map(|_| rng.next_complex_normal()).collect());
    x = x.scale(Complex64::new(1.0 / x.norm2(), 0.0));

    let mut perturb = 1e-13 * scale;
    for _attempt in 0..6 {
        let shifted = a.add_scaled_identity(-(lambda + Complex64::new(perturb, 0.0)));
        match LuFactors::new(&shifted, 0.0) {
            Ok(lu) => {
                let mut v = x.clone();
                let mut ok = true;
                for _ in 0..3 {
                    let y = lu.solve_vec(&v);
                    let norm = y.norm2();
                    if !norm.is_finite() || norm == 0.0 {
                        ok = false;
                        break;
                    }
                    v = y.scale(Complex64::new(1.0 / norm, 0.0));
                }
                if ok {
                    return Ok(normalize_phase(v));
                }
            }
            Err(_) => {}
        }
        perturb *= 32.0;
        x = CVector::from_raw((0..n).map(|_| rng.next_complex_normal()).collect());
        x = x.scale(Complex64::new(1.0 / x.norm2(), 0.0));
    }
    Err(Error::invalid(format!(
        "inverse iteration failed for eigenvalue {lambda}"
    )))
}

// ── Condition numbers ───────────────────────────────────────────────

/// 2-norm condition number via `sqrt(lambda_max / lambda_min)` of `A^* A`.
pub fn cond2(a: &CMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::invalid("cond2 requires a square matrix"));
    }
    let gram = a.adjoint().matmul(a).hermitian_part();
    let spec = hermitian_eigs(&gram, false)?;
    let lams = spec.real_eigenvalues();
    let lam_min = lams[0].max(0.0);
    let lam_max = lams[lams.len() - 1];
    if lam_min <= 1e-28 * lam_max {
        return Err(Error::SingularMatrix { pivot: lam_min, threshold: 1e-28 * lam_max });
    }
    Ok((lam_max / lam_min).sqrt())
}

/// Condition number of a matrix of unit-norm eigenvectors.
///
/// Requires a simple spectrum: minimum pairwise eigenvalue separation above
/// `1e-8 ||A||_F`.
pub fn eigenvector_condition(a: &CMatrix) -> Result<f64> {
    let spec = general_eigs(a, true)?;
    let lams = &spec.eigenvalues;
    let mut min_sep = f64::INFINITY;
    for i in 0..lams.len() {
        for j in (i + 1)..lams.len() {
            min_sep = min_sep.min((lams[i] - lams[j]).norm());
        }
    }
    if lams.len() > 1 && min_sep <= 1e-8 * a.frobenius_norm() {
        return Err(Error::ClusteredSpectrum { separation: min_sep });
    }
    cond2(spec.eigenvectors.as_ref().expect("vectors requested"))
}

// ── Numerical range ─────────────────────────────────────────────────

/// Which region a boundary sample set describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionKind {
    NumericalRange,
    NumericalRangeMinusDisks,
    Disk,
}

impl RegionKind {
    pub fn label(&self) -> &'static str {
        match self {
            RegionKind::NumericalRange => "numerical_range",
            RegionKind::NumericalRangeMinusDisks => "numerical_range_minus_disks",
            RegionKind::Disk => "disk",
        }
    }
}

/// Sampled boundary of a region in the complex plane.
#[derive(Clone, Debug)]
pub struct RegionBoundary {
    pub points: Vec<Complex64>,
    pub angles: Vec<f64>,
    pub kind: RegionKind,
}

impl RegionBoundary {
    /// CSV serialization: `theta,re,im` with 17 significant digits.
    pub fn write_csv(&self, w: &mut impl std::io::Write) -> Result<()> {
        writeln!(w, "theta,re,im")?;
        for (theta, z) in self.angles.iter().zip(&self.points) {
            writeln!(
                w,
                "{},{},{}",
                crate::mtx::fmt_g17(*theta),
                crate::mtx::fmt_g17(z.re),
                crate::mtx::fmt_g17(z.im)
            )?;
        }
        Ok(())
    }

    /// Convex hull of the boundary samples (monotone chain,
    /// counterclockwise, no repeated endpoint).
    pub fn convex_hull(&self) -> Vec<Complex64> {
        convex_hull(&self.points)
    }
}

/// Andrew's monotone chain. Returns the hull counterclockwise; collinear
/// points are dropped. Degenerate inputs give fewer than 3 vertices.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup_by(|a, b| a == b);
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let cross = |o: Complex64, a: Complex64, b: Complex64| -> f64 {
        (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
    };
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * n);
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev() {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Point-in-convex-hull test with absolute slack `tol` (hull from
/// [`convex_hull`]; degenerate hulls fall back to segment/point distance).
pub fn hull_contains(hull: &[Complex64], z: Complex64, tol: f64) -> bool {
    match hull.len() {
        0 => false,
        1 => (z - hull[0]).norm() <= tol,
        2 => dist_to_segment(z, hull[0], hull[1]) <= tol,
        _ => {
            for i in 0..hull.len() {
                let a = hull[i];
                let b = hull[(i + 1) % hull.len()];
                let cross = (b.re - a.re) * (z.im - a.im) - (b.im - a.im) * (z.re - a.re);
                let edge_len = (b - a).norm().max(f64::MIN_POSITIVE);
                if cross / edge_len < -tol {
                    return false;
                }
            }
            true
        }
    }
}

fn dist_to_segment(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len_sqr = ab.norm_sqr();
    if len_sqr == 0.0 {
        return (z - a).norm();
    }
    let t = ((z - a).re * ab.re + (z - a).im * ab.im) / len_sqr;
    let t = t.clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

/// Support value of the numerical range in "direction" `theta`:
/// `max Re(e^{i theta} z)` over `W(A)`, the top eigenvalue of
/// `(e^{i theta} A + e^{-i theta} A^*) / 2`. Returns the value and the
/// maximizing unit vector.
fn support_eigenpair(a: &CMatrix, theta: f64) -> Result<(f64, CVector)> {
    let rotated = a.scale(Complex64::from_polar(1.0, theta));
    let herm = rotated.hermitian_part();
    let spec = hermitian_eigs(&herm, true)?;
    let n = a.rows();
    let lam = spec.eigenvalues[n - 1].re;
    let q = spec.eigenvectors.as_ref().expect("vectors requested").col(n - 1);
    Ok((lam, q))
}

/// Support value only (no eigenvector accumulation).
fn support_value(a: &CMatrix, theta: f64) -> Result<f64> {
    let rotated = a.scale(Complex64::from_polar(1.0, theta));
    let herm = rotated.hermitian_part();
    let spec = hermitian_eigs(&herm, false)?;
    Ok(spec.eigenvalues[a.rows() - 1].re)
}

/// Samples the boundary of the numerical range at `m_angles` equispaced
/// support angles `theta_j = 2 pi j / m_angles`. Each boundary point is the
/// Rayleigh quotient `q^* A q` of the top eigenvector of the rotated
/// Hermitian part, so the support function is exact at its own angle.
pub fn numerical_range_boundary(a: &CMatrix, m_angles: usize) -> Result<RegionBoundary> {
    if !a.is_square() {
        return Err(Error::invalid("numerical range requires a square matrix"));
    }
    if m_angles < 8 {
        return Err(Error::invalid("m_angles must be at least 8"));
    }
    let mut points = Vec::with_capacity(m_angles);
    let mut angles = Vec::with_capacity(m_angles);
    for j in 0..m_angles {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / m_angles as f64;
        let (_, q) = support_eigenpair(a, theta)?;
        let point = dot(&q, &a.matvec(&q));
        points.push(point);
        angles.push(theta);
    }
    Ok(RegionBoundary { points, angles, kind: RegionKind::NumericalRange })
}

/// Numerical radius `w(A) = max |z|, z in W(A)` by a 256-point support-angle
/// grid and golden-section refinement of the grid maximizer down to an angle
/// window of `1e-6`. Grid ties break toward the smallest angle index.
pub fn numerical_radius(a: &CMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::invalid("numerical radius requires a square matrix"));
    }
    let m = 256;
    let step = 2.0 * std::f64::consts::PI / m as f64;
    let mut best_j = 0usize;
    let mut best = f64::NEG_INFINITY;
    for j in 0..m {
        let lam = support_value(a, j as f64 * step)?;
        if lam > best {
            best = lam;
            best_j = j;
        }
    }
    // golden-section refinement around the coarse maximizer
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut lo = (best_j as f64 - 1.0) * step;
    let mut hi = (best_j as f64 + 1.0) * step;
    let eval = |theta: f64| -> Result<f64> { support_value(a, theta) };
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    best = best.max(f1).max(f2);
    while hi - lo > 1e-6 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = eval(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = eval(x1)?;
        }
        best = best.max(f1).max(f2);
    }
    Ok(best)
}

// ── Hermitian square root ───────────────────────────────────────────

/// Hermitian positive-definite square root.
#[derive(Clone, Debug)]
pub struct HermitianSqrt {
    pub root: CMatrix,
}

/// Principal square root of a Hermitian positive-definite matrix via its
/// eigendecomposition. Fails with [`Error::NotPositiveDefinite`] when the
/// smallest eigenvalue is not strictly positive.
pub fn matrix_sqrt_hermitian(s: &CMatrix) -> Result<HermitianSqrt> {
    let spec = hermitian_eigs(s, true)?;
    let lams = spec.real_eigenvalues();
    if lams[0] <= 0.0 {
        return Err(Error::NotPositiveDefinite(lams[0]));
    }
    let v = spec.eigenvectors.as_ref().expect("vectors requested");
    let n = s.rows();
    let sqrts: Vec<f64> = lams.iter().map(|l| l.sqrt()).collect();
    // build the upper triangle and mirror so the result is exactly Hermitian
    let mut root = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = Complex64::ZERO;
            for k in 0..n {
                acc += v[(i, k)] * sqrts[k] * v[(j, k)].conj();
            }
            if i == j {
                root[(i, i)] = Complex64::new(acc.re, 0.0);
            } else {
                root[(i, j)] = acc;
                root[(j, i)] = acc.conj();
            }
        }
    }
    Ok(HermitianSqrt { root })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Prng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(rng: &mut Prng, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| rng.next_complex_normal()).hermitian_part()
    }

    /// Characteristic polynomial coefficients (ascending, monic) by the
    /// Faddeev-LeVerrier trace recursion — independent of both eigensolvers.
    fn char_poly_faddeev(a: &CMatrix) -> Vec<Complex64> {
        let n = a.rows();
        let mut coeffs = vec![Complex64::ZERO; n + 1];
        coeffs[n] = Complex64::ONE;
        let mut m = CMatrix::identity(n);
        for k in 1..=n {
            m = a.matmul(&m);
            let ck = -m.trace() / k as f64;
            coeffs[n - k] = ck;
            m = m.add_scaled_identity(ck);
        }
        coeffs
    }

    fn poly_eval_raw(coeffs: &[Complex64], z: Complex64) -> Complex64 {
        coeffs.iter().rev().fold(Complex64::ZERO, |acc, &c| acc * z + c)
    }

    /// Determinant by explicit permutation expansion (n <= 8).
    fn det_by_expansion(a: &CMatrix) -> Complex64 {
        fn go(a: &CMatrix, rows: &mut Vec<usize>, col: usize) -> Complex64 {
            if rows.is_empty() {
                return Complex64::ONE;
            }
            let mut acc = Complex64::ZERO;
            for idx in 0..rows.len() {
                let i = rows.remove(idx);
                let term = a[(i, col)] * go(a, rows, col + 1);
                rows.insert(idx, i);
                if idx % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        let mut rows: Vec<usize> = (0..a.rows()).collect();
        go(a, &mut rows, 0)
    }

    #[test]
    fn hermitian_identity() {
        let spec = hermitian_eigs(&CMatrix::identity(4), false).unwrap();
        for lam in spec.real_eigenvalues() {
            assert!((lam - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn hermitian_swap_matrix() {
        let h = CMatrix::from_rows(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let spec = hermitian_eigs(&h, true).unwrap();
        let lams = spec.real_eigenvalues();
        assert!((lams[0] + 1.0).abs() < 1e-14);
        assert!((lams[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_matches_char_poly_roots() {
        let mut rng = Prng::new(0x21);
        let h = random_hermitian(&mut rng, 6);
        let spec = hermitian_eigs(&h, true).unwrap();
        let coeffs = char_poly_faddeev(&h);
        let scale = h.frobenius_norm();
        for &lam in &spec.eigenvalues {
            // each Jacobi eigenvalue is a root of the independent char poly
            let v = poly_eval_raw(&coeffs, lam).norm();
            assert!(v <= 1e-8 * scale.powi(6).max(1.0), "char poly residual {v:.3e}");
        }
        // residual check H v = lambda v
        let v = spec.eigenvectors.as_ref().unwrap();
        for (k, &lam) in spec.eigenvalues.iter().enumerate() {
            let col = v.col(k);
            assert!((col.norm2() - 1.0).abs() < 1e-12);
            let r = h.matvec(&col).sub(&col.scale(lam)).norm2();
            assert!(r <= 1e-10 * scale);
        }
    }

    #[test]
    fn hermitian_trace_and_det_identities() {
        let mut rng = Prng::new(0x22);
        for n in [3usize, 5, 6] {
            let h = random_hermitian(&mut rng, n);
            let spec = hermitian_eigs(&h, false).unwrap();
            let sum: f64 = spec.real_eigenvalues().iter().sum();
            assert!((sum - h.trace().re).abs() <= 1e-10 * h.frobenius_norm().max(1.0));
            let prod: f64 = spec.real_eigenvalues().iter().product();
            let det = det_by_expansion(&h);
            assert!((prod - det.re).abs() <= 1e-9 * det.norm().max(1.0));
        }
    }

    #[test]
    fn hermitian_rejects_nonhermitian() {
        let m = CMatrix::from_rows(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!(matches!(hermitian_eigs(&m, false), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn general_diag_spectrum() {
        let a = CMatrix::diag(&[c(1.0, 0.0), c(2.0, 1.0), c(-3.0, 0.0)]);
        let spec = general_eigs(&a, false).unwrap();
        let mut expected = vec![c(-3.0, 0.0), c(1.0, 0.0), c(2.0, 1.0)];
        expected.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        for (got, want) in spec.eigenvalues.iter().zip(&expected) {
            assert!((got - want).norm() < 1e-10);
        }
    }

    #[test]
    fn general_companion_of_z2_minus_1() {
        // companion matrix of z^2 - 1
        let a = CMatrix::from_rows(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let spec = general_eigs(&a, false).unwrap();
        assert!((spec.eigenvalues[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((spec.eigenvalues[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn general_matches_char_poly_roots() {
        let mut rng = Prng::new(0x23);
        let a = CMatrix::from_fn(6, 6, |_, _| rng.next_complex_normal());
        let spec = general_eigs(&a, false).unwrap();
        let coeffs = char_poly_faddeev(&a);
        for &lam in &spec.eigenvalues {
            let v = poly_eval_raw(&coeffs, lam).norm();
            let scale: f64 = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
                * lam.norm().max(1.0).powi(6);
            assert!(v <= 1e-8 * scale, "residual {v:.3e} vs scale {scale:.3e}");
        }
    }

    #[test]
    fn general_eigenvector_residuals() {
        let mut rng = Prng::new(0x24);
        let a = CMatrix::from_fn(8, 8, |_, _| rng.next_complex_normal());
        let spec = general_eigs(&a, true).unwrap();
        let v = spec.eigenvectors.as_ref().unwrap();
        for (k, &lam) in spec.eigenvalues.iter().enumerate() {
            let col = v.col(k);
            let r = a.matvec(&col).sub(&col.scale(lam)).norm2();
            assert!(r <= 1e-8 * a.frobenius_norm(), "residual {r:.3e}");
        }
    }

    #[test]
    fn cond2_identity_and_diag() {
        assert!((cond2(&CMatrix::identity(4)).unwrap() - 1.0).abs() < 1e-12);
        let d = CMatrix::diag(&[c(1.0, 0.0), c(10.0, 0.0)]);
        assert!((cond2(&d).unwrap() - 10.0).abs() < 1e-10);
    }

    #[test]
    fn cond2_matches_power_iteration() {
        let mut rng = Prng::new(0x25);
        let a = CMatrix::from_fn(6, 6, |_, _| rng.next_complex_normal());
        let kappa = cond2(&a).unwrap();
        // power iteration on A^* A for ||A||_2, and on (A^* A)^{-1} for ||A^{-1}||_2
        let gram = a.adjoint().matmul(&a);
        let mut x = CVector::from_raw((0..6).map(|_| rng.next_complex_normal()).collect());
        for _ in 0..2000 {
            x = gram.matvec(&x);
            x = x.scale(c(1.0 / x.norm2(), 0.0));
        }
        let smax = dot(&x, &gram.matvec(&x)).re.sqrt();
        let lu = LuFactors::new(&gram, 0.0).unwrap();
        let mut y = CVector::from_raw((0..6).map(|_| rng.next_complex_normal()).collect());
        for _ in 0..2000 {
            y = lu.solve_vec(&y);
            y = y.scale(c(1.0 / y.norm2(), 0.0));
        }
        let smin = dot(&y, &gram.matvec(&y)).re.sqrt();
        let kappa_ref = smax / smin;
        assert!((kappa - kappa_ref).abs() <= 1e-6 * kappa_ref, "{kappa} vs {kappa_ref}");
    }

    #[test]
    fn eigenvector_condition_normal_is_one() {
        let mut rng = Prng::new(0x26);
        let h = random_hermitian(&mut rng, 6);
        let kappa = eigenvector_condition(&h).unwrap();
        assert!((kappa - 1.0).abs() < 1e-6, "kappa = {kappa}");
        assert!((eigenvector_condition(&CMatrix::diag(&[c(1.0, 0.0), c(2.0, 0.0)])).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn eigenvector_condition_2x2_closed_form() {
        // A = [[1, 100], [0, 2]]: eigenvectors (1,0) and (100,1)/||.||
        let a = CMatrix::from_rows(2, 2, &[c(1.0, 0.0), c(100.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)])
            .unwrap();
        let kappa = eigenvector_condition(&a).unwrap();
        let norm = (100.0f64 * 100.0 + 1.0).sqrt();
        let v = CMatrix::from_rows(
            2,
            2,
            &[c(1.0, 0.0), c(100.0 / norm, 0.0), c(0.0, 0.0), c(1.0 / norm, 0.0)],
        )
        .unwrap();
        let kappa_ref = cond2(&v).unwrap();
        assert!((kappa - kappa_ref).abs() <= 1e-6 * kappa_ref);
    }

    #[test]
    fn eigenvector_condition_rejects_clustered() {
        let a = CMatrix::identity(3);
        assert!(matches!(
            eigenvector_condition(&a),
            Err(Error::ClusteredSpectrum { .. })
        ));
    }

    #[test]
    fn range_of_diag_0_1_is_segment() {
        let a = CMatrix::diag(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let boundary = numerical_range_boundary(&a, 32).unwrap();
        for z in &boundary.points {
            assert!(z.im.abs() < 1e-10);
            assert!(z.re >= -1e-10 && z.re <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn range_of_jordan_block_is_half_disk_boundary() {
        let a = CMatrix::from_rows(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let boundary = numerical_range_boundary(&a, 64).unwrap();
        for z in &boundary.points {
            assert!((z.norm() - 0.5).abs() < 1e-8, "|z| = {}", z.norm());
        }
    }

    #[test]
    fn range_points_are_rayleigh_quotients_and_support_exact() {
        let mut rng = Prng::new(0x27);
        let a = CMatrix::from_fn(5, 5, |_, _| rng.next_complex_normal());
        let boundary = numerical_range_boundary(&a, 32).unwrap();
        // support value at each angle matches the recorded point, and beats a
        // random-sampling lower bound
        for (j, (&theta, &z)) in boundary.angles.iter().zip(&boundary.points).enumerate() {
            let (lam, q) = support_eigenpair(&a, theta).unwrap();
            let point = dot(&q, &a.matvec(&q));
            assert!((point - z).norm() < 1e-12, "angle {j}");
            let support = (Complex64::from_polar(1.0, theta) * z).re;
            assert!((support - lam).abs() < 1e-10);
            for _ in 0..300 {
                let mut q = CVector::from_raw((0..5).map(|_| rng.next_complex_normal()).collect());
                q = q.scale(c(1.0 / q.norm2(), 0.0));
                let sampled = (Complex64::from_polar(1.0, theta) * dot(&q, &a.matvec(&q))).re;
                assert!(sampled <= lam + 1e-10);
            }
        }
    }

    #[test]
    fn range_translation_shifts_boundary() {
        let mut rng = Prng::new(0x28);
        let a = CMatrix::from_fn(4, 4, |_, _| rng.next_complex_normal());
        let shift = c(1.25, -0.5);
        let shifted = a.add_scaled_identity(shift);
        let b1 = numerical_range_boundary(&a, 16).unwrap();
        let b2 = numerical_range_boundary(&shifted, 16).unwrap();
        for (p1, p2) in b1.points.iter().zip(&b2.points) {
            assert!((p1 + shift - p2).norm() < 1e-10);
        }
    }

    #[test]
    fn radius_of_hermitian_is_spectral_radius() {
        let mut rng = Prng::new(0x29);
        let h = random_hermitian(&mut rng, 5);
        let w = numerical_radius(&h).unwrap();
        let lams = hermitian_eigs(&h, false).unwrap().real_eigenvalues();
        let rho = lams.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
        assert!((w - rho).abs() < 1e-8, "w = {w}, rho = {rho}");
    }

    #[test]
    fn radius_of_jordan_block() {
        let a = CMatrix::from_rows(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!((numerical_radius(&a).unwrap() - 0.5).abs() < 1e-8);
    }

    #[test]
    fn radius_scales_homogeneously() {
        let mut rng = Prng::new(0x2a);
        let a = CMatrix::from_fn(4, 4, |_, _| rng.next_complex_normal());
        let alpha = c(2.0, -1.0);
        let w1 = numerical_radius(&a).unwrap();
        let w2 = numerical_radius(&a.scale(alpha)).unwrap();
        assert!((w2 - alpha.norm() * w1).abs() <= 1e-6 * w2.max(1.0), "{w2} vs {}", alpha.norm() * w1);
    }

    #[test]
    fn radius_dominates_random_rayleigh_quotients() {
        let mut rng = Prng::new(0x2b);
        let a = CMatrix::from_fn(5, 5, |_, _| rng.next_complex_normal());
        let w = numerical_radius(&a).unwrap();
        // uniform random unit vectors give a lower bound on the radius
        let mut best = 0.0f64;
        for _ in 0..100_000 {
            let mut q = CVector::from_raw((0..5).map(|_| rng.next_complex_normal()).collect());
            q = q.scale(c(1.0 / q.norm2(), 0.0));
            best = best.max(dot(&q, &a.matvec(&q)).norm());
        }
        assert!(w >= best - 1e-9);
        // the boundary points are themselves unit-vector Rayleigh quotients
        // and sample the sup densely: two-sided sandwich
        let boundary = numerical_range_boundary(&a, 4096).unwrap();
        let boundary_best = boundary.points.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        assert!(w >= boundary_best - 1e-9);
        assert!(
            w <= boundary_best + 1e-6 * a.frobenius_norm(),
            "w = {w}, boundary max = {boundary_best}"
        );
    }

    #[test]
    fn sqrt_identity_and_diag() {
        let r = matrix_sqrt_hermitian(&CMatrix::identity(3)).unwrap();
        assert!((r.root.sub(&CMatrix::identity(3))).frobenius_norm() < 1e-12);
        let d = CMatrix::diag(&[c(4.0, 0.0), c(9.0, 0.0)]);
        let r = matrix_sqrt_hermitian(&d).unwrap();
        assert!((r.root[(0, 0)] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((r.root[(1, 1)] - c(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn sqrt_reconstructs_random_hpd() {
        let mut rng = Prng::new(0x2c);
        let b = CMatrix::from_fn(6, 6, |_, _| rng.next_complex_normal());
        let s = b.adjoint().matmul(&b).add_scaled_identity(Complex64::ONE).hermitian_part();
        let r = matrix_sqrt_hermitian(&s).unwrap();
        let err = r.root.matmul(&r.root).sub(&s).frobenius_norm();
        assert!(err <= 1e-10 * s.frobenius_norm());
        // the root is itself Hermitian PD
        assert!(r.root.hermitian_deviation() < 1e-14 * s.frobenius_norm());
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let d = CMatrix::diag(&[c(-1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            matrix_sqrt_hermitian(&d),
            Err(Error::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn normal_matrix_support_equals_hull_support() {
        // A = U diag(lams) U^*: support of W(A) equals support of hull(lams)
        let mut rng = Prng::new(0x2d);
        let lams = [c(1.0, 2.0), c(-1.0, 0.5), c(0.0, -2.0), c(2.0, -0.5), c(0.5, 0.3)];
        let raw = CMatrix::from_fn(5, 5, |_, _| rng.next_complex_normal());
        // unitary factor by Gram-Schmidt
        let mut cols: Vec<CVector> = (0..5).map(|j| raw.col(j)).collect();
        for j in 0..5 {
            for i in 0..j {
                let coeff = dot(&cols[i], &cols[j]);
                let prev = cols[i].clone();
                cols[j].axpy_in_place(-coeff, &prev);
            }
            let norm = cols[j].norm2();
            cols[j] = cols[j].scale(c(1.0 / norm, 0.0));
        }
        let u = CMatrix::from_columns(&cols);
        let a = u.matmul(&CMatrix::diag(&lams)).matmul(&u.adjoint());
        let boundary = numerical_range_boundary(&a, 64).unwrap();
        for (&theta, &z) in boundary.angles.iter().zip(&boundary.points) {
            let dir = Complex64::from_polar(1.0, theta);
            let support = (dir * z).re;
            let hull_support = lams.iter().map(|&l| (dir * l).re).fold(f64::NEG_INFINITY, f64::max);
            assert!(
                (support - hull_support).abs() <= 1e-8 * a.frobenius_norm(),
                "support {support} vs hull {hull_support}"
            );
        }
    }

    #[test]
    fn hull_contains_basics() {
        let pts = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!(hull_contains(&hull, c(0.5, 0.5), 1e-12));
        assert!(!hull_contains(&hull, c(1.5, 0.5), 1e-12));
        // degenerate: segment
        let seg = convex_hull(&[c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(hull_contains(&seg, c(0.5, 0.0), 1e-9));
        assert!(!hull_contains(&seg, c(0.5, 0.1), 1e-9));
    }
}
