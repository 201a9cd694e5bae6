//! Spectral-set error bounds for the residual-optimal approximation.
//!
//! Each evaluator takes a caller-supplied polynomial `p` (typically the
//! truncated-Taylor near-best approximation, or the solver-implied
//! polynomial for diagnostics) and reports
//! `value = constant * kappa_factor * sup_term` where `sup_term` is the
//! sampled maximum of `|R - p|` over the region:
//!
//! * eigenvalue bound — `kappa(S)^{1/2} kappa(V) max_i |R(lambda_i) - p|`;
//! * numerical-range bound — the numerical range is a `(1 + sqrt(2))`-
//!   spectral set;
//! * S-inner-product numerical-range bound — same constant on
//!   `W(S^{1/2} A S^{-1/2})`, bounding the S-norm error ratio directly;
//! * disk-removal bounds — removing `m` disks of radius
//!   `1 / w((xi_j I - A)^{-1})` about poles inside `W(A)` leaves a
//!   `(1 + 2m + sqrt((1+2m)^2 + 2m + 1))`-spectral set, which is
//!   `3 + 2 sqrt(3)` at `m = 1`.
//!
//! Sampled maxima are lower bounds of the true suprema; the sample count is
//! the caller's knob.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{dense_inverse, CMatrix, LuFactors};
use crate::ratfun::{sup_on_points, Disk, Polynomial, RationalFunction};
use crate::spectral::{
    hull_contains, numerical_radius, numerical_range_boundary, HermitianSqrt, RegionBoundary,
    RegionKind, Spectrum,
};

/// Region family a bound was evaluated on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Pointwise over the eigenvalues.
    Eigenvalues,
    /// The numerical range `W(A)`.
    NumericalRange,
    /// The S-inner-product numerical range `W(S^{1/2} A S^{-1/2})`.
    SNormNumericalRange,
    /// `W(A)` minus `m` resolvent disks.
    RangeMinusDisks { m: usize },
}

impl BoundKind {
    pub fn label(&self) -> &'static str {
        match self {
            BoundKind::Eigenvalues => "eig",
            BoundKind::NumericalRange => "W",
            BoundKind::SNormNumericalRange => "W_S",
            BoundKind::RangeMinusDisks { .. } => "W_minus_disks",
        }
    }
}

/// `value = constant * kappa_factor * sup_term`, exactly by construction.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// Polynomial degree + 1 (the Krylov step the bound speaks about).
    pub k: usize,
    pub constant: f64,
    pub kappa_factor: f64,
    pub sup_term: f64,
    pub value: f64,
}

impl BoundReport {
    fn assemble(kind: BoundKind, k: usize, constant: f64, kappa_factor: f64, sup_term: f64) -> Self {
        BoundReport { kind, k, constant, kappa_factor, sup_term, value: constant * kappa_factor * sup_term }
    }
}

/// Spectral-set constant of the numerical range.
pub fn range_spectral_constant() -> f64 {
    1.0 + 2f64.sqrt()
}

/// Spectral-set constant after removing `m` resolvent disks:
/// `1 + 2m + sqrt((1+2m)^2 + 2m + 1)`; equals `3 + 2 sqrt(3)` at `m = 1`.
pub fn disk_removal_constant(m: usize) -> f64 {
    let t = 1.0 + 2.0 * m as f64;
    t + (t * t + 2.0 * m as f64 + 1.0).sqrt()
}

/// Eigenvalue bound: `sup_term = max_i |R(lambda_i) - p(lambda_i)|` with
/// `kappa_factor = kappa(S)^{1/2} kappa(V)` and constant 1.
pub fn bound_eig(
    r: &RationalFunction,
    p: &Polynomial,
    spectrum: &Spectrum,
    kappa_s_sqrt: f64,
    kappa_v: f64,
) -> Result<BoundReport> {
    let sup = sup_on_points(r, p, &spectrum.eigenvalues)?;
    Ok(BoundReport::assemble(
        BoundKind::Eigenvalues,
        p.degree() + 1,
        1.0,
        kappa_s_sqrt * kappa_v,
        sup,
    ))
}

fn hull_slack(hull: &[Complex64]) -> f64 {
    let extent = hull.iter().map(|z| z.norm()).fold(1.0, f64::max);
    1e-12 * extent
}

/// Numerical-range bound with the `(1 + sqrt(2))` spectral constant.
/// `|R - p|` is analytic on the range when all poles are outside, so
/// boundary-only sampling is justified by the maximum principle. A pole
/// inside the sampled convex hull is an error.
pub fn bound_w(
    r: &RationalFunction,
    p: &Polynomial,
    boundary: &RegionBoundary,
    kappa_s_sqrt: f64,
) -> Result<BoundReport> {
    let hull = boundary.convex_hull();
    let slack = hull_slack(&hull);
    for pole in r.poles()? {
        if hull_contains(&hull, pole, slack) {
            return Err(Error::PoleInRegion { pole });
        }
    }
    let sup = sup_on_points(r, p, &boundary.points)?;
    Ok(BoundReport::assemble(
        BoundKind::NumericalRange,
        p.degree() + 1,
        range_spectral_constant(),
        kappa_s_sqrt,
        sup,
    ))
}

/// The similarity `S^{1/2} A S^{-1/2}` whose numerical range is the
/// S-inner-product numerical range of `A`.
pub fn s_similarity(a: &CMatrix, s_root: &HermitianSqrt) -> Result<CMatrix> {
    let m = s_root.root.matmul(a);
    // B root = M  =>  root B^* = M^*  (root is Hermitian)
    let lu = LuFactors::new(
        &s_root.root,
        crate::linalg::PIVOT_RTOL * s_root.root.max_col_norm(),
    )?;
    let b_adj = lu.solve_mat(&m.adjoint());
    Ok(b_adj.adjoint())
}

/// S-norm numerical-range bound: the `(1 + sqrt(2))` constant on
/// `W(S^{1/2} A S^{-1/2})` with no kappa factor; it bounds the S-norm error
/// ratio directly.
pub fn bound_w_s(
    r: &RationalFunction,
    p: &Polynomial,
    a: &CMatrix,
    s_root: &HermitianSqrt,
    m_angles: usize,
) -> Result<BoundReport> {
    let similar = s_similarity(a, s_root)?;
    let boundary = numerical_range_boundary(&similar, m_angles)?;
    let hull = boundary.convex_hull();
    let slack = hull_slack(&hull);
    for pole in r.poles()? {
        if hull_contains(&hull, pole, slack) {
            return Err(Error::PoleInRegion { pole });
        }
    }
    let sup = sup_on_points(r, p, &boundary.points)?;
    Ok(BoundReport::assemble(
        BoundKind::SNormNumericalRange,
        p.degree() + 1,
        range_spectral_constant(),
        1.0,
        sup,
    ))
}

/// Disks removed from the numerical range around resolvent poles.
#[derive(Clone, Debug)]
pub struct RemovedDiskSet {
    pub poles: Vec<Complex64>,
    /// `1 / w((xi_j I - A)^{-1})` per pole.
    pub radii: Vec<f64>,
    /// Warning flags: pole not inside the sampled range hull.
    pub center_outside_range: Vec<bool>,
    /// Warning flag: some pair of removed disks overlaps.
    pub overlapping: bool,
}

impl RemovedDiskSet {
    pub fn m(&self) -> usize {
        self.poles.len()
    }

    pub fn disks(&self) -> impl Iterator<Item = Disk> + '_ {
        self.poles
            .iter()
            .zip(&self.radii)
            .map(|(&c, &r)| Disk { center: c, radius: r })
    }
}

/// Builds the removable disks for the given poles: radius
/// `1 / w((xi I - A)^{-1})` via dense resolvent inversion. A shift within
/// `1e-12 ||A||_F` of an eigenvalue has no resolvent and is rejected.
pub fn removed_disks(a: &CMatrix, poles: &[Complex64]) -> Result<RemovedDiskSet> {
    let spectrum = crate::spectral::general_eigs(a, false)?;
    let scale = a.frobenius_norm();
    let mut radii = Vec::with_capacity(poles.len());
    for &xi in poles {
        let distance = spectrum
            .eigenvalues
            .iter()
            .map(|&lam| (lam - xi).norm())
            .fold(f64::INFINITY, f64::min);
        if distance <= 1e-12 * scale {
            return Err(Error::SingularShift { shift: xi, distance });
        }
        let shifted = a.scale(Complex64::new(-1.0, 0.0)).add_scaled_identity(xi);
        let resolvent = dense_inverse(&shifted)?;
        radii.push(1.0 / numerical_radius(&resolvent)?);
    }
    // coarse hull for the warning flags
    let coarse = numerical_range_boundary(a, 64)?;
    let hull = coarse.convex_hull();
    let slack = hull_slack(&hull);
    let center_outside_range = poles
        .iter()
        .map(|&xi| !hull_contains(&hull, xi, slack))
        .collect();
    let mut overlapping = false;
    for i in 0..poles.len() {
        for j in (i + 1)..poles.len() {
            if (poles[i] - poles[j]).norm() < radii[i] + radii[j] {
                overlapping = true;
            }
        }
    }
    Ok(RemovedDiskSet { poles: poles.to_vec(), radii, center_outside_range, overlapping })
}

/// Boundary samples of `W(A)` minus the removed disks: range-boundary
/// points outside every disk plus, per disk, the arc samples that fall
/// inside the range hull and outside the other disks.
pub fn region_minus_disks(
    boundary: &RegionBoundary,
    disks: &RemovedDiskSet,
    arc_samples: usize,
) -> RegionBoundary {
    let hull = boundary.convex_hull();
    let slack = hull_slack(&hull);
    let mut points = Vec::new();
    let mut angles = Vec::new();
    for (&theta, &z) in boundary.angles.iter().zip(&boundary.points) {
        let inside_some = disks.disks().any(|d| (z - d.center).norm() < d.radius);
        if !inside_some {
            points.push(z);
            angles.push(theta);
        }
    }
    for (di, disk) in disks.disks().enumerate() {
        for s in 0..arc_samples {
            let phi = 2.0 * std::f64::consts::PI * s as f64 / arc_samples as f64;
            let z = disk.center + Complex64::from_polar(disk.radius, phi);
            if !hull_contains(&hull, z, slack) {
                continue;
            }
            let inside_other = disks
                .disks()
                .enumerate()
                .any(|(oi, other)| oi != di && (z - other.center).norm() < other.radius);
            if !inside_other {
                points.push(z);
                angles.push(phi);
            }
        }
    }
    RegionBoundary { points, angles, kind: RegionKind::NumericalRangeMinusDisks }
}

/// Disk-removal bound: the `m`-dependent spectral constant on the sampled
/// region `W(A) \ union of disks`. Every pole of `R` that lies inside the
/// range hull must be the center of one of the removed disks.
pub fn bound_w_minus_disks(
    r: &RationalFunction,
    p: &Polynomial,
    boundary: &RegionBoundary,
    disks: &RemovedDiskSet,
    kappa_s_sqrt: f64,
) -> Result<BoundReport> {
    let hull = boundary.convex_hull();
    let slack = hull_slack(&hull);
    for pole in r.poles()? {
        if hull_contains(&hull, pole, slack) {
            let covered = disks
                .poles
                .iter()
                .any(|&xi| (xi - pole).norm() <= 1e-8 * pole.norm().max(1.0));
            if !covered {
                return Err(Error::PoleNotCovered { pole });
            }
        }
    }
    let region = region_minus_disks(boundary, disks, 256);
    let sup = sup_on_points(r, p, &region.points)?;
    Ok(BoundReport::assemble(
        BoundKind::RangeMinusDisks { m: disks.m() },
        p.degree() + 1,
        disk_removal_constant(disks.m()),
        kappa_s_sqrt,
        sup,
    ))
}

/// CSV serialization: `k,kind,constant,kappa_factor,sup_term,value`.
pub fn write_bounds_csv(w: &mut impl std::io::Write, reports: &[BoundReport]) -> Result<()> {
    writeln!(w, "k,kind,constant,kappa_factor,sup_term,value")?;
    for r in reports {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.k,
            r.kind.label(),
            crate::mtx::fmt_g17(r.constant),
            crate::mtx::fmt_g17(r.kappa_factor),
            crate::mtx::fmt_g17(r.sup_term),
            crate::mtx::fmt_g17(r.value)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dense_solve, CVector};
    use crate::ratfun::{taylor_near_best, smallest_enclosing_disk};
    use crate::rng::Prng;
    use crate::spectral::{general_eigs, matrix_sqrt_hermitian};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grcar(n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |i, j| {
            if j + 1 == i {
                c(-1.0, 0.0)
            } else if j >= i && j <= i + 3 {
                c(1.0, 0.0)
            } else {
                Complex64::ZERO
            }
        })
    }

    #[test]
    fn constants_match_closed_forms() {
        assert!((range_spectral_constant() - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        // m = 1 gives 3 + 2 sqrt(3) exactly
        let c1 = disk_removal_constant(1);
        assert_eq!(c1, 3.0 + 2.0 * 3f64.sqrt());
        // m = 2 gives 5 + sqrt(30)
        let c2 = disk_removal_constant(2);
        assert!((c2 - (5.0 + 30f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn eig_bound_zero_for_interpolant() {
        // p interpolates R at all eigenvalues (Vandermonde solve)
        let mut rng = Prng::new(0x81);
        let lams: Vec<Complex64> = (0..5).map(|_| rng.next_complex_normal() + c(4.0, 0.0)).collect();
        let r = RationalFunction::new(
            Polynomial::from_real(&[1.0]),
            Polynomial::from_real(&[-1.0, 1.0]), // pole at 1, away from lams
        )
        .unwrap();
        let vander = CMatrix::from_fn(5, 5, |i, j| lams[i].powu(j as u32));
        let rhs = CVector::new(lams.iter().map(|&z| r.eval(z)).collect()).unwrap();
        let coeffs = dense_solve(&vander, &rhs).unwrap();
        let p = Polynomial::new(coeffs.as_slice().to_vec());
        let spectrum = Spectrum { eigenvalues: lams, eigenvectors: None };
        let report = bound_eig(&r, &p, &spectrum, 1.0, 1.0).unwrap();
        assert!(report.sup_term <= 1e-8, "sup {:.3e}", report.sup_term);
        assert_eq!(report.value, report.sup_term);
    }

    #[test]
    fn eig_bound_matches_pointwise_oracle() {
        let mut rng = Prng::new(0x82);
        let lams: Vec<Complex64> = (0..6).map(|_| rng.next_complex_normal() + c(5.0, 0.0)).collect();
        let den = Polynomial::from_roots(Complex64::ONE, &[c(0.0, 0.0), c(1.0, -1.0)]);
        let r = RationalFunction::new(Polynomial::from_real(&[1.0, 0.5]), den).unwrap();
        let disk = smallest_enclosing_disk(&lams);
        let p = taylor_near_best(&r, &disk, 4).unwrap();
        let spectrum = Spectrum { eigenvalues: lams.clone(), eigenvectors: None };
        let report = bound_eig(&r, &p, &spectrum, 2.0, 3.0).unwrap();
        let oracle = lams
            .iter()
            .map(|&z| (r.eval(z) - p.eval(z)).norm())
            .fold(0.0f64, f64::max);
        assert!((report.sup_term - oracle).abs() <= 1e-14 * oracle.max(1.0));
        assert!((report.value - 6.0 * oracle).abs() <= 1e-12 * report.value.max(1.0));
    }

    #[test]
    fn eig_bound_rejects_pole_on_eigenvalue() {
        let r = RationalFunction::inverse_z();
        let spectrum = Spectrum { eigenvalues: vec![Complex64::ZERO], eigenvectors: None };
        assert!(matches!(
            bound_eig(&r, &Polynomial::zero(), &spectrum, 1.0, 1.0),
            Err(Error::PoleHit { .. })
        ));
    }

    #[test]
    fn w_bound_zero_for_polynomial_identity() {
        let p = Polynomial::from_real(&[1.0, 2.0, 0.5]);
        let r = RationalFunction::from_polynomial(p.clone());
        let mut rng = Prng::new(0x83);
        let a = CMatrix::from_fn(4, 4, |_, _| rng.next_complex_normal());
        let boundary = numerical_range_boundary(&a, 32).unwrap();
        let report = bound_w(&r, &p, &boundary, 1.0).unwrap();
        assert_eq!(report.sup_term, 0.0);
        assert_eq!(report.value, 0.0);
    }

    #[test]
    fn w_bound_constant_surfaces_directly() {
        // kappa_S = 1 and sup_term = 1 force value = 1 + sqrt(2):
        // R(z) = z, p = 0 on the unit-disk boundary (Jordan block scaled)
        let a = CMatrix::from_rows(2, 2, &[Complex64::ZERO, c(2.0, 0.0), Complex64::ZERO, Complex64::ZERO])
            .unwrap();
        let boundary = numerical_range_boundary(&a, 64).unwrap(); // circle of radius 1
        let r = RationalFunction::from_polynomial(Polynomial::from_real(&[0.0, 1.0]));
        let report = bound_w(&r, &Polynomial::zero(), &boundary, 1.0).unwrap();
        assert!((report.sup_term - 1.0).abs() < 1e-8);
        assert!((report.value - (1.0 + 2f64.sqrt())).abs() < 1e-7);
    }

    #[test]
    fn w_bound_sup_stable_under_resampling() {
        let mut rng = Prng::new(0x84);
        let a = CMatrix::from_fn(6, 6, |_, _| rng.next_complex_normal())
            .add_scaled_identity(c(8.0, 0.0));
        let den = Polynomial::from_roots(Complex64::ONE, &[c(0.0, 0.0)]);
        let r = RationalFunction::new(Polynomial::from_real(&[1.0]), den).unwrap();
        let boundary = numerical_range_boundary(&a, 1024).unwrap();
        let disk = smallest_enclosing_disk(&boundary.points);
        let p = taylor_near_best(&r, &disk, 5).unwrap();
        let report = bound_w(&r, &p, &boundary, 1.0).unwrap();
        let fine = numerical_range_boundary(&a, 8192).unwrap();
        let sup_fine = sup_on_points(&r, &p, &fine.points).unwrap();
        assert!(
            (report.sup_term - sup_fine).abs() <= 1e-3 * sup_fine,
            "{} vs {}",
            report.sup_term,
            sup_fine
        );
    }

    #[test]
    fn w_bound_rejects_pole_in_region() {
        let mut rng = Prng::new(0x85);
        let a = CMatrix::from_fn(5, 5, |_, _| rng.next_complex_normal());
        let boundary = numerical_range_boundary(&a, 32).unwrap();
        // 1/z has its pole at the origin, inside W(A) for a centered random A
        let r = RationalFunction::inverse_z();
        assert!(matches!(
            bound_w(&r, &Polynomial::zero(), &boundary, 1.0),
            Err(Error::PoleInRegion { .. })
        ));
    }

    #[test]
    fn w_s_reduces_to_w_when_s_is_identity() {
        let mut rng = Prng::new(0x86);
        let a = CMatrix::from_fn(5, 5, |_, _| rng.next_complex_normal())
            .add_scaled_identity(c(6.0, 0.0));
        let s_root = matrix_sqrt_hermitian(&CMatrix::identity(5)).unwrap();
        let den = Polynomial::from_roots(Complex64::ONE, &[c(0.5, 0.0)]);
        let r = RationalFunction::new(Polynomial::from_real(&[1.0]), den).unwrap();
        let boundary = numerical_range_boundary(&a, 64).unwrap();
        let disk = smallest_enclosing_disk(&boundary.points);
        let p = taylor_near_best(&r, &disk, 4).unwrap();
        let w_report = bound_w(&r, &p, &boundary, 1.0).unwrap();
        let ws_report = bound_w_s(&r, &p, &a, &s_root, 64).unwrap();
        assert!(
            (w_report.sup_term - ws_report.sup_term).abs() <= 1e-8 * w_report.sup_term.max(1e-30),
            "{} vs {}",
            w_report.sup_term,
            ws_report.sup_term
        );
    }

    #[test]
    fn w_s_range_matches_w_for_normal_commuting() {
        // diagonal A: S = D(A)^* D(A) commutes with A, so the S-range equals
        // the plain range (equal support functions)
        let diag: Vec<Complex64> = vec![c(3.0, 1.0), c(4.0, -1.0), c(5.0, 0.5), c(3.5, 0.0)];
        let a = CMatrix::diag(&diag);
        let den = Polynomial::from_roots(Complex64::ONE, &[c(0.0, 0.0)]);
        let d_of_a = den.matrix_eval(&a);
        let s = d_of_a.adjoint().matmul(&d_of_a).hermitian_part();
        let s_root = matrix_sqrt_hermitian(&s).unwrap();
        let similar = s_similarity(&a, &s_root).unwrap();
        let b1 = numerical_range_boundary(&a, 32).unwrap();
        let b2 = numerical_range_boundary(&similar, 32).unwrap();
        for ((&theta, &z1), &z2) in b1.angles.iter().zip(&b1.points).zip(&b2.points) {
            let dir = Complex64::from_polar(1.0, theta);
            let s1 = (dir * z1).re;
            let s2 = (dir * z2).re;
            assert!((s1 - s2).abs() <= 1e-8 * a.frobenius_norm(), "{s1} vs {s2}");
        }
    }

    #[test]
    fn removed_disk_diagonal_arithmetic() {
        // A = diag(0, 2), xi = 1: resolvent diag(1, -1), w = 1, radius 1
        let a = CMatrix::diag(&[Complex64::ZERO, c(2.0, 0.0)]);
        let set = removed_disks(&a, &[Complex64::ONE]).unwrap();
        assert!((set.radii[0] - 1.0).abs() < 1e-8, "radius {}", set.radii[0]);
    }

    #[test]
    fn removed_disk_radius_exceeds_hull_distance_outside() {
        let mut rng = Prng::new(0x87);
        let a = CMatrix::from_fn(5, 5, |_, _| rng.next_complex_normal());
        let xi = c(12.0, 3.0);
        let set = removed_disks(&a, &[xi]).unwrap();
        assert!(set.center_outside_range[0]);
        let boundary = numerical_range_boundary(&a, 128).unwrap();
        let dist = boundary.points.iter().map(|&z| (z - xi).norm()).fold(f64::INFINITY, f64::min);
        assert!(
            set.radii[0] >= dist * (1.0 - 1e-6),
            "radius {} below hull distance {}",
            set.radii[0],
            dist
        );
    }

    #[test]
    fn removed_disk_grcar_origin_matches_recomputation() {
        let a = grcar(50);
        let set = removed_disks(&a, &[Complex64::ZERO]).unwrap();
        let inv = dense_inverse(&a).unwrap();
        let w = numerical_radius(&inv).unwrap();
        assert!((set.radii[0] - 1.0 / w).abs() <= 1e-10 * set.radii[0]);
        assert!(!set.center_outside_range[0], "origin lies inside W(grcar)");
    }

    #[test]
    fn removed_disk_rejects_eigenvalue_shift() {
        let a = CMatrix::diag(&[c(1.0, 0.0), c(2.0, 0.0)]);
        assert!(matches!(
            removed_disks(&a, &[c(1.0, 0.0)]),
            Err(Error::SingularShift { .. })
        ));
    }

    #[test]
    fn minus_disks_bound_on_grcar() {
        // R = 1/z on grcar(20): the pole sits inside W(A), so only the
        // disk-removal bound applies. The truncated-series surrogate cannot
        // decay on this region (any polynomial is off by at least 1/rho on
        // the inner circle, and the far boundary lies outside the Taylor
        // convergence disk), so the check here is finiteness and the
        // contour-integral floor, not monotone decay.
        let a = grcar(20);
        let r = RationalFunction::inverse_z();
        let boundary = numerical_range_boundary(&a, 128).unwrap();
        let disks = removed_disks(&a, &[Complex64::ZERO]).unwrap();
        let rho = disks.radii[0];
        let hull_pts = boundary.points.clone();
        let enclosing = smallest_enclosing_disk(&hull_pts);
        for k in 2..=10 {
            // Taylor expansion about the range center, gated by a pole-free
            // disk (the coefficients depend only on the center)
            let safe = Disk { center: enclosing.center, radius: 0.5 * enclosing.center.norm() };
            let p = taylor_near_best(&r, &safe, k).unwrap();
            let report = bound_w_minus_disks(&r, &p, &boundary, &disks, 1.0).unwrap();
            assert!(report.value.is_finite() && report.value > 0.0);
            // no polynomial beats 1/rho on the inner circle
            assert!(
                report.sup_term >= 0.5 / rho,
                "k={k}: sampled sup {:.3e} below contour floor {:.3e}",
                report.sup_term,
                1.0 / rho
            );
        }
    }

    #[test]
    fn minus_disks_rejects_uncovered_pole() {
        let a = grcar(12);
        let r = RationalFunction::inverse_z();
        let boundary = numerical_range_boundary(&a, 64).unwrap();
        // remove a disk around a DIFFERENT interior point
        let disks = removed_disks(&a, &[c(1.0, 0.0)]).unwrap();
        assert!(matches!(
            bound_w_minus_disks(&r, &Polynomial::zero(), &boundary, &disks, 1.0),
            Err(Error::PoleNotCovered { .. })
        ));
    }

    #[test]
    fn region_minus_disks_excludes_disk_interiors() {
        let a = grcar(16);
        let boundary = numerical_range_boundary(&a, 128).unwrap();
        let disks = removed_disks(&a, &[Complex64::ZERO]).unwrap();
        let region = region_minus_disks(&boundary, &disks, 128);
        let hull = boundary.convex_hull();
        for &z in &region.points {
            for d in disks.disks() {
                assert!((z - d.center).norm() >= d.radius * (1.0 - 1e-9));
            }
            assert!(hull_contains(&hull, z, 1e-6 * a.frobenius_norm()));
        }
        // the inner arc contributes points
        assert!(region.points.len() > boundary.points.len() / 2);
    }

    #[test]
    fn normal_matrix_w_vs_eig_bound_consistency() {
        // eigenvalues dense on a circle: hull(spectrum) ~ W(A), so the
        // boundary sup and the vertex max agree to a few percent and
        // bound_w = (1+sqrt(2)) * bound_eig up to that slack
        let m = 64;
        let lams: Vec<Complex64> = (0..m)
            .map(|j| {
                let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                c(6.0, 0.0) + Complex64::from_polar(2.0, t)
            })
            .collect();
        let a = CMatrix::diag(&lams);
        let den = Polynomial::from_roots(Complex64::ONE, &[c(0.5, 0.0)]);
        let r = RationalFunction::new(Polynomial::from_real(&[1.0]), den).unwrap();
        let p = taylor_near_best(&r, &Disk { center: c(6.0, 0.0), radius: 2.0 }, 5).unwrap();
        let boundary = numerical_range_boundary(&a, 128).unwrap();
        let w_report = bound_w(&r, &p, &boundary, 1.0).unwrap();
        let spectrum = general_eigs(&a, false).unwrap();
        let eig_report = bound_eig(&r, &p, &spectrum, 1.0, 1.0).unwrap();
        let ratio = w_report.value / ((1.0 + 2f64.sqrt()) * eig_report.value);
        assert!((0.9..=1.1).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn bounds_csv_format() {
        let report = BoundReport::assemble(BoundKind::NumericalRange, 3, 2.0, 1.5, 0.25);
        assert_eq!(report.value, 0.75);
        let mut buf = Vec::new();
        write_bounds_csv(&mut buf, &[report]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,kind,constant,kappa_factor,sup_term,value\n"));
        assert!(text.contains("3,W,"));
    }
}
