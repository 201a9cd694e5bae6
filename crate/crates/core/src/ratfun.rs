//! Polynomials, rational functions, partial fractions, and disk geometry.
//!
//! Rational functions are stored as numerator/denominator coefficient lists
//! (ascending degree). The truncated-Taylor approximation on a disk is the
//! near-best polynomial approximation used by the error-bound evaluators;
//! its coefficients come from the partial-fraction form, which is exact, not
//! from numerical differentiation.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::spectral::{general_eigs, RegionBoundary, RegionKind};

/// Dense polynomial, coefficients ascending: `coeffs[j]` multiplies `z^j`.
/// The leading coefficient is structurally nonzero except for the zero
/// polynomial, which is `[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial, trimming exactly-zero leading coefficients.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == Complex64::ZERO {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::ZERO);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![Complex64::ZERO] }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// `leading * prod (z - roots[i])`, expanded to coefficient form.
    pub fn from_roots(leading: Complex64, roots: &[Complex64]) -> Self {
        let mut coeffs = vec![leading];
        for &r in roots {
            // multiply by (z - r)
            let mut next = vec![Complex64::ZERO; coeffs.len() + 1];
            for (j, &c) in coeffs.iter().enumerate() {
                next[j + 1] += c;
                next[j] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::ZERO
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::ZERO, |acc, &c| acc * z + c)
    }

    /// Matrix polynomial `p(A)` by Horner with matrix multiplies.
    pub fn matrix_eval(&self, a: &CMatrix) -> CMatrix {
        assert!(a.is_square(), "matrix polynomial requires a square matrix");
        let n = a.rows();
        let mut acc = CMatrix::identity(n).scale(*self.coeffs.last().unwrap());
        for &c in self.coeffs.iter().rev().skip(1) {
            acc = acc.matmul(a).add_scaled_identity(c);
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * j as f64)
                .collect(),
        )
    }

    pub fn scale(&self, alpha: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * alpha).collect())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Complex64::ZERO; n];
        for (j, &c) in self.coeffs.iter().enumerate() {
            coeffs[j] += c;
        }
        for (j, &c) in other.coeffs.iter().enumerate() {
            coeffs[j] += c;
        }
        Polynomial::new(coeffs)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut coeffs = vec![Complex64::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == Complex64::ZERO {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        Ok(Polynomial::new(
            pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
        ))
    }
}

/// Roots of a polynomial of degree >= 1 via the companion matrix.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    let deg = p.degree();
    if deg == 0 {
        return Err(Error::invalid("poly_roots requires degree >= 1"));
    }
    let lead = *p.coeffs().last().unwrap();
    if deg == 1 {
        return Ok(vec![-p.coeffs()[0] / lead]);
    }
    // companion matrix of the monic polynomial
    let mut comp = CMatrix::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = Complex64::ONE;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -p.coeffs()[i] / lead;
    }
    Ok(general_eigs(&comp, false)?.eigenvalues)
}

/// Euclidean division: `num = quotient * den + remainder` with
/// `deg remainder < deg den` (or remainder zero).
pub fn poly_long_division(num: &Polynomial, den: &Polynomial) -> Result<(Polynomial, Polynomial)> {
    if den.is_zero() {
        return Err(Error::invalid("division by the zero polynomial"));
    }
    if num.degree() < den.degree() || num.is_zero() {
        return Ok((Polynomial::zero(), num.clone()));
    }
    let d = den.degree();
    let lead = den.coeffs()[d];
    let mut rem: Vec<Complex64> = num.coeffs().to_vec();
    let mut quot = vec![Complex64::ZERO; num.degree() - d + 1];
    for k in (0..quot.len()).rev() {
        let q = rem[k + d] / lead;
        quot[k] = q;
        if q == Complex64::ZERO {
            continue;
        }
        for (j, &dc) in den.coeffs().iter().enumerate() {
            rem[k + j] -= q * dc;
        }
    }
    rem.truncate(d.max(1));
    Ok((Polynomial::new(quot), Polynomial::new(rem)))
}

/// Rational function `R(z) = N(z) / D(z)` with `nu = max(deg N, deg D)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::invalid("rational function with zero denominator"));
        }
        Ok(Self { num, den })
    }

    /// A polynomial viewed as a rational function (denominator 1).
    pub fn from_polynomial(p: Polynomial) -> Self {
        Self { num: p, den: Polynomial::constant(Complex64::ONE) }
    }

    /// The linear-system case `R(z) = 1/z`.
    pub fn inverse_z() -> Self {
        Self {
            num: Polynomial::constant(Complex64::ONE),
            den: Polynomial::new(vec![Complex64::ZERO, Complex64::ONE]),
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    /// Lookahead depth `nu = max(deg N, deg D)`.
    pub fn nu(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Poles (roots of the denominator). Empty for constant denominators.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        if self.den.degree() == 0 {
            Ok(vec![])
        } else {
            poly_roots(&self.den)
        }
    }
}

/// Partial-fraction form `R(z) = polynomial_part(z) + sum w_i / (z - r_i)`
/// for simple poles.
#[derive(Clone, Debug)]
pub struct PartialFractions {
    pub poles: Vec<Complex64>,
    pub weights: Vec<Complex64>,
    pub polynomial_part: Polynomial,
}

impl PartialFractions {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = self.polynomial_part.eval(z);
        for (&r, &w) in self.poles.iter().zip(&self.weights) {
            acc += w / (z - r);
        }
        acc
    }
}

/// Decomposes `R` into partial fractions. The denominator roots must be
/// simple: pairwise separation above `1e-6 max(1, max |r_i|)`, otherwise the
/// decomposition would produce meaninglessly large weights and the call
/// fails with [`Error::RepeatedPoles`].
pub fn partial_fractions(r: &RationalFunction) -> Result<PartialFractions> {
    let (quot, rem) = poly_long_division(r.numerator(), r.denominator())?;
    if r.denominator().degree() == 0 {
        return Ok(PartialFractions {
            poles: vec![],
            weights: vec![],
            polynomial_part: quot,
        });
    }
    let poles = poly_roots(r.denominator())?;
    let max_mag = poles.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let tol = 1e-6 * max_mag.max(1.0);
    for i in 0..poles.len() {
        for j in (i + 1)..poles.len() {
            let sep = (poles[i] - poles[j]).norm();
            if sep <= tol {
                return Err(Error::RepeatedPoles { separation: sep, tolerance: tol });
            }
        }
    }
    let dprime = r.denominator().derivative();
    let weights = poles.iter().map(|&p| rem.eval(p) / dprime.eval(p)).collect();
    Ok(PartialFractions { poles, weights, polynomial_part: quot })
}

/// Closed disk in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        (z - self.center).norm() <= self.radius + slack
    }

    /// Equispaced boundary samples starting at angle 0.
    pub fn boundary_points(&self, m: usize) -> Vec<Complex64> {
        (0..m)
            .map(|j| {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                self.center + Complex64::from_polar(self.radius, theta)
            })
            .collect()
    }

    pub fn boundary(&self, m: usize) -> RegionBoundary {
        let angles = (0..m)
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / m as f64)
            .collect();
        RegionBoundary {
            points: self.boundary_points(m),
            angles,
            kind: RegionKind::Disk,
        }
    }
}

/// Default number of disk-boundary samples for sampled suprema.
pub const DISK_SAMPLES: usize = 1024;

/// First `k` Taylor terms of `R` about the disk center: the Faber series of
/// a disk is the Taylor series, so this truncation is a near-best polynomial
/// approximation of `R` on the disk.
///
/// All poles must lie strictly outside the disk. Coefficients come from the
/// partial-fraction form via `1/(z-r) = -sum_m (z-c)^m / (r-c)^{m+1}` plus a
/// Taylor shift of the polynomial part, which stays accurate for `k` up to
/// ~50 where numerical differentiation would have cancelled catastrophically.
pub fn taylor_near_best(r: &RationalFunction, disk: &Disk, k: usize) -> Result<Polynomial> {
    if k == 0 {
        return Ok(Polynomial::zero());
    }
    let pf = partial_fractions(r)?;
    for &pole in &pf.poles {
        if (pole - disk.center).norm() <= disk.radius * (1.0 + 1e-8) {
            return Err(Error::PoleInsideDisk { pole });
        }
    }
    // Taylor coefficients about the center, shifted basis (z - c)^m
    let mut shifted = vec![Complex64::ZERO; k];
    for (&pole, &w) in pf.poles.iter().zip(&pf.weights) {
        let d = pole - disk.center;
        let mut inv_pow = 1.0 / d;
        for t in shifted.iter_mut() {
            *t -= w * inv_pow;
            inv_pow /= d;
        }
    }
    // Taylor shift of the polynomial part
    if !pf.polynomial_part.is_zero() {
        let mut work: Vec<Complex64> = pf.polynomial_part.coeffs().to_vec();
        let n = work.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let delta = disk.center * work[j + 1];
                work[j] += delta;
            }
        }
        for (t, &w) in shifted.iter_mut().zip(work.iter()) {
            *t += w;
        }
    }
    // expand back to the standard basis by Horner in (z - c)
    let mut p = Polynomial::constant(shifted[k - 1]);
    let factor = Polynomial::new(vec![-disk.center, Complex64::ONE]);
    for m in (0..k - 1).rev() {
        p = p.mul(&factor).add(&Polynomial::constant(shifted[m]));
    }
    Ok(p)
}

/// Sampled supremum of `|R(z) - p(z)|` over a point set. A sampled maximum
/// is a lower bound of the true supremum. Points within `1e-12` of a pole
/// are rejected.
pub fn sup_on_points(
    r: &RationalFunction,
    p: &Polynomial,
    points: &[Complex64],
) -> Result<f64> {
    let poles = r.poles()?;
    let mut sup = 0.0f64;
    for &z in points {
        for &pole in &poles {
            let distance = (z - pole).norm();
            if distance <= 1e-12 {
                return Err(Error::PoleHit { point: z, distance });
            }
        }
        sup = sup.max((r.eval(z) - p.eval(z)).norm());
    }
    Ok(sup)
}

// ── Smallest enclosing disk ─────────────────────────────────────────

/// Relative slack for containment checks inside the Welzl recursion.
const WELZL_EPS: f64 = 1e-12;

fn disk_contains_eps(d: &Disk, z: Complex64) -> bool {
    (z - d.center).norm() <= d.radius * (1.0 + WELZL_EPS) + f64::MIN_POSITIVE
}

fn disk_from_two(a: Complex64, b: Complex64) -> Disk {
    let center = (a + b) * 0.5;
    let radius = (a - center).norm().max((b - center).norm());
    Disk { center, radius }
}

/// Circumcircle of three points; `None` when collinear.
fn disk_from_three(a: Complex64, b: Complex64, c: Complex64) -> Option<Disk> {
    // relative coordinates for numerical stability
    let ox = (a.re.min(b.re).min(c.re) + a.re.max(b.re).max(c.re)) * 0.5;
    let oy = (a.im.min(b.im).min(c.im) + a.im.max(b.im).max(c.im)) * 0.5;
    let (ax, ay) = (a.re - ox, a.im - oy);
    let (bx, by) = (b.re - ox, b.im - oy);
    let (cx, cy) = (c.re - ox, c.im - oy);
    let d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0;
    if d == 0.0 {
        return None;
    }
    let x = ((ax * ax + ay * ay) * (by - cy)
        + (bx * bx + by * by) * (cy - ay)
        + (cx * cx + cy * cy) * (ay - by))
        / d;
    let y = ((ax * ax + ay * ay) * (cx - bx)
        + (bx * bx + by * by) * (ax - cx)
        + (cx * cx + cy * cy) * (bx - ax))
        / d;
    let center = Complex64::new(ox + x, oy + y);
    let radius = (a - center)
        .norm()
        .max((b - center).norm())
        .max((c - center).norm());
    Some(Disk { center, radius })
}

/// Smallest disk enclosing all points (Welzl's algorithm, move-to-front
/// processing order, no shuffling so the result is deterministic).
///
/// Every input point is inside the result within `1e-12` relative slack, and
/// the disk is determined by at most three support points on its boundary.
pub fn smallest_enclosing_disk(points: &[Complex64]) -> Disk {
    assert!(!points.is_empty(), "smallest_enclosing_disk needs at least one point");
    let pts: Vec<Complex64> = points.to_vec();
    let mut disk = Disk { center: pts[0], radius: 0.0 };
    for i in 1..pts.len() {
        if !disk_contains_eps(&disk, pts[i]) {
            disk = disk_one_boundary(&pts[..=i], pts[i]);
        }
    }
    disk
}

// smallest disk over the slice with `p` known to be on the boundary
fn disk_one_boundary(pts: &[Complex64], p: Complex64) -> Disk {
    let mut disk = Disk { center: p, radius: 0.0 };
    for (i, &q) in pts.iter().enumerate() {
        if !disk_contains_eps(&disk, q) {
            disk = if disk.radius == 0.0 {
                disk_from_two(p, q)
            } else {
                disk_two_boundary(&pts[..=i], p, q)
            };
        }
    }
    disk
}

// smallest disk over the slice with `p` and `q` on the boundary
fn disk_two_boundary(pts: &[Complex64], p: Complex64, q: Complex64) -> Disk {
    let base = disk_from_two(p, q);
    let mut left: Option<Disk> = None;
    let mut right: Option<Disk> = None;
    let pq = q - p;
    let cross = |u: Complex64, v: Complex64| u.re * v.im - u.im * v.re;
    for &r in pts {
        if disk_contains_eps(&base, r) {
            continue;
        }
        let side = cross(pq, r - p);
        let Some(c) = disk_from_three(p, q, r) else { continue };
        let center_side = cross(pq, c.center - p);
        if side > 0.0 && left.as_ref().map_or(true, |l| center_side > cross(pq, l.center - p)) {
            left = Some(c);
        } else if side < 0.0
            && right.as_ref().map_or(true, |rr| center_side < cross(pq, rr.center - p))
        {
            right = Some(c);
        }
    }
    match (left, right) {
        (None, None) => base,
        (Some(l), None) => l,
        (None, Some(r)) => r,
        (Some(l), Some(r)) => {
            if l.radius <= r.radius {
                l
            } else {
                r
            }
        }
    }
}
