//! Dense complex linear algebra kernels.
//!
//! Everything here is written for problem sizes up to a few hundred, so the
//! kernels are plain O(n^3) loops over column-major storage. Matrices and
//! vectors are immutable values after construction; builders that mutate do
//! so through `&mut self` before the value is shared.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative pivot/rank threshold used by the LU and QR factorizations.
pub const PIVOT_RTOL: f64 = 1e-14;

/// Dense complex vector.
#[derive(Clone, Debug, PartialEq)]
pub struct CVector {
    entries: Vec<Complex64>,
}

impl CVector {
    /// Builds a vector, rejecting NaN/Inf entries.
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { entries })
    }

    /// Builds a vector without the finiteness check. Internal arithmetic on
    /// finite inputs stays finite, so hot paths use this.
    pub(crate) fn from_raw(entries: Vec<Complex64>) -> Self {
        Self { entries }
    }

    pub fn zeros(n: usize) -> Self {
        Self { entries: vec![Complex64::ZERO; n] }
    }

    /// Canonical basis vector `e_k` (0-based index) of length `n`.
    pub fn unit(n: usize, k: usize) -> Self {
        assert!(k < n, "unit index {k} out of range for length {n}");
        let mut entries = vec![Complex64::ZERO; n];
        entries[k] = Complex64::ONE;
        Self { entries }
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.entries.iter()
    }

    pub fn norm2(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, alpha: Complex64) -> CVector {
        CVector::from_raw(self.entries.iter().map(|z| z * alpha).collect())
    }

    pub fn add(&self, other: &CVector) -> CVector {
        assert_eq!(self.len(), other.len());
        CVector::from_raw(
            self.iter().zip(other.iter()).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &CVector) -> CVector {
        assert_eq!(self.len(), other.len());
        CVector::from_raw(
            self.iter().zip(other.iter()).map(|(a, b)| a - b).collect(),
        )
    }

    /// `self += alpha * x`.
    pub fn axpy_in_place(&mut self, alpha: Complex64, x: &CVector) {
        assert_eq!(self.len(), x.len());
        for (s, v) in self.entries.iter_mut().zip(x.iter()) {
            *s += alpha * v;
        }
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }
}

impl std::ops::Index<usize> for CVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.entries[i]
    }
}

impl std::ops::IndexMut<usize> for CVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.entries[i]
    }
}

/// Inner product `<a, b> = sum conj(a_i) b_i` (conjugate-linear in the first
/// argument, BLAS `zdotc` convention).
pub fn dot(a: &CVector, b: &CVector) -> Complex64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Dense complex matrix in column-major order: entry `(i, j)` is stored at
/// `i + j * rows`. Column-major is the on-disk order of the Matrix Market
/// array format, so file round trips are bit-identical.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Builds a matrix from column-major data, rejecting NaN/Inf entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "entry count {} does not match {rows} x {cols}",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_columns(cols: &[CVector]) -> Self {
        assert!(!cols.is_empty());
        let rows = cols[0].len();
        let mut data = Vec::with_capacity(rows * cols.len());
        for c in cols {
            assert_eq!(c.len(), rows);
            data.extend_from_slice(c.as_slice());
        }
        Self { rows, cols: cols.len(), data }
    }

    /// Row-major convenience constructor (used by tests and generators).
    pub fn from_rows(rows: usize, cols: usize, row_major: &[Complex64]) -> Result<Self> {
        if row_major.len() != rows * cols {
            return Err(Error::invalid("row data length mismatch"));
        }
        Ok(Self::from_fn(rows, cols, |i, j| row_major[i * cols + j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn col(&self, j: usize) -> CVector {
        assert!(j < self.cols);
        CVector::from_raw(self.data[j * self.rows..(j + 1) * self.rows].to_vec())
    }

    pub(crate) fn col_slice(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub(crate) fn col_slice_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn set_col(&mut self, j: usize, v: &CVector) {
        assert_eq!(v.len(), self.rows);
        self.col_slice_mut(j).copy_from_slice(v.as_slice());
    }

    /// Leading `r x c` block as a new matrix.
    pub fn leading_block(&self, r: usize, c: usize) -> CMatrix {
        assert!(r <= self.rows && c <= self.cols);
        CMatrix::from_fn(r, c, |i, j| self[(i, j)])
    }

    pub fn matvec(&self, x: &CVector) -> CVector {
        assert_eq!(
            self.cols,
            x.len(),
            "matvec dimension mismatch: {}x{} * {}",
            self.rows,
            self.cols,
            x.len()
        );
        let mut y = vec![Complex64::ZERO; self.rows];
        for j in 0..self.cols {
            let xj = x[j];
            if xj == Complex64::ZERO {
                continue;
            }
            for (yi, &aij) in y.iter_mut().zip(self.col_slice(j)) {
                *yi += aij * xj;
            }
        }
        CVector::from_raw(y)
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let out_col = out.col_slice_mut(j);
            for k in 0..self.cols {
                let bkj = other[(k, j)];
                if bkj == Complex64::ZERO {
                    continue;
                }
                for (o, &aik) in out_col.iter_mut().zip(self.col_slice(k)) {
                    *o += aik * bkj;
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, alpha: Complex64) -> CMatrix {
        CMatrix::from_raw(self.rows, self.cols, self.data.iter().map(|z| z * alpha).collect())
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert!(self.rows == other.rows && self.cols == other.cols);
        CMatrix::from_raw(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert!(self.rows == other.rows && self.cols == other.cols);
        CMatrix::from_raw(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        )
    }

    /// `self + alpha * I`.
    pub fn add_scaled_identity(&self, alpha: Complex64) -> CMatrix {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] += alpha;
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Largest column 2-norm; the scale used by pivot thresholds.
    pub fn max_col_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| self.col_slice(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// Hermitian part `(M + M^*)/2`, exactly Hermitian entrywise.
    pub fn hermitian_part(&self) -> CMatrix {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = CMatrix::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = Complex64::new(self[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let v = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                h[(i, j)] = v;
                h[(j, i)] = v.conj();
            }
        }
        h
    }

    /// Deviation from Hermitian symmetry, `||M - M^*||_F`.
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i + j * self.rows]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i + j * self.rows]
    }
}

// ── LU factorization ────────────────────────────────────────────────

/// LU factorization with partial pivoting, stored packed.
pub struct LuFactors {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl LuFactors {
    /// Factors a square matrix. `pivot_floor` is the absolute magnitude below
    /// which a pivot counts as singular; pass 0 to accept any nonzero pivot.
    pub fn new(a: &CMatrix, pivot_floor: f64) -> Result<Self> {
        assert!(a.is_square(), "LU requires a square matrix");
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm = Vec::with_capacity(n);
        for k in 0..n {
            // pick the largest remaining magnitude in column k
            let mut p = k;
            let mut pmax = lu[(k, k)].norm();
            for i in (k + 1)..n {
                let m = lu[(i, k)].norm();
                if m > pmax {
                    pmax = m;
                    p = i;
                }
            }
            if pmax <= pivot_floor {
                return Err(Error::SingularMatrix { pivot: pmax, threshold: pivot_floor });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            perm.push(p);
            let piv = lu[(k, k)];
            for i in (k + 1)..n {
                let m = lu[(i, k)] / piv;
                lu[(i, k)] = m;
                if m != Complex64::ZERO {
                    for j in (k + 1)..n {
                        let delta = m * lu[(k, j)];
                        lu[(i, j)] -= delta;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve_vec(&self, b: &CVector) -> CVector {
        let n = self.lu.rows();
        assert_eq!(b.len(), n);
        let mut x: Vec<Complex64> = b.as_slice().to_vec();
        // all row interchanges first: the stored multipliers are the ones of
        // the fully pivoted matrix
        for (k, &p) in self.perm.iter().enumerate() {
            x.swap(k, p);
        }
        for k in 0..n {
            let xk = x[k];
            if xk != Complex64::ZERO {
                for i in (k + 1)..n {
                    let delta = self.lu[(i, k)] * xk;
                    x[i] -= delta;
                }
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in (k + 1)..n {
                s -= self.lu[(k, j)] * x[j];
            }
            x[k] = s / self.lu[(k, k)];
        }
        CVector::from_raw(x)
    }

    pub fn solve_mat(&self, b: &CMatrix) -> CMatrix {
        let cols: Vec<CVector> = (0..b.cols()).map(|j| self.solve_vec(&b.col(j))).collect();
        CMatrix::from_columns(&cols)
    }
}

/// Solves `A x = b` by LU with partial pivoting.
///
/// Fails with [`Error::SingularMatrix`] when a pivot magnitude drops below
/// `1e-14` times the largest initial column norm of `A`.
pub fn dense_solve(a: &CMatrix, b: &CVector) -> Result<CVector> {
    if !a.is_square() {
        return Err(Error::invalid("dense_solve requires a square matrix"));
    }
    if a.rows() != b.len() {
        return Err(Error::invalid("dense_solve shape mismatch"));
    }
    let floor = PIVOT_RTOL * a.max_col_norm();
    Ok(LuFactors::new(a, floor)?.solve_vec(b))
}

/// Dense inverse via LU (columns of the identity).
pub fn dense_inverse(a: &CMatrix) -> Result<CMatrix> {
    let floor = PIVOT_RTOL * a.max_col_norm();
    let lu = LuFactors::new(a, floor)?;
    Ok(lu.solve_mat(&CMatrix::identity(a.rows())))
}

// ── Givens rotations ────────────────────────────────────────────────

/// Plane rotation acting on rows `i < j`:
///
/// ```text
/// [  c       s ] [x_i]   [x_i']
/// [ -conj(s) c ] [x_j] = [x_j']
/// ```
///
/// with `c` real, `c >= 0`, `c^2 + |s|^2 = 1`. The sign convention makes the
/// rotation unique and test output deterministic.
#[derive(Clone, Copy, Debug)]
pub struct GivensRotation {
    pub i: usize,
    pub j: usize,
    pub c: f64,
    pub s: Complex64,
}

impl GivensRotation {
    pub fn apply_to_slice(&self, x: &mut [Complex64]) {
        let xi = x[self.i];
        let xj = x[self.j];
        x[self.i] = self.c * xi + self.s * xj;
        x[self.j] = -self.s.conj() * xi + self.c * xj;
    }

    pub fn apply_to_vector(&self, x: &mut CVector) {
        self.apply_to_slice(x.as_mut_slice());
    }

    /// Applies the rotation to rows `i, j` of every column of `m`.
    pub fn apply_to_matrix_rows(&self, m: &mut CMatrix) {
        let rows = m.rows();
        for col in 0..m.cols() {
            let base = col * rows;
            let xi = m.data[base + self.i];
            let xj = m.data[base + self.j];
            m.data[base + self.i] = self.c * xi + self.s * xj;
            m.data[base + self.j] = -self.s.conj() * xi + self.c * xj;
        }
    }
}

/// Builds the rotation annihilating `b` against `a`: applied to `(a, b)^T`
/// it produces `(rho, 0)^T` with `|rho| = sqrt(|a|^2 + |b|^2)` and the phase
/// of `a` (or `rho = |b|` when `a = 0`).
///
/// Local 2x2 form: row indices are fixed up by the caller.
pub fn compute_givens(a: Complex64, b: Complex64) -> Result<GivensRotation> {
    if a == Complex64::ZERO && b == Complex64::ZERO {
        return Err(Error::DegeneratePair);
    }
    let (c, s) = if b == Complex64::ZERO {
        (1.0, Complex64::ZERO)
    } else if a == Complex64::ZERO {
        (0.0, b.conj() / b.norm())
    } else {
        let na = a.norm();
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        ((na / n), (a / na) * b.conj() / n)
    };
    Ok(GivensRotation { i: 0, j: 1, c, s })
}

// ── Givens-based QR least squares ───────────────────────────────────

/// Solves `min_y || rhs - M y ||_2` for an `m x k` matrix with `m >= k` by a
/// Givens QR factorization. Returns the minimizer and the residual norm.
///
/// Fails with [`Error::RankDeficient`] when a diagonal of the triangular
/// factor falls below `1e-14 ||M||_F`.
pub fn givens_qr_least_squares(m: &CMatrix, rhs: &CVector) -> Result<(CVector, f64)> {
    let (nrows, ncols) = (m.rows(), m.cols());
    if nrows < ncols {
        return Err(Error::invalid("least squares requires rows >= cols"));
    }
    if rhs.len() != nrows {
        return Err(Error::invalid("least squares rhs length mismatch"));
    }
    let scale = m.frobenius_norm();
    let mut r = m.clone();
    let mut g = rhs.clone();
    for col in 0..ncols {
        for row in (col + 1)..nrows {
            if r[(row, col)] == Complex64::ZERO {
                continue;
            }
            let mut rot = match compute_givens(r[(col, col)], r[(row, col)]) {
                Ok(rot) => rot,
                // both entries zero is impossible here (the row entry is nonzero)
                Err(_) => unreachable!(),
            };
            rot.i = col;
            rot.j = row;
            rot.apply_to_matrix_rows(&mut r);
            rot.apply_to_vector(&mut g);
            r[(row, col)] = Complex64::ZERO;
        }
    }
    for d in 0..ncols {
        let v = r[(d, d)].norm();
        if v < PIVOT_RTOL * scale {
            return Err(Error::RankDeficient { index: d, value: v });
        }
    }
    let mut y = vec![Complex64::ZERO; ncols];
    for i in (0..ncols).rev() {
        let mut s = g[i];
        for j in (i + 1)..ncols {
            s -= r[(i, j)] * y[j];
        }
        y[i] = s / r[(i, i)];
    }
    let residual = g.as_slice()[ncols..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok((CVector::from_raw(y), residual))
}
