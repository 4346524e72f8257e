//! Small dense complex linear algebra.
//!
//! Everything here works on square matrices of at most a few dozen rows (the
//! largest operator in the catalog is 64 × 64), so the algorithms favour
//! determinism over asymptotics: a cyclic Jacobi eigensolver for Hermitian
//! matrices, modified Gram-Schmidt with one re-orthogonalization pass, and
//! plain row-major storage.
//!
//! Returned eigenvectors and span bases follow a fixed phase convention (the
//! largest-magnitude coordinate is real and positive) so that regression
//! values do not depend on rounding noise in the solver.

use std::ops::{ Add, Index, IndexMut, Mul, Sub };
use num_complex::Complex64 as C64;
use thiserror::Error;

/// Maximum number of cyclic Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of the input's Frobenius norm.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Relative tolerance used by [`eig_hermitian`] to accept a matrix as
/// Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Default relative threshold for numerical rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("expected {expected} entries for a {dim}x{dim} matrix, got {got}")]
    NotSquare { dim: usize, expected: usize, got: usize },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: |M[{row},{col}] - conj(M[{col},{row}])| = {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("vector length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("vectors are linearly dependent")]
    Dependent,

    #[error("dimension mismatch: {0}x{0} against {1}x{1}")]
    DimMismatch(usize, usize),
}

pub type LinalgResult<T> = Result<T, LinalgError>;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a row-major entry list of length `dim * dim`.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> LinalgResult<Self> {
        if data.len() != dim * dim {
            return Err(LinalgError::NotSquare {
                dim,
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// Build from real row-major entries.
    pub fn from_real(dim: usize, data: &[f64]) -> LinalgResult<Self> {
        Self::from_row_major(dim, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn<F>(dim: usize, mut f: F) -> Self
    where F: FnMut(usize, usize) -> C64
    {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Outer product `u v†`.
    pub fn outer(u: &[C64], v: &[C64]) -> LinalgResult<Self> {
        if u.len() != v.len() {
            return Err(LinalgError::LengthMismatch { expected: u.len(), got: v.len() });
        }
        Ok(Self::from_fn(u.len(), |i, j| u[i] * v[j].conj()))
    }

    /// Projector `|v⟩⟨v|` onto the (not necessarily normalized) vector `v`.
    pub fn projector(v: &[C64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize { self.dim }

    pub fn entries(&self) -> &[C64] { &self.data }

    pub fn into_entries(self) -> Vec<C64> { self.data }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference; infinite on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data.iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn matmul(&self, rhs: &Self) -> LinalgResult<Self> {
        if self.dim != rhs.dim {
            return Err(LinalgError::DimMismatch(self.dim, rhs.dim));
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> LinalgResult<Vec<C64>> {
        if v.len() != self.dim {
            return Err(LinalgError::LengthMismatch { expected: self.dim, got: v.len() });
        }
        Ok((0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Column `j` as an owned vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    /// Largest `|M_ij - conj(M_ji)|` together with its location.
    pub fn hermitian_deviation(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > worst.0 {
                    worst = (d, i, j);
                }
            }
        }
        worst
    }

    /// `true` if `max |M_ij - conj(M_ji)| <= tol * max(max|M_ij|, 1)`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation().0 <= tol * self.max_abs().max(1.0)
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// `true` if every entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    fn check_finite(&self) -> LinalgResult<()> {
        match self.data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            Some(k) => Err(LinalgError::NonFinite { row: k / self.dim, col: k % self.dim }),
            None => Ok(()),
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, s: f64) -> ComplexMatrix { self.scale(s) }
}

/* Vectors ********************************************************************/

/// `⟨a|b⟩ = Σ conj(a_i) b_i`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Unit vector along `v`; the zero vector is returned unchanged.
pub fn normalized(v: &[C64]) -> Vec<C64> {
    let n = norm(v);
    if n == 0.0 {
        return v.to_vec();
    }
    v.iter().map(|z| z / n).collect()
}

pub fn real_vector(xs: &[f64]) -> Vec<C64> {
    xs.iter().map(|&x| C64::new(x, 0.0)).collect()
}

/// Rotate `v` so that its largest-magnitude coordinate is real positive.
/// Ties go to the lowest index.
pub fn fix_phase_largest(v: &mut [C64]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let k = v.iter().position(|z| z.norm() >= max * (1.0 - 1e-12)).unwrap();
    let phase = v[k].conj() / v[k].norm();
    v.iter_mut().for_each(|z| *z *= phase);
    v[k] = C64::new(v[k].norm(), 0.0);
}

/// Rotate `v` so that its first coordinate above `tol * ‖v‖` is real
/// positive.
pub fn fix_phase_first(v: &mut [C64], tol: f64) {
    let n = norm(v);
    if n == 0.0 {
        return;
    }
    if let Some(k) = v.iter().position(|z| z.norm() > tol * n) {
        let phase = v[k].conj() / v[k].norm();
        v.iter_mut().for_each(|z| *z *= phase);
        v[k] = C64::new(v[k].norm(), 0.0);
    }
}

/* Eigendecomposition *********************************************************/

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, ordered like `values`.
    pub vectors: ComplexMatrix,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// Count of eigenvalues with `|λ| > tol_rel * max(max|λ|, 1)`.
    pub fn rank(&self, tol_rel: f64) -> usize {
        let thresh = self.threshold(tol_rel);
        self.values.iter().filter(|l| l.abs() > thresh).count()
    }

    /// Eigenvectors whose eigenvalues exceed the rank threshold: an
    /// orthonormal basis of the range of a PSD matrix.
    pub fn range_basis(&self, tol_rel: f64) -> Vec<Vec<C64>> {
        let thresh = self.threshold(tol_rel);
        self.values.iter()
            .enumerate()
            .filter(|(_, l)| l.abs() > thresh)
            .map(|(k, _)| self.vector(k))
            .collect()
    }

    /// Eigenvectors with `|λ| <= tol_abs`.
    pub fn kernel_basis(&self, tol_abs: f64) -> Vec<Vec<C64>> {
        self.values.iter()
            .enumerate()
            .filter(|(_, l)| l.abs() <= tol_abs)
            .map(|(k, _)| self.vector(k))
            .collect()
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }

    fn threshold(&self, tol_rel: f64) -> f64 {
        let scale = self.values.iter().map(|l| l.abs()).fold(1.0, f64::max);
        tol_rel * scale
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// The input is symmetrized as `(M + M†)/2` before solving; it is rejected
/// if it deviates from Hermiticity by more than [`HERMITIAN_TOL`] relative
/// to its largest entry. Each rotation `J = D R` first removes the phase of
/// `M_pq` with a diagonal unitary `D` and then applies the real symmetric
/// Jacobi rotation `R`, so the pair `(p, q)` is annihilated exactly.
pub fn eig_hermitian(m: &ComplexMatrix) -> LinalgResult<Spectrum> {
    m.check_finite()?;
    let (dev, row, col) = m.hermitian_deviation();
    if dev > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(LinalgError::NotHermitian { row, col, deviation: dev });
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    for k in 0..n {
        a[(k, k)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let target = OFF_DIAGONAL_TOL * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        let off = off_diagonal_norm(&a);
        if off > target {
            return Err(LinalgError::NoConvergence { sweeps: MAX_SWEEPS, off });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        let mut col = v.column(old);
        fix_phase_largest(&mut col);
        for i in 0..n {
            vectors[(i, new)] = col[i];
        }
    }
    Ok(Spectrum { values, vectors })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let n = a.dim();
    let phase = apq / mag;
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // J restricted to (p, q)
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    // A <- A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    // A <- J† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    // V <- V J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Numerical rank of a Hermitian (PSD) matrix: the number of eigenvalues
/// with `|λ| > tol_rel * max(max|λ|, 1)`.
pub fn rank_tol(m: &ComplexMatrix, tol_rel: f64) -> LinalgResult<usize> {
    Ok(eig_hermitian(m)?.rank(tol_rel))
}

/* Spans **********************************************************************/

/// Try to add `v` to the orthonormal set `basis`.
///
/// Projects out the current span twice (modified Gram-Schmidt plus one
/// re-orthogonalization pass). The remainder is appended, normalized and
/// phase-fixed, when its norm is at least `tol * ‖v‖`. Returns whether the
/// basis grew.
pub fn extend_span(basis: &mut Vec<Vec<C64>>, v: &[C64], tol: f64) -> LinalgResult<bool> {
    if let Some(b) = basis.first() {
        if b.len() != v.len() {
            return Err(LinalgError::LengthMismatch { expected: b.len(), got: v.len() });
        }
    }
    let original = norm(v);
    if original == 0.0 {
        return Ok(false);
    }
    let mut w = v.to_vec();
    for _ in 0..2 {
        for b in basis.iter() {
            let c = inner(b, &w);
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
    let rest = norm(&w);
    if rest < tol * original {
        return Ok(false);
    }
    w.iter_mut().for_each(|x| *x /= rest);
    fix_phase_largest(&mut w);
    basis.push(w);
    Ok(true)
}

/// Orthonormal basis of `span(vectors)`.
///
/// Vectors whose component outside the span of their predecessors is
/// smaller than `tol` times their own norm are dropped, so the basis size is
/// the numerical rank of the stack.
pub fn orthonormal_span(vectors: &[Vec<C64>], tol: f64) -> LinalgResult<Vec<Vec<C64>>> {
    let mut basis = Vec::new();
    if let Some(first) = vectors.first() {
        let len = first.len();
        for v in vectors {
            if v.len() != len {
                return Err(LinalgError::LengthMismatch { expected: len, got: v.len() });
            }
            extend_span(&mut basis, v, tol)?;
        }
    }
    Ok(basis)
}

/// Relative norm of the component of `v` outside `span(basis)`:
/// `‖v − Σ_i b_i ⟨b_i|v⟩‖ / ‖v‖`, in `[0, 1]`.
///
/// `basis` must be orthonormal. The zero vector has residual 0.
pub fn residual_outside_span(v: &[C64], basis: &[Vec<C64>]) -> LinalgResult<f64> {
    let total = norm(v);
    if total == 0.0 {
        return Ok(0.0);
    }
    let mut w = v.to_vec();
    for b in basis {
        if b.len() != v.len() {
            return Err(LinalgError::LengthMismatch { expected: v.len(), got: b.len() });
        }
        let c = inner(b, &w);
        w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
    }
    Ok((norm(&w) / total).min(1.0))
}

/// Unit vector in `span{x, y}` orthogonal to `x`, with its first nonzero
/// coordinate real positive.
pub fn orth_in_2d_span(x: &[C64], y: &[C64]) -> LinalgResult<Vec<C64>> {
    if x.len() != y.len() {
        return Err(LinalgError::LengthMismatch { expected: x.len(), got: y.len() });
    }
    let xx = inner(x, x);
    if xx.re == 0.0 || norm(y) == 0.0 {
        return Err(LinalgError::Dependent);
    }
    let c = inner(x, y) / xx;
    let mut w: Vec<C64> = y.iter().zip(x).map(|(b, a)| b - c * a).collect();
    let rest = norm(&w);
    if rest <= 1e-10 * norm(y) {
        return Err(LinalgError::Dependent);
    }
    w.iter_mut().for_each(|z| *z /= rest);
    fix_phase_first(&mut w, 1e-12);
    Ok(w)
}
