//! Dense complex linear algebra.
//!
//! Everything here works on small square or rectangular matrices stored
//! row-major. The matrices that show up in this crate are at most a few
//! hundred rows, so there is no blocking and no attempt at cache tuning.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Library default for every numerical tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix exponential did not converge (norm {0})")]
    NonConvergence(f64),
    #[error("matrix is numerically singular")]
    Singular,
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
}

/// Dense matrix of complex scalars, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self, LinalgError> {
        Self::from_vec(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// `[[a, b], [c, d]]` assembled from four blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut m = Self::zeros(a.rows + c.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols, b);
        m.set_block(a.rows, 0, c);
        m.set_block(a.rows, a.cols, d);
        m
    }

    pub fn set_block(&mut self, row: usize, col: usize, block: &Self) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(row + r, col + c)] = block[(r, c)];
            }
        }
    }

    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> Self {
        assert!(row + rows <= self.rows && col + cols <= self.cols);
        Self::from_fn(rows, cols, |r, c| self[(row + r, col + c)])
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

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn require_square(&self) -> Result<usize, LinalgError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: Complex64, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// `tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for r in 0..self.rows {
            for s in 0..self.cols {
                acc += self[(r, s)] * other[(s, r)];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols).map(|c| (0..self.rows).map(|r| self[(r, c)].norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == ZERO)
    }

    /// Frobenius distance between two equally shaped matrices.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Hermiticity residual `max |m - m†|`.
    pub fn hermitian_residual(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Kronecker product, `(a ⊗ b)[(i, k), (j, l)] = a[i][j] b[k][l]` with
    /// the row index `i * b.rows + k`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(r) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for s in 0..self.cols {
                let a = self.data[r * self.cols + s];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[s * rhs.cols..(s + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

pub fn hermitian_conjugate(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

/// Splits `a` into `(a + a†)/2` and `(a - a†)/2`.
pub fn hermitian_split(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix), LinalgError> {
    a.require_square()?;
    let dagger = a.adjoint();
    let herm = (a + &dagger).scale_real(0.5);
    let anti = (a - &dagger).scale_real(0.5);
    Ok((herm, anti))
}

/// Matrix exponential by scaling and squaring around a Taylor core.
///
/// The matrix is scaled by `2^-s` until its 1-norm is at most 1/2, the
/// series is summed to machine precision and the result squared `s` times.
pub fn matrix_exp(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let n = m.require_square()?;
    if !m.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let norm = m.norm_one();
    if norm > 1e12 {
        return Err(LinalgError::NonConvergence(norm));
    }
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) > 0.5 {
        squarings += 1;
    }
    let scaled = m.scale_real(2f64.powi(-(squarings as i32)));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    let mut converged = false;
    for k in 1..=48 {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        sum = &sum + &term;
        if term.norm_one() <= f64::EPSILON * 1e-3 * sum.norm_one() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::NonConvergence(norm));
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    if !sum.is_finite() {
        return Err(LinalgError::NonConvergence(norm));
    }
    Ok(sum)
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let n = m.require_square()?;
    let scale = m.max_abs();
    if scale == 0.0 {
        return Err(LinalgError::Singular);
    }
    let mut a = m.clone();
    let mut inv = ComplexMatrix::identity(n);
    for col in 0..n {
        let pivot =
            (col..n).max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm())).expect("non-empty pivot range");
        if a[(pivot, col)].norm() <= 1e-14 * scale {
            return Err(LinalgError::Singular);
        }
        if pivot != col {
            for c in 0..n {
                a.data.swap(pivot * n + c, col * n + c);
                inv.data.swap(pivot * n + c, col * n + c);
            }
        }
        let p = ONE / a[(col, col)];
        for c in 0..n {
            a[(col, c)] *= p;
            inv[(col, c)] *= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a[(r, col)];
            if factor == ZERO {
                continue;
            }
            for c in 0..n {
                let av = a[(col, c)];
                let iv = inv[(col, c)];
                a[(r, c)] -= factor * av;
                inv[(r, c)] -= factor * iv;
            }
        }
    }
    Ok(inv)
}

/// Accumulates rows of a tall matrix and keeps only its triangular QR
/// factor, so the full matrix never has to be stored.
///
/// The factor has the same singular values and right singular vectors as
/// the matrix of all pushed rows.
pub struct TriangularAccumulator {
    cols: usize,
    factor: Vec<Complex64>,
    factor_rows: usize,
    pending: Vec<Complex64>,
    pending_rows: usize,
}

impl TriangularAccumulator {
    pub fn new(cols: usize) -> Self {
        Self { cols, factor: Vec::new(), factor_rows: 0, pending: Vec::new(), pending_rows: 0 }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn push_row(&mut self, row: &[Complex64]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        if row.iter().all(|z| *z == ZERO) {
            return;
        }
        self.pending.extend_from_slice(row);
        self.pending_rows += 1;
        if self.pending_rows >= self.cols.max(16) {
            self.compress();
        }
    }

    fn compress(&mut self) {
        if self.pending_rows == 0 {
            return;
        }
        let rows = self.factor_rows + self.pending_rows;
        let mut data = std::mem::take(&mut self.factor);
        data.append(&mut self.pending);
        let stacked = ComplexMatrix { rows, cols: self.cols, data };
        let r = householder_triangular(stacked);
        self.factor_rows = r.rows;
        self.factor = r.data;
        self.pending_rows = 0;
    }

    /// Returns the `k x cols` triangular factor with `k <= cols`.
    pub fn finish(mut self) -> ComplexMatrix {
        self.compress();
        ComplexMatrix { rows: self.factor_rows, cols: self.cols, data: self.factor }
    }
}

/// Householder reduction of `a` to upper-triangular form; returns the top
/// `min(rows, cols)` rows of `R`.
fn householder_triangular(mut a: ComplexMatrix) -> ComplexMatrix {
    let (m, n) = (a.rows, a.cols);
    let steps = m.min(n);
    let mut v = vec![ZERO; m];
    for k in 0..steps {
        let norm: f64 = (k..m).map(|r| a[(r, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k, k)];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        for r in k..m {
            v[r] = a[(r, k)];
        }
        v[k] -= alpha;
        let vnorm: f64 = (k..m).map(|r| v[r].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v[k..m].iter_mut().for_each(|z| *z /= vnorm);
        for c in k..n {
            let dot: Complex64 = (k..m).map(|r| v[r].conj() * a[(r, c)]).sum();
            if dot == ZERO {
                continue;
            }
            for r in k..m {
                let vr = v[r];
                a[(r, c)] -= 2.0 * vr * dot;
            }
        }
        for r in k + 1..m {
            a[(r, k)] = ZERO;
        }
    }
    a.block(0, 0, steps, n)
}

/// Singular values with right singular vectors from one-sided Jacobi.
struct JacobiSvd {
    sigma: Vec<f64>,
    /// Columns are right singular vectors, paired with `sigma`.
    v: Vec<Vec<Complex64>>,
}

fn one_sided_jacobi(a: &ComplexMatrix) -> JacobiSvd {
    let (m, n) = (a.rows, a.cols);
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|c| (0..m).map(|r| a[(r, c)]).collect()).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|c| {
            let mut e = vec![ZERO; n];
            e[c] = ONE;
            e
        })
        .collect();
    // Pairs whose coupling sits below this floor are treated as orthogonal.
    let scale: f64 = cols.iter().flatten().map(|z| z.norm_sqr()).sum();
    let floor = f64::EPSILON * f64::EPSILON * scale;

    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= floor || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut cols, p, q, phase, c, s);
                rotate_pair(&mut v, p, q, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma = cols.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    JacobiSvd { sigma, v }
}

/// Applies `x_p <- c x_p - s e^{-iφ} x_q`, `x_q <- s x_p + c e^{-iφ} x_q`.
fn rotate_pair(cols: &mut [Vec<Complex64>], p: usize, q: usize, phase: Complex64, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let xp = &mut left[p];
    let xq = &mut right[0];
    let unphase = phase.conj();
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bq = *b * unphase;
        let ap = *a;
        *a = ap * c - bq * s;
        *b = ap * s + bq * c;
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let reduced = if m.rows > m.cols { householder_triangular(m.clone()) } else { m.clone() };
    let mut sigma = one_sided_jacobi(&reduced).sigma;
    sigma.sort_by(|a, b| b.total_cmp(a));
    sigma.truncate(m.rows.min(m.cols));
    sigma
}

/// Orthonormal basis of the right nullspace of `m`.
///
/// A direction is null when its singular value is at most
/// `tol * sigma_max`.
pub fn nullspace(m: &ComplexMatrix, tol: f64) -> Result<Vec<Vec<Complex64>>, LinalgError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(LinalgError::InvalidTolerance(tol));
    }
    if m.rows > m.cols {
        let mut acc = TriangularAccumulator::new(m.cols);
        for r in 0..m.rows {
            acc.push_row(m.row(r));
        }
        nullspace_of_factor(&acc.finish(), tol)
    } else {
        nullspace_of_factor(m, tol)
    }
}

/// Nullspace of a (typically triangular) factor produced by
/// [`TriangularAccumulator`].
pub fn nullspace_of_factor(r: &ComplexMatrix, tol: f64) -> Result<Vec<Vec<Complex64>>, LinalgError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(LinalgError::InvalidTolerance(tol));
    }
    if r.rows == 0 {
        return Ok(identity_columns(r.cols));
    }
    let svd = one_sided_jacobi(r);
    let sigma_max = svd.sigma.iter().copied().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return Ok(identity_columns(r.cols));
    }
    let cutoff = tol * sigma_max;
    Ok(svd.sigma.iter().zip(svd.v).filter(|(s, _)| **s <= cutoff).map(|(_, v)| v).collect())
}

fn identity_columns(n: usize) -> Vec<Vec<Complex64>> {
    (0..n)
        .map(|c| {
            let mut e = vec![ZERO; n];
            e[c] = ONE;
            e
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pseudo_random(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        ComplexMatrix::from_fn(rows, cols, |_, _| c(next(), next()))
    }

    #[test]
    fn conjugate_of_fixed_points_and_transposes() {
        let id = ComplexMatrix::identity(3);
        assert_eq!(hermitian_conjugate(&id), id);

        let sy = ComplexMatrix::from_vec(2, 2, vec![ZERO, -I, I, ZERO]).unwrap();
        assert_eq!(hermitian_conjugate(&sy), sy);

        let raise = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let lower = ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(hermitian_conjugate(&raise), lower);
    }

    #[test]
    fn split_of_raising_matrix() {
        let raise = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let (h, a) = hermitian_split(&raise).unwrap();
        assert_eq!(h, ComplexMatrix::from_real(2, 2, &[0.0, 0.5, 0.5, 0.0]).unwrap());
        assert_eq!(a, ComplexMatrix::from_real(2, 2, &[0.0, 0.5, -0.5, 0.0]).unwrap());
    }

    #[test]
    fn split_of_hermitian_is_trivial() {
        let h = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(0.5, -2.0), c(0.5, 2.0), c(-3.0, 0.0)]).unwrap();
        let (herm, anti) = hermitian_split(&h).unwrap();
        assert_eq!(herm, h);
        assert!(anti.is_zero());
    }

    #[test]
    fn split_rejects_rectangular() {
        let m = ComplexMatrix::zeros(2, 3);
        assert_eq!(hermitian_split(&m), Err(LinalgError::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn split_random_reconstructs() {
        let a = pseudo_random(3, 3, 7);
        let (h, anti) = hermitian_split(&a).unwrap();
        assert!(h.hermitian_residual() == 0.0);
        assert!((&anti + &anti.adjoint()).max_abs() == 0.0);
        assert!((&h + &anti).max_abs_diff(&a) <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn exp_of_zero_and_diagonal() {
        let z = ComplexMatrix::zeros(3, 3);
        assert_eq!(matrix_exp(&z).unwrap(), ComplexMatrix::identity(3));

        let d = ComplexMatrix::diagonal(&[c(1.5, 0.0), c(-0.25, 0.0)]);
        let e = matrix_exp(&d).unwrap();
        assert!((e[(0, 0)].re - 1.5f64.exp()).abs() < 1e-13);
        assert!((e[(1, 1)].re - (-0.25f64).exp()).abs() < 1e-14);
        assert!(e[(0, 1)].norm() == 0.0 && e[(1, 0)].norm() == 0.0);
    }

    #[test]
    fn exp_of_antihermitian_is_unitary() {
        for seed in 0..5 {
            let a = pseudo_random(5, 5, seed).scale_real(3.0);
            let (_, anti) = hermitian_split(&a).unwrap();
            let u = matrix_exp(&anti).unwrap();
            let residual = (&(&u.adjoint() * &u) - &ComplexMatrix::identity(5)).max_abs();
            assert!(residual < 1e-12, "unitarity residual {residual}");
        }
    }

    #[test]
    fn exp_rejects_bad_input() {
        assert!(matches!(matrix_exp(&ComplexMatrix::zeros(2, 3)), Err(LinalgError::NotSquare { .. })));
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert_eq!(matrix_exp(&m), Err(LinalgError::NonFinite));
        let huge = ComplexMatrix::identity(2).scale_real(1e300);
        assert!(matches!(matrix_exp(&huge), Err(LinalgError::NonConvergence(_))));
    }

    #[test]
    fn inverse_roundtrip_and_singular() {
        let a = pseudo_random(4, 4, 11);
        let inv = inverse(&a).unwrap();
        assert!((&a * &inv).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        let s = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        assert_eq!(inverse(&s), Err(LinalgError::Singular));
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace(&ComplexMatrix::identity(3), 1e-10).unwrap().is_empty());
        assert_eq!(nullspace(&ComplexMatrix::zeros(2, 3), 1e-10).unwrap().len(), 3);

        let row = ComplexMatrix::from_real(1, 3, &[1.0, 1.0, 0.0]).unwrap();
        let null = nullspace(&row, 1e-10).unwrap();
        assert_eq!(null.len(), 2);
        for v in &null {
            assert!(row.mul_vec(v)[0].norm() < 1e-14);
        }
        let dot: Complex64 = null[0].iter().zip(&null[1]).map(|(a, b)| a.conj() * b).sum();
        assert!(dot.norm() < 1e-14);
        assert_eq!(nullspace(&row, 0.0), Err(LinalgError::InvalidTolerance(0.0)));
    }

    #[test]
    fn nullspace_of_tall_rank_deficient_matrix() {
        // 40 x 6 matrix of rank 4 built as a product of random factors.
        let left = pseudo_random(40, 4, 3);
        let right = pseudo_random(4, 6, 5);
        let m = &left * &right;
        let null = nullspace(&m, 1e-10).unwrap();
        assert_eq!(null.len(), 2);
        let sigma = singular_values(&m);
        assert_eq!(sigma.len(), 6);
        for v in &null {
            let mv: f64 = m.mul_vec(v).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(mv <= 1e-10 * sigma[0]);
        }
    }

    #[test]
    fn singular_values_of_diagonal() {
        let d = ComplexMatrix::diagonal(&[c(0.0, 3.0), c(-1.0, 0.0), c(2.0, 0.0)]);
        let s = singular_values(&d);
        assert!((s[0] - 3.0).abs() < 1e-14 && (s[1] - 2.0).abs() < 1e-14 && (s[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kron_index_convention() {
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let k = a.kron(&b);
        // row (i=1, k=0) -> 2, col (j=0, l=1) -> 1
        assert_eq!(k[(2, 1)], c(3.0, 0.0));
        assert_eq!(k[(1, 2)], c(2.0, 0.0));
    }
}
