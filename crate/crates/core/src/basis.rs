//! Hermitian bases of `N x N` matrices.
//!
//! The utility basis generalizes the Pauli matrices: symmetric and
//! antisymmetric off-diagonal pairs, a traceless diagonal ladder, and the
//! scaled identity as the time element. All members satisfy
//! `2 tr(h^μ h^ν) = δ^{μν}`.
//!
//! Flat ordering is plus pairs, minus pairs, diagonal ladder, time, with
//! `(a, b)` lexicographic inside each family. The time matrix therefore
//! sits at the last flat index.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{inverse, ComplexMatrix, I, ONE};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Plus,
    Minus,
    Diag,
    Time,
}

/// Label `(family, a, b)` of a utility basis matrix, with 1-based `a, b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisLabel {
    pub family: Family,
    pub a: usize,
    pub b: usize,
}

impl BasisLabel {
    pub fn plus(a: usize, b: usize) -> Self {
        Self { family: Family::Plus, a, b }
    }

    pub fn minus(a: usize, b: usize) -> Self {
        Self { family: Family::Minus, a, b }
    }

    pub fn diag(a: usize) -> Self {
        Self { family: Family::Diag, a, b: a }
    }

    pub fn time() -> Self {
        Self { family: Family::Time, a: 1, b: 1 }
    }

    pub fn is_valid_for(&self, n: usize) -> bool {
        match self.family {
            Family::Plus | Family::Minus => 1 <= self.a && self.a < self.b && self.b <= n,
            Family::Diag => self.a == self.b && 2 <= self.a && self.a <= n,
            Family::Time => self.a == 1 && self.b == 1,
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.family {
            Family::Plus => "+",
            Family::Minus => "-",
            Family::Diag | Family::Time => "0",
        };
        write!(f, "{sign},{}{}", self.a, self.b)
    }
}

/// How a basis came about; only orthonormal kinds support trace-based
/// coefficient extraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    Utility,
    /// Negative transpose of the utility basis.
    AntiUtility,
    /// Image of a basis under a real invertible change `R`.
    Transformed,
}

impl BasisKind {
    pub fn is_orthonormal(self) -> bool {
        matches!(self, BasisKind::Utility | BasisKind::AntiUtility)
    }
}

#[derive(Clone, Debug)]
pub struct HermitianBasis {
    n: usize,
    kind: BasisKind,
    matrices: Vec<ComplexMatrix>,
    labels: Vec<BasisLabel>,
    index: HashMap<BasisLabel, usize>,
    /// `dual[μ]` extracts coefficient μ: `β_μ = Re tr(a dual[μ])`.
    dual: Vec<ComplexMatrix>,
}

impl HermitianBasis {
    /// Assembles a basis from parts, checking dimensions and hermiticity.
    pub fn from_parts(
        n: usize,
        kind: BasisKind,
        matrices: Vec<ComplexMatrix>,
        labels: Vec<BasisLabel>,
        tol: f64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if matrices.len() != n * n || labels.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} matrices and labels, got {} and {}",
                n * n,
                matrices.len(),
                labels.len()
            )));
        }
        for m in &matrices {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!("basis matrix is {}x{}", m.rows(), m.cols())));
            }
            let residual = m.hermitian_residual();
            if residual > tol {
                return Err(Error::NotHermitian { residual });
            }
        }
        let index = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let dual = if kind.is_orthonormal() {
            matrices.iter().map(|m| m.scale_real(2.0)).collect()
        } else {
            dual_basis(&matrices)?
        };
        Ok(Self { n, kind, matrices, labels, index, dual })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of basis matrices, `N²`.
    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    pub fn time_index(&self) -> usize {
        self.dim() - 1
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn is_utility(&self) -> bool {
        self.kind == BasisKind::Utility
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn flat_index_of(&self, label: &BasisLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn dual(&self) -> &[ComplexMatrix] {
        &self.dual
    }

    /// `max |2 tr(h^μ h^ν) - δ^{μν}|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (mu, a) in self.matrices.iter().enumerate() {
            for (nu, b) in self.matrices.iter().enumerate() {
                let target = if mu == nu { 1.0 } else { 0.0 };
                worst = worst.max((2.0 * a.trace_product(b) - target).norm());
            }
        }
        worst
    }

    /// `Σ β_σ h^σ`.
    pub fn combine(&self, coefficients: &[f64]) -> ComplexMatrix {
        assert_eq!(coefficients.len(), self.dim());
        let mut out = ComplexMatrix::zeros(self.n, self.n);
        for (beta, h) in coefficients.iter().zip(&self.matrices) {
            if *beta != 0.0 {
                out.add_scaled(Complex64::new(*beta, 0.0), h);
            }
        }
        out
    }
}

impl PartialEq for HermitianBasis {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.kind == other.kind && self.matrices == other.matrices && self.labels == other.labels
    }
}

/// Dual matrices from the inverse Gram matrix of the Frobenius pairing.
fn dual_basis(matrices: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let dim = matrices.len();
    let gram = ComplexMatrix::from_fn(dim, dim, |a, b| matrices[a].trace_product(&matrices[b]));
    let gram_inv = inverse(&gram).map_err(|_| Error::SingularBasisChange)?;
    let n = matrices[0].rows();
    Ok((0..dim)
        .map(|mu| {
            let mut d = ComplexMatrix::zeros(n, n);
            for (nu, h) in matrices.iter().enumerate() {
                d.add_scaled(gram_inv[(mu, nu)], h);
            }
            d
        })
        .collect())
}

fn unit(n: usize, a: usize, b: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    m[(a, b)] = ONE;
    m
}

/// Ordered labels of the utility basis for dimension `n`.
pub fn utility_labels(n: usize) -> Vec<BasisLabel> {
    let mut labels = Vec::with_capacity(n * n);
    for a in 1..=n {
        for b in a + 1..=n {
            labels.push(BasisLabel::plus(a, b));
        }
    }
    for a in 1..=n {
        for b in a + 1..=n {
            labels.push(BasisLabel::minus(a, b));
        }
    }
    for a in 2..=n {
        labels.push(BasisLabel::diag(a));
    }
    labels.push(BasisLabel::time());
    labels
}

fn utility_matrix(n: usize, label: &BasisLabel) -> ComplexMatrix {
    let (a, b) = (label.a - 1, label.b - 1);
    match label.family {
        Family::Plus => (&unit(n, a, b) + &unit(n, b, a)).scale_real(0.5),
        Family::Minus => (&unit(n, a, b) - &unit(n, b, a)).scale(-0.5 * I),
        Family::Diag => {
            let k = label.a as f64;
            let norm = 1.0 / (2.0 * (k * k - k)).sqrt();
            let mut m = ComplexMatrix::zeros(n, n);
            for i in 0..a {
                m[(i, i)] = Complex64::new(norm, 0.0);
            }
            m[(a, a)] = Complex64::new(-(k - 1.0) * norm, 0.0);
            m
        }
        Family::Time => ComplexMatrix::identity(n).scale_real(1.0 / (2.0 * n as f64).sqrt()),
    }
}

pub fn build_utility_basis(n: usize) -> Result<HermitianBasis> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let labels = utility_labels(n);
    let matrices = labels.iter().map(|l| utility_matrix(n, l)).collect();
    HermitianBasis::from_parts(n, BasisKind::Utility, matrices, labels, 0.0)
}

/// Negative transpose of every basis matrix, same ordering.
pub fn anti_rep(basis: &HermitianBasis) -> HermitianBasis {
    let kind = match basis.kind {
        BasisKind::Utility => BasisKind::AntiUtility,
        BasisKind::AntiUtility => BasisKind::Utility,
        BasisKind::Transformed => BasisKind::Transformed,
    };
    let matrices: Vec<_> = basis.matrices.iter().map(|m| -&m.transpose()).collect();
    let dual = basis.dual.iter().map(|m| -&m.transpose()).collect();
    HermitianBasis { n: basis.n, kind, matrices, labels: basis.labels.clone(), index: basis.index.clone(), dual }
}

/// Real coefficients `β` with `a = Σ β_σ h^σ`.
///
/// Fails when the coefficients carry an imaginary part above `tol`, which
/// happens exactly when `a` is not hermitian.
pub fn expand_in_basis(a: &ComplexMatrix, basis: &HermitianBasis, tol: f64) -> Result<Vec<f64>> {
    let coefficients = complex_coefficients(a, basis)?;
    let residual = coefficients.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residual > tol {
        return Err(Error::NotHermitian { residual });
    }
    Ok(coefficients.iter().map(|z| z.re).collect())
}

/// Complex coefficients of an arbitrary `N x N` matrix in the basis.
pub fn complex_coefficients(a: &ComplexMatrix, basis: &HermitianBasis) -> Result<Vec<Complex64>> {
    if a.rows() != basis.n || a.cols() != basis.n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix against a basis of dimension {}",
            a.rows(),
            a.cols(),
            basis.n
        )));
    }
    Ok(basis.dual.iter().map(|d| a.trace_product(d)).collect())
}

/// Real invertible `N² x N²` change of basis `h'^μ = R^μ_σ h^σ`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisChange {
    dim: usize,
    r: Vec<f64>,
    r_inverse: Vec<f64>,
}

impl BasisChange {
    pub fn new(dim: usize, r: Vec<f64>) -> Result<Self> {
        if r.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!("{} entries for a {dim}x{dim} matrix", r.len())));
        }
        let m = ComplexMatrix::from_real(dim, dim, &r)?;
        let inv = inverse(&m).map_err(|_| Error::SingularBasisChange)?;
        if (&m * &inv).max_abs_diff(&ComplexMatrix::identity(dim)) > 1e-12 * m.max_abs().max(1.0) * dim as f64 {
            return Err(Error::SingularBasisChange);
        }
        let r_inverse = inv.as_slice().iter().map(|z| z.re).collect();
        Ok(Self { dim, r, r_inverse })
    }

    pub fn identity(dim: usize) -> Self {
        let mut r = vec![0.0; dim * dim];
        for i in 0..dim {
            r[i * dim + i] = 1.0;
        }
        Self { dim, r: r.clone(), r_inverse: r }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn r(&self, row: usize, col: usize) -> f64 {
        self.r[row * self.dim + col]
    }

    pub fn r_inverse(&self, row: usize, col: usize) -> f64 {
        self.r_inverse[row * self.dim + col]
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real(self.dim, self.dim, &self.r).expect("square by construction")
    }

    pub fn inverse_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real(self.dim, self.dim, &self.r_inverse).expect("square by construction")
    }
}

/// `h'^μ = Σ_σ R^μ_σ h^σ`. The result is flagged [`BasisKind::Transformed`]
/// even when `R` happens to be orthogonal.
pub fn apply_basis_change(basis: &HermitianBasis, change: &BasisChange) -> Result<HermitianBasis> {
    if change.dim() != basis.dim() {
        return Err(Error::DimensionMismatch(format!(
            "basis change of size {} for a basis of {} matrices",
            change.dim(),
            basis.dim()
        )));
    }
    let n = basis.n;
    let matrices = (0..basis.dim())
        .map(|mu| {
            let mut m = ComplexMatrix::zeros(n, n);
            for (sigma, h) in basis.matrices.iter().enumerate() {
                let coeff = change.r(mu, sigma);
                if coeff != 0.0 {
                    m.add_scaled(Complex64::new(coeff, 0.0), h);
                }
            }
            m
        })
        .collect();
    HermitianBasis::from_parts(n, BasisKind::Transformed, matrices, basis.labels.clone(), 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;

    fn pauli(k: usize) -> ComplexMatrix {
        let data = match k {
            1 => vec![ZERO, ONE, ONE, ZERO],
            2 => vec![ZERO, -I, I, ZERO],
            3 => vec![ONE, ZERO, ZERO, -ONE],
            _ => vec![ONE, ZERO, ZERO, ONE],
        };
        ComplexMatrix::from_vec(2, 2, data).unwrap()
    }

    #[test]
    fn n2_is_half_pauli() {
        let b = build_utility_basis(2).unwrap();
        for k in 0..4 {
            assert_eq!(b.matrices()[k], pauli(k + 1).scale_real(0.5), "position {}", k + 1);
        }
        assert_eq!(b.labels()[2], BasisLabel::diag(2));
        assert_eq!(b.labels()[3], BasisLabel::time());
    }

    #[test]
    fn n1_is_single_scaled_one() {
        let b = build_utility_basis(1).unwrap();
        assert_eq!(b.dim(), 1);
        assert!((b.matrices()[0][(0, 0)].re - 1.0 / 2f64.sqrt()).abs() < 1e-16);
    }

    #[test]
    fn n3_time_and_last_diagonal() {
        let b = build_utility_basis(3).unwrap();
        let t = &b.matrices()[8];
        assert!(t.max_abs_diff(&ComplexMatrix::identity(3).scale_real(1.0 / 6f64.sqrt())) < 1e-16);
        let d33 = &b.matrices()[b.flat_index_of(&BasisLabel::diag(3)).unwrap()];
        let expected = ComplexMatrix::diagonal(&[ONE, ONE, -2.0 * ONE]).scale_real(1.0 / 12f64.sqrt());
        assert!(d33.max_abs_diff(&expected) < 1e-16);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(build_utility_basis(0), Err(Error::ZeroDimension)));
    }

    #[test]
    fn label_validity() {
        assert!(BasisLabel::plus(1, 2).is_valid_for(2));
        assert!(!BasisLabel::plus(2, 2).is_valid_for(3));
        assert!(!BasisLabel::diag(1).is_valid_for(3));
        assert!(BasisLabel::diag(3).is_valid_for(3));
        for n in 1..=5 {
            assert!(utility_labels(n).iter().all(|l| l.is_valid_for(n)));
        }
    }

    #[test]
    fn anti_rep_signs_n2() {
        let b = build_utility_basis(2).unwrap();
        let a = anti_rep(&b);
        assert_eq!(a.matrices()[0], pauli(1).scale_real(-0.5));
        assert_eq!(a.matrices()[1], pauli(2).scale_real(0.5));
        assert_eq!(a.kind(), BasisKind::AntiUtility);
        assert_eq!(anti_rep(&a), b);
    }

    #[test]
    fn expansion_examples() {
        let b = build_utility_basis(2).unwrap();
        let c = expand_in_basis(&b.matrices()[2], &b, 1e-12).unwrap();
        assert_eq!(c, vec![0.0, 0.0, 1.0, 0.0]);
        let c = expand_in_basis(&ComplexMatrix::identity(2), &b, 1e-12).unwrap();
        assert!((c[3] - 2.0).abs() < 1e-15 && c[..3].iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn expansion_rejects_non_hermitian() {
        let b = build_utility_basis(2).unwrap();
        let raise = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(expand_in_basis(&raise, &b, 1e-12), Err(Error::NotHermitian { .. })));
        let big = ComplexMatrix::identity(3);
        assert!(matches!(expand_in_basis(&big, &b, 1e-12), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn identity_change_keeps_matrices() {
        let b = build_utility_basis(3).unwrap();
        let primed = apply_basis_change(&b, &BasisChange::identity(9)).unwrap();
        assert_eq!(primed.matrices(), b.matrices());
        assert_eq!(primed.kind(), BasisKind::Transformed);
    }

    #[test]
    fn swap_change_exchanges_x_and_y() {
        let b = build_utility_basis(2).unwrap();
        let r = vec![0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 0., 0., 1.];
        let primed = apply_basis_change(&b, &BasisChange::new(4, r).unwrap()).unwrap();
        assert_eq!(primed.matrices()[0], b.matrices()[1]);
        assert_eq!(primed.matrices()[1], b.matrices()[0]);
        // the transformed basis still expands through its Gram dual
        let c = expand_in_basis(&b.matrices()[0], &primed, 1e-12).unwrap();
        assert!((c[1] - 1.0).abs() < 1e-14 && c[0].abs() < 1e-14);
    }

    #[test]
    fn singular_change_rejected() {
        assert!(matches!(BasisChange::new(2, vec![1.0, 2.0, 2.0, 4.0]), Err(Error::SingularBasisChange)));
        assert!(matches!(BasisChange::new(2, vec![1.0]), Err(Error::DimensionMismatch(_))));
    }
}
