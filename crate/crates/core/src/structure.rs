//! Structure constants `f` and `d` of a hermitian basis:
//! `[h^μ, h^ν] = i f^{μνσ} h^σ` and `{h^μ, h^ν} = d^{μνσ} h^σ`.

use num_complex::Complex64;

use crate::basis::{anti_rep, BasisKind, HermitianBasis};
use crate::linalg::{ComplexMatrix, I};
use crate::report::VerificationReport;
use crate::{Error, Result};

/// Dense real tensors `f[μ][ν][σ]` and `d[μ][ν][σ]`, 0-based flat indices.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    n: usize,
    dim: usize,
    kind: BasisKind,
    f: Vec<f64>,
    d: Vec<f64>,
}

impl StructureConstants {
    pub fn from_tensors(n: usize, kind: BasisKind, f: Vec<f64>, d: Vec<f64>) -> Result<Self> {
        let dim = n * n;
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if f.len() != dim.pow(3) || d.len() != dim.pow(3) {
            return Err(Error::DimensionMismatch(format!("structure tensors need {} entries", dim.pow(3))));
        }
        Ok(Self { n, dim, kind, f, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn time_index(&self) -> usize {
        self.dim - 1
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn utility_rep(&self) -> bool {
        self.kind == BasisKind::Utility
    }

    #[inline]
    fn offset(&self, mu: usize, nu: usize, sigma: usize) -> usize {
        (mu * self.dim + nu) * self.dim + sigma
    }

    #[inline]
    pub fn f(&self, mu: usize, nu: usize, sigma: usize) -> f64 {
        self.f[self.offset(mu, nu, sigma)]
    }

    #[inline]
    pub fn d(&self, mu: usize, nu: usize, sigma: usize) -> f64 {
        self.d[self.offset(mu, nu, sigma)]
    }

    pub fn f_tensor(&self) -> &[f64] {
        &self.f
    }

    pub fn d_tensor(&self) -> &[f64] {
        &self.d
    }

    /// Adds `delta` to a single entry of `d`. Used for fault injection.
    pub fn perturb_d(&mut self, mu: usize, nu: usize, sigma: usize, delta: f64) {
        let k = self.offset(mu, nu, sigma);
        self.d[k] += delta;
    }
}

/// Structure constants by the trace formulas
/// `f^{μλν} = -2i tr([h^μ, h^λ] h^ν)` and `d^{μλν} = 2 tr({h^μ, h^λ} h^ν)`.
///
/// The formulas are only valid for an orthonormal basis; anything else
/// yields [`Error::NotOrthonormal`] and should go through
/// [`structure_constants_by_expansion`].
pub fn compute_structure_constants(basis: &HermitianBasis, tol: f64) -> Result<StructureConstants> {
    let residual = basis.orthonormality_residual();
    if residual > tol {
        return Err(Error::NotOrthonormal { residual });
    }
    let traced: Vec<ComplexMatrix> = basis.matrices().iter().map(|h| h.scale_real(2.0)).collect();
    extract(basis, &traced, tol)
}

/// Structure constants for any basis, reading coefficients through the
/// basis' Gram dual.
pub fn structure_constants_by_expansion(basis: &HermitianBasis, tol: f64) -> Result<StructureConstants> {
    extract(basis, basis.dual(), tol)
}

fn extract(basis: &HermitianBasis, dual: &[ComplexMatrix], tol: f64) -> Result<StructureConstants> {
    let dim = basis.dim();
    let h = basis.matrices();
    let mut f = vec![0.0; dim.pow(3)];
    let mut d = vec![0.0; dim.pow(3)];
    let mut worst_imag = 0.0f64;
    for mu in 0..dim {
        for nu in 0..dim {
            let comm = h[mu].commutator(&h[nu]);
            let anti = h[mu].anticommutator(&h[nu]);
            for (sigma, dual_sigma) in dual.iter().enumerate() {
                // [h, h] = i f h  =>  f = -i * coefficient
                let fc: Complex64 = -I * comm.trace_product(dual_sigma);
                let dc: Complex64 = anti.trace_product(dual_sigma);
                worst_imag = worst_imag.max(fc.im.abs()).max(dc.im.abs());
                let k = (mu * dim + nu) * dim + sigma;
                f[k] = fc.re;
                d[k] = dc.re;
            }
        }
    }
    if worst_imag > tol {
        return Err(Error::ImaginaryResidue { residual: worst_imag });
    }
    StructureConstants::from_tensors(basis.n(), basis.kind(), f, d)
}

/// `Σ_σ c^{μνσ} h^σ` for one of the two tensors.
fn contract(tensor: impl Fn(usize) -> f64, h: &[ComplexMatrix], scale: Complex64) -> ComplexMatrix {
    let n = h[0].rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (sigma, hs) in h.iter().enumerate() {
        let c = tensor(sigma);
        if c != 0.0 {
            out.add_scaled(scale * c, hs);
        }
    }
    out
}

/// Closure residuals of the commutator and anticommutator expansions,
/// `max_{μν} ‖[h^μ,h^ν] - i f^{μνσ} h^σ‖` and the anticommutator analogue.
///
/// `d_sign` is `+1` for a basis and `-1` for its anti-rep checked against
/// the constants of the original basis.
pub fn closure_residuals(basis: &HermitianBasis, sc: &StructureConstants, d_sign: f64) -> (f64, f64) {
    let h = basis.matrices();
    let dim = basis.dim();
    let mut comm_worst = 0.0f64;
    let mut anti_worst = 0.0f64;
    for mu in 0..dim {
        for nu in 0..dim {
            let comm = h[mu].commutator(&h[nu]);
            let anti = h[mu].anticommutator(&h[nu]);
            let comm_rhs = contract(|s| sc.f(mu, nu, s), h, I);
            let anti_rhs = contract(|s| sc.d(mu, nu, s), h, Complex64::new(d_sign, 0.0));
            comm_worst = comm_worst.max(comm.distance(&comm_rhs));
            anti_worst = anti_worst.max(anti.distance(&anti_rhs));
        }
    }
    (comm_worst, anti_worst)
}

pub fn verify_closure(basis: &HermitianBasis, sc: &StructureConstants, tol: f64) -> VerificationReport {
    let (comm, anti) = closure_residuals(basis, sc, 1.0);
    let mut report = VerificationReport::new();
    report.push("closure.commutator", comm, tol);
    report.push("closure.anticommutator", anti, tol);
    report
}

/// The anti-rep shares `f` and flips the sign of `d`.
pub fn verify_anti_rep_relations(basis: &HermitianBasis, sc: &StructureConstants, tol: f64) -> VerificationReport {
    let anti = anti_rep(basis);
    let (comm, antic) = closure_residuals(&anti, sc, -1.0);
    let mut report = VerificationReport::new();
    report.push("anti_rep.commutator_same_f", comm, tol);
    report.push("anti_rep.anticommutator_minus_d", antic, tol);
    report
}

/// `f^{μtν} = 0` and `d^{μtν} = sqrt(2/N) δ^{μν}`.
pub fn verify_time_index(sc: &StructureConstants, tol: f64) -> VerificationReport {
    let t = sc.time_index();
    let scale = (2.0 / sc.n() as f64).sqrt();
    let mut f_worst = 0.0f64;
    let mut d_worst = 0.0f64;
    for mu in 0..sc.dim() {
        for nu in 0..sc.dim() {
            f_worst = f_worst.max(sc.f(mu, t, nu).abs());
            let target = if mu == nu { scale } else { 0.0 };
            d_worst = d_worst.max((sc.d(mu, t, nu) - target).abs());
        }
    }
    let mut report = VerificationReport::new();
    report.push("time_index.f_vanishes", f_worst, tol);
    report.push("time_index.d_scaled_identity", d_worst, tol);
    report
}

/// Scans every index triple over all six permutations.
///
/// Total (anti)symmetry is only expected in an orthonormal basis;
/// (anti)symmetry in the first index pair holds for any basis.
pub fn verify_symmetries(sc: &StructureConstants, tol: f64) -> VerificationReport {
    let dim = sc.dim();
    let mut f_pair = 0.0f64;
    let mut d_pair = 0.0f64;
    let mut f_total = 0.0f64;
    let mut d_total = 0.0f64;
    let mut f_diag = 0.0f64;
    for a in 0..dim {
        for b in 0..dim {
            f_diag = f_diag.max(sc.f(a, a, b).abs());
            for c in 0..dim {
                let f0 = sc.f(a, b, c);
                let d0 = sc.d(a, b, c);
                f_pair = f_pair.max((f0 + sc.f(b, a, c)).abs());
                d_pair = d_pair.max((d0 - sc.d(b, a, c)).abs());
                // odd permutations flip f, even ones keep it
                let odd = [(b, a, c), (a, c, b), (c, b, a)];
                let even = [(b, c, a), (c, a, b)];
                for &(x, y, z) in &odd {
                    f_total = f_total.max((f0 + sc.f(x, y, z)).abs());
                    d_total = d_total.max((d0 - sc.d(x, y, z)).abs());
                }
                for &(x, y, z) in &even {
                    f_total = f_total.max((f0 - sc.f(x, y, z)).abs());
                    d_total = d_total.max((d0 - sc.d(x, y, z)).abs());
                }
            }
        }
    }
    let mut report = VerificationReport::new();
    report.push("symmetry.f_antisymmetric_first_pair", f_pair, tol);
    report.push("symmetry.d_symmetric_first_pair", d_pair, tol);
    report.push("symmetry.f_vanishes_on_repeated_pair", f_diag, tol);
    report.push("symmetry.f_totally_antisymmetric", f_total, tol);
    report.push("symmetry.d_totally_symmetric", d_total, tol);
    report
}
