//! Combined reps `(A,B)`, the similarity map between the `N²`-rep and
//! `(N,N̄)`, and the momentum matrices of `(A,B) ⊕ (C,D)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{build_n2_generators, commuting_residual, family_residual, lorentz_weyl_report};
use crate::basis::{anti_rep, apply_basis_change, BasisChange, HermitianBasis};
use crate::linalg::{
    inverse, nullspace_of_factor, singular_values, ComplexMatrix, TriangularAccumulator, I, ONE, ZERO,
};
use crate::report::VerificationReport;
use crate::sign::Sign;
use crate::structure::{structure_constants_by_expansion, StructureConstants};
use crate::{Error, Result};

/// Building blocks for `A`, `B`, `C`, `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepKind {
    Trivial,
    Fund,
    Antifund,
    /// Symmetric part of `N ⊗ N`.
    Sym2,
    /// Antisymmetric part of `N ⊗ N`.
    Antisym2,
    Sym2bar,
    Antisym2bar,
    /// Full `N ⊗ N`, reducible.
    Fund2,
    Antifund2,
}

impl RepKind {
    pub const ALL: [RepKind; 9] = [
        RepKind::Trivial,
        RepKind::Fund,
        RepKind::Antifund,
        RepKind::Sym2,
        RepKind::Antisym2,
        RepKind::Sym2bar,
        RepKind::Antisym2bar,
        RepKind::Fund2,
        RepKind::Antifund2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RepKind::Trivial => "trivial",
            RepKind::Fund => "fund",
            RepKind::Antifund => "antifund",
            RepKind::Sym2 => "sym2",
            RepKind::Antisym2 => "antisym2",
            RepKind::Sym2bar => "sym2bar",
            RepKind::Antisym2bar => "antisym2bar",
            RepKind::Fund2 => "fund2",
            RepKind::Antifund2 => "antifund2",
        }
    }

    pub fn dim(self, n: usize) -> usize {
        match self {
            RepKind::Trivial => 1,
            RepKind::Fund | RepKind::Antifund => n,
            RepKind::Sym2 | RepKind::Sym2bar => n * (n + 1) / 2,
            RepKind::Antisym2 | RepKind::Antisym2bar => n * (n - 1) / 2,
            RepKind::Fund2 | RepKind::Antifund2 => n * n,
        }
    }

    pub fn is_irreducible(self) -> bool {
        !matches!(self, RepKind::Fund2 | RepKind::Antifund2)
    }

    /// Generator matrices `a^μ` with `[a^μ, a^ν] = i f^{μνσ} a^σ`.
    pub fn generators(self, basis: &HermitianBasis) -> Result<Vec<ComplexMatrix>> {
        let n = basis.n();
        if self.dim(n) == 0 {
            return Err(Error::InvalidRepresentation(format!("{} is empty for N = {n}", self.name())));
        }
        let fund = || basis.matrices().to_vec();
        let anti = || anti_rep(basis).matrices().to_vec();
        let square = |g: Vec<ComplexMatrix>| -> Vec<ComplexMatrix> {
            let id = ComplexMatrix::identity(n);
            g.iter().map(|m| &m.kron(&id) + &id.kron(m)).collect()
        };
        let project = |g: Vec<ComplexMatrix>, symmetric: bool| -> Vec<ComplexMatrix> {
            let q = symmetrizer(n, symmetric);
            let qa = q.adjoint();
            g.iter().map(|m| &(&qa * m) * &q).collect()
        };
        Ok(match self {
            RepKind::Trivial => vec![ComplexMatrix::zeros(1, 1); basis.dim()],
            RepKind::Fund => fund(),
            RepKind::Antifund => anti(),
            RepKind::Fund2 => square(fund()),
            RepKind::Antifund2 => square(anti()),
            RepKind::Sym2 => project(square(fund()), true),
            RepKind::Antisym2 => project(square(fund()), false),
            RepKind::Sym2bar => project(square(anti()), true),
            RepKind::Antisym2bar => project(square(anti()), false),
        })
    }
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RepKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::InvalidRepresentation(format!("unknown rep '{s}'")))
    }
}

/// Orthonormal columns spanning the (anti)symmetric subspace of `C^N ⊗ C^N`.
fn symmetrizer(n: usize, symmetric: bool) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for a in 0..n {
        for b in a..n {
            let mut v = vec![ZERO; n * n];
            if a == b {
                if !symmetric {
                    continue;
                }
                v[a * n + a] = ONE;
            } else {
                v[a * n + b] = Complex64::new(s, 0.0);
                v[b * n + a] = Complex64::new(if symmetric { s } else { -s }, 0.0);
            }
            cols.push(v);
        }
    }
    ComplexMatrix::from_fn(n * n, cols.len(), |r, c| cols[c][r])
}

/// `J_(A,B) = J_A ⊗ 1 + 1 ⊗ J_B` and `K_(A,B) = -i (J_A ⊗ 1 - 1 ⊗ J_B)`,
/// with `r = dim_b · a + b`.
#[derive(Clone, Debug)]
pub struct CombinedRep {
    pub dim_a: usize,
    pub dim_b: usize,
    pub j: Vec<ComplexMatrix>,
    pub k: Vec<ComplexMatrix>,
}

impl CombinedRep {
    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    /// The rep built from two catalog entries.
    pub fn from_kinds(
        a: RepKind,
        b: RepKind,
        basis: &HermitianBasis,
        sc: &StructureConstants,
        tol: f64,
    ) -> Result<Self> {
        combine_reps(&a.generators(basis)?, &b.generators(basis)?, sc, tol)
    }
}

/// Checks each input against the fundamental commutators within `tol`.
pub fn combine_reps(
    ja: &[ComplexMatrix],
    jb: &[ComplexMatrix],
    sc: &StructureConstants,
    tol: f64,
) -> Result<CombinedRep> {
    if ja.len() != sc.dim() || jb.len() != sc.dim() {
        return Err(Error::DimensionMismatch(format!(
            "reps carry {} and {} generators, expected {}",
            ja.len(),
            jb.len(),
            sc.dim()
        )));
    }
    let f = |a: usize, b: usize, c: usize| sc.f(a, b, c);
    for (name, g) in [("A", ja), ("B", jb)] {
        let residual = family_residual(g, g, g, I, f);
        if residual.is_nan() || residual > tol {
            return Err(Error::InvalidRepresentation(format!(
                "{name} fails the fundamental commutators (residual {residual:e})"
            )));
        }
    }
    let dim_a = ja[0].rows();
    let dim_b = jb[0].rows();
    let ia = ComplexMatrix::identity(dim_a);
    let ib = ComplexMatrix::identity(dim_b);
    let mut j = Vec::with_capacity(ja.len());
    let mut k = Vec::with_capacity(ja.len());
    for (a, b) in ja.iter().zip(jb) {
        let left = a.kron(&ib);
        let right = ia.kron(b);
        j.push(&left + &right);
        k.push((&left - &right).scale(-I));
    }
    Ok(CombinedRep { dim_a, dim_b, j, k })
}

pub fn verify_combined_rep(rep: &CombinedRep, sc: &StructureConstants, tol: f64) -> VerificationReport {
    lorentz_weyl_report("combined_rep", &rep.j, &rep.k, sc, tol)
}

/// `S_{λσ} = h^σ_{mn}` with `λ = N m + n`.
#[derive(Clone, Debug)]
pub struct SimilarityMap {
    pub n: usize,
    pub s: ComplexMatrix,
    pub s_inverse: ComplexMatrix,
}

impl SimilarityMap {
    fn from_matrix(n: usize, s: ComplexMatrix) -> Result<Self> {
        let s_inverse = inverse(&s).map_err(|_| Error::SingularSimilarity)?;
        if (&s * &s_inverse).max_abs_diff(&ComplexMatrix::identity(s.rows())) > 1e-12 {
            return Err(Error::SingularSimilarity);
        }
        Ok(Self { n, s, s_inverse })
    }

    /// `S` for `ε = +1`; `Π S` for `ε = -1`, where `Π` swaps the two
    /// tensor factors. The latter maps the `N²`-rep onto `(N̄,N)`.
    pub fn for_sign(&self, eps: Sign) -> SimilarityMap {
        match eps {
            Sign::Plus => self.clone(),
            Sign::Minus => {
                let swap = tensor_swap(self.n);
                SimilarityMap { n: self.n, s: &swap * &self.s, s_inverse: &self.s_inverse * &swap }
            }
        }
    }
}

fn tensor_swap(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n * n, n * n, |r, c| if r == (c % n) * n + c / n { ONE } else { ZERO })
}

pub fn build_similarity(basis: &HermitianBasis) -> Result<SimilarityMap> {
    let n = basis.n();
    let h = basis.matrices();
    let s = ComplexMatrix::from_fn(n * n, n * n, |lambda, sigma| h[sigma][(lambda / n, lambda % n)]);
    SimilarityMap::from_matrix(n, s)
}

/// Residuals of `S j = Σ(h ⊗ 1 + 1 ⊗ h̄) S` and
/// `S k = -ε i (h ⊗ 1 - 1 ⊗ h̄) S` over all generators.
fn similarity_residuals(
    s: &ComplexMatrix,
    basis: &HermitianBasis,
    j: &[ComplexMatrix],
    k: &[ComplexMatrix],
    eps: Sign,
) -> (f64, f64) {
    let n = basis.n();
    let id = ComplexMatrix::identity(n);
    let bar = anti_rep(basis);
    let scale = Complex64::new(0.0, -eps.value());
    let mut j_worst = 0.0f64;
    let mut k_worst = 0.0f64;
    for (mu, (h, hb)) in basis.matrices().iter().zip(bar.matrices()).enumerate() {
        let left = h.kron(&id);
        let right = id.kron(hb);
        let sum = &(&left + &right) * s;
        let diff = &(&left - &right).scale(scale) * s;
        j_worst = j_worst.max((s * &j[mu]).distance(&sum));
        k_worst = k_worst.max((s * &k[mu]).distance(&diff));
    }
    (j_worst, k_worst)
}

pub fn verify_similarity(
    sim: &SimilarityMap,
    basis: &HermitianBasis,
    sc: &StructureConstants,
    eps: Sign,
    tol: f64,
) -> VerificationReport {
    let g = build_n2_generators(sc, eps);
    let (j, k) = similarity_residuals(&sim.s, basis, &g.j, &g.k, eps);
    let mut report = VerificationReport::new();
    report.push("similarity.Sj=(h+hbar)S", j, tol);
    report.push("similarity.Sk=-eps_i(h-hbar)S", k, tol);
    report
}

/// `S_ε j S_ε⁻¹` and `S_ε k S_ε⁻¹` against the Kronecker forms of
/// `(N,N̄)` for `ε = +1` and `(N̄,N)` for `ε = -1`.
pub fn verify_kronecker_form(
    basis: &HermitianBasis,
    sc: &StructureConstants,
    eps: Sign,
    tol: f64,
) -> Result<VerificationReport> {
    let sim = build_similarity(basis)?.for_sign(eps);
    let g = build_n2_generators(sc, eps);
    let fund = basis.matrices().to_vec();
    let anti = anti_rep(basis).matrices().to_vec();
    let rep = match eps {
        Sign::Plus => combine_reps(&fund, &anti, sc, 1e-10)?,
        Sign::Minus => combine_reps(&anti, &fund, sc, 1e-10)?,
    };
    let mut j_worst = 0.0f64;
    let mut k_worst = 0.0f64;
    for mu in 0..g.dim() {
        let jc = &(&sim.s * &g.j[mu]) * &sim.s_inverse;
        let kc = &(&sim.s * &g.k[mu]) * &sim.s_inverse;
        j_worst = j_worst.max(jc.max_abs_diff(&rep.j[mu]));
        k_worst = k_worst.max(kc.max_abs_diff(&rep.k[mu]));
    }
    let mut report = VerificationReport::new();
    report.push("kronecker_form.j", j_worst, tol);
    report.push("kronecker_form.k", k_worst, tol);
    Ok(report)
}

/// Primed constants by `f' = R R f R⁻¹` against expansion in the primed
/// basis, the primed generator pattern `j'^λ = R_{λρ} R j^ρ R⁻¹`, and the
/// similarity identities for `S' = S R⁻¹`.
pub fn basis_change_covariance(
    basis: &HermitianBasis,
    change: &BasisChange,
    eps: Sign,
    tol: f64,
) -> Result<VerificationReport> {
    let dim = basis.dim();
    let sc = structure_constants_by_expansion(basis, 1e-10)?;
    let primed = apply_basis_change(basis, change)?;
    let sc_primed = structure_constants_by_expansion(&primed, 1e-10 * condition_scale(change))?;

    // f'^{μνλ} = R_{μσ} R_{νρ} f^{σρτ} (R⁻¹)_{τλ}, one index at a time
    let transform = |t: &[f64]| -> Vec<f64> {
        let idx = |a: usize, b: usize, c: usize| (a * dim + b) * dim + c;
        let mut s1 = vec![0.0; dim.pow(3)];
        for mu in 0..dim {
            for sigma in 0..dim {
                let r = change.r(mu, sigma);
                if r == 0.0 {
                    continue;
                }
                for rho in 0..dim {
                    for tau in 0..dim {
                        s1[idx(mu, rho, tau)] += r * t[idx(sigma, rho, tau)];
                    }
                }
            }
        }
        let mut s2 = vec![0.0; dim.pow(3)];
        for mu in 0..dim {
            for nu in 0..dim {
                for rho in 0..dim {
                    let r = change.r(nu, rho);
                    if r == 0.0 {
                        continue;
                    }
                    for tau in 0..dim {
                        s2[idx(mu, nu, tau)] += r * s1[idx(mu, rho, tau)];
                    }
                }
            }
        }
        let mut s3 = vec![0.0; dim.pow(3)];
        for mu in 0..dim {
            for nu in 0..dim {
                for tau in 0..dim {
                    let v = s2[idx(mu, nu, tau)];
                    for lambda in 0..dim {
                        s3[idx(mu, nu, lambda)] += v * change.r_inverse(tau, lambda);
                    }
                }
            }
        }
        s3
    };
    let f_formula = transform(sc.f_tensor());
    let d_formula = transform(sc.d_tensor());
    let max_diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);

    let g = build_n2_generators(&sc, eps);
    let g_primed = build_n2_generators(&sc_primed, eps);
    let r = change.matrix();
    let r_inv = change.inverse_matrix();
    let mut pattern = 0.0f64;
    for lambda in 0..dim {
        let mut jl = ComplexMatrix::zeros(dim, dim);
        let mut kl = ComplexMatrix::zeros(dim, dim);
        for rho in 0..dim {
            let c = Complex64::new(change.r(lambda, rho), 0.0);
            jl.add_scaled(c, &(&(&r * &g.j[rho]) * &r_inv));
            kl.add_scaled(c, &(&(&r * &g.k[rho]) * &r_inv));
        }
        pattern = pattern.max(jl.max_abs_diff(&g_primed.j[lambda])).max(kl.max_abs_diff(&g_primed.k[lambda]));
    }

    let sim = build_similarity(basis)?;
    let s_primed = &sim.s * &r_inv;
    let (sj, sk) = similarity_residuals(&s_primed, &primed, &g_primed.j, &g_primed.k, eps);

    let mut report = VerificationReport::new();
    report.push("basis_change.f_formula_vs_expansion", max_diff(&f_formula, sc_primed.f_tensor()), tol);
    report.push("basis_change.d_formula_vs_expansion", max_diff(&d_formula, sc_primed.d_tensor()), tol);
    report.push("basis_change.primed_generator_pattern", pattern, tol);
    report.push("basis_change.S'j'=(h'+hbar')S'", sj, tol);
    report.push("basis_change.S'k'=-eps_i(h'-hbar')S'", sk, tol);
    report.extend(lorentz_weyl_report("basis_change.lorentz_weyl", &g_primed.j, &g_primed.k, &sc_primed, tol));
    Ok(report)
}

/// Rough growth factor of round-off under `R`, used to loosen the
/// imaginary-residue guard on badly conditioned changes.
fn condition_scale(change: &BasisChange) -> f64 {
    let m = change.matrix().max_abs().max(1.0);
    let mi = change.inverse_matrix().max_abs().max(1.0);
    (m * m * mi).max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockSide {
    /// `P = [[0, X], [0, 0]]`, mapping `(C,D)` into `(A,B)`.
    Upper,
    /// `P = [[0, 0], [X, 0]]`, mapping `(A,B)` into `(C,D)`.
    Lower,
}

impl BlockSide {
    /// The side carrying the `2N`-rep momentum for sign `eps`.
    pub fn default_for(eps: Sign) -> Self {
        match eps {
            Sign::Plus => BlockSide::Upper,
            Sign::Minus => BlockSide::Lower,
        }
    }
}

impl fmt::Display for BlockSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockSide::Upper => "upper",
            BlockSide::Lower => "lower",
        })
    }
}

impl FromStr for BlockSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "upper" => Ok(BlockSide::Upper),
            "lower" => Ok(BlockSide::Lower),
            other => Err(Error::InvalidParams(format!("unknown block side '{other}'"))),
        }
    }
}

/// Orthonormal basis of momentum families on `(A,B) ⊕ (C,D)`.
///
/// `solutions[k][μ]` is the full square matrix `P^μ` of the `k`-th basis
/// vector; `blocks[k][μ]` is its nonzero off-diagonal block.
#[derive(Clone, Debug)]
pub struct MomentumSolution {
    pub n: usize,
    pub eps: Sign,
    pub side: BlockSide,
    /// `[dim_a, dim_b, dim_c, dim_d]`.
    pub dims: [usize; 4],
    pub blocks: Vec<Vec<ComplexMatrix>>,
    pub solutions: Vec<Vec<ComplexMatrix>>,
}

impl MomentumSolution {
    pub fn basis_dim(&self) -> usize {
        self.solutions.len()
    }

    pub fn dim_ab(&self) -> usize {
        self.dims[0] * self.dims[1]
    }

    pub fn dim_cd(&self) -> usize {
        self.dims[2] * self.dims[3]
    }

    fn block_shape(&self) -> (usize, usize) {
        match self.side {
            BlockSide::Upper => (self.dim_ab(), self.dim_cd()),
            BlockSide::Lower => (self.dim_cd(), self.dim_ab()),
        }
    }

    /// Relative distance of a target family from the solution span.
    /// `target[μ]` is either the full `P^μ` or just its nonzero block.
    pub fn projection_residual(&self, target: &[ComplexMatrix]) -> f64 {
        let (r, c) = self.block_shape();
        let flat: Vec<Complex64> = target
            .iter()
            .flat_map(|m| {
                let b = if m.rows() == r && m.cols() == c { m.clone() } else { extract_block(m, self.side, r, c) };
                b.into_vec()
            })
            .collect();
        let norm: f64 = flat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let mut rest = flat.clone();
        for blocks in &self.blocks {
            let v: Vec<Complex64> = blocks.iter().flat_map(|m| m.as_slice().to_vec()).collect();
            let overlap: Complex64 = v.iter().zip(&flat).map(|(a, b)| a.conj() * b).sum();
            for (x, a) in rest.iter_mut().zip(&v) {
                *x -= overlap * a;
            }
        }
        rest.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / norm
    }
}

fn extract_block(m: &ComplexMatrix, side: BlockSide, r: usize, c: usize) -> ComplexMatrix {
    match side {
        BlockSide::Upper => m.block(0, c, r, c),
        BlockSide::Lower => m.block(c, 0, r, c),
    }
}

/// Solves `[P^μ, J^ν] = i f^{μνσ} P^σ` and `[P^μ, K^ν] = -ε i d^{μνσ} P^σ`
/// on `(A,B) ⊕ (C,D)` for all `P^μ` at once, restricted to one side.
///
/// Each basis vector is normalized to unit total Frobenius norm and its
/// largest entry is made real and positive.
pub fn solve_momentum(
    ab: &CombinedRep,
    cd: &CombinedRep,
    sc: &StructureConstants,
    eps: Sign,
    side: BlockSide,
    tol: f64,
) -> Result<MomentumSolution> {
    let m = sc.dim();
    if ab.j.len() != m || cd.j.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "reps carry {} and {} generators, expected {m}",
            ab.j.len(),
            cd.j.len()
        )));
    }
    let (left_j, left_k, right_j, right_k) = match side {
        BlockSide::Upper => (&ab.j, &ab.k, &cd.j, &cd.k),
        BlockSide::Lower => (&cd.j, &cd.k, &ab.j, &ab.k),
    };
    let r = left_j[0].rows();
    let c = right_j[0].rows();
    let unknowns = m * r * c;
    let col = |sigma: usize, p: usize, q: usize| (sigma * r + p) * c + q;
    let minus_eps_i = Complex64::new(0.0, -eps.value());

    let mut acc = TriangularAccumulator::new(unknowns);
    let mut row = vec![ZERO; unknowns];
    for nu in 0..m {
        for (rmat, lmat, coeff, tensor) in
            [(&right_j[nu], &left_j[nu], I, true), (&right_k[nu], &left_k[nu], minus_eps_i, false)]
        {
            for mu in 0..m {
                for p in 0..r {
                    for q in 0..c {
                        row.iter_mut().for_each(|z| *z = ZERO);
                        // (X^μ R)_{pq} - (L X^μ)_{pq} - coeff t^{μνσ} X^σ_{pq}
                        for s in 0..c {
                            row[col(mu, p, s)] += rmat[(s, q)];
                        }
                        for s in 0..r {
                            row[col(mu, s, q)] -= lmat[(p, s)];
                        }
                        for sigma in 0..m {
                            let t = if tensor { sc.f(mu, nu, sigma) } else { sc.d(mu, nu, sigma) };
                            if t != 0.0 {
                                row[col(sigma, p, q)] -= coeff * t;
                            }
                        }
                        if row.iter().any(|z| *z != ZERO) {
                            acc.push_row(&row);
                        }
                    }
                }
            }
        }
    }
    let null = nullspace_of_factor(&acc.finish(), tol)?;

    let total = ab.dim() + cd.dim();
    let mut blocks = Vec::with_capacity(null.len());
    let mut solutions = Vec::with_capacity(null.len());
    for mut v in null {
        fix_phase(&mut v);
        let xs: Vec<ComplexMatrix> =
            (0..m).map(|sigma| ComplexMatrix::from_fn(r, c, |p, q| v[col(sigma, p, q)])).collect();
        let ps = xs
            .iter()
            .map(|x| {
                let mut full = ComplexMatrix::zeros(total, total);
                match side {
                    BlockSide::Upper => full.set_block(0, ab.dim(), x),
                    BlockSide::Lower => full.set_block(ab.dim(), 0, x),
                }
                full
            })
            .collect();
        blocks.push(xs);
        solutions.push(ps);
    }
    Ok(MomentumSolution { n: sc.n(), eps, side, dims: [ab.dim_a, ab.dim_b, cd.dim_a, cd.dim_b], blocks, solutions })
}

/// Unit norm, largest entry real and positive. Near-ties go to the first
/// such entry in flat order so the phase does not depend on round-off.
fn fix_phase(v: &mut [Complex64]) {
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let largest = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if largest == 0.0 || norm == 0.0 {
        return;
    }
    let pivot = *v.iter().find(|z| z.norm() >= largest * (1.0 - 1e-8)).expect("largest entry exists");
    let phase = pivot.conj() / (pivot.norm() * norm);
    v.iter_mut().for_each(|z| *z *= phase);
}

/// The momentum rows of the relations on `(A,B) ⊕ (C,D)` plus mutual
/// commutativity, maximized over all basis vectors.
pub fn verify_momentum_solution(
    sol: &MomentumSolution,
    ab: &CombinedRep,
    cd: &CombinedRep,
    sc: &StructureConstants,
    tol: f64,
    commute_tol: f64,
) -> VerificationReport {
    let direct_sum = |a: &ComplexMatrix, b: &ComplexMatrix| {
        let z_ab = ComplexMatrix::zeros(a.rows(), b.cols());
        let z_ba = ComplexMatrix::zeros(b.rows(), a.cols());
        ComplexMatrix::from_blocks(a, &z_ab, &z_ba, b)
    };
    let j: Vec<_> = ab.j.iter().zip(&cd.j).map(|(a, b)| direct_sum(a, b)).collect();
    let k: Vec<_> = ab.k.iter().zip(&cd.k).map(|(a, b)| direct_sum(a, b)).collect();
    let f = |a: usize, b: usize, c: usize| sc.f(a, b, c);
    let d = |a: usize, b: usize, c: usize| sc.d(a, b, c);
    let eps_i = Complex64::new(0.0, -sol.eps.value());
    let mut pj = 0.0f64;
    let mut pk = 0.0f64;
    let mut pp = 0.0f64;
    for p in &sol.solutions {
        pj = pj.max(family_residual(p, &j, p, I, f));
        pk = pk.max(family_residual(p, &k, p, eps_i, d));
        pp = pp.max(commuting_residual(p, p));
    }
    let mut report = VerificationReport::new();
    report.push("momentum.[P,J]=ifP", pj, tol);
    report.push("momentum.[P,K]=-eps_i_dP", pk, tol);
    report.push("momentum.[P,P]=0", pp, commute_tol);
    report
}

/// Ratio `σ₂/σ₁` of `S_ε P` reshaped over `(λ₁,a,c) x (λ₀,b,d)`
/// (`(λ₁,c,a) x (λ₀,d,b)` on the lower side), `λ = N λ₁ + λ₀`.
pub fn cg_rank_ratio(sol: &MomentumSolution, sim: &SimilarityMap) -> Result<f64> {
    if sol.basis_dim() != 1 {
        return Err(Error::NotIrreducible(sol.basis_dim()));
    }
    let n = sol.n;
    if sim.n != n {
        return Err(Error::DimensionMismatch(format!("similarity for N = {} against a solution for N = {n}", sim.n)));
    }
    let s = sim.for_sign(sol.eps).s;
    let xs = &sol.blocks[0];
    let [da, db, dc, dd] = sol.dims;
    let ((r1, r2), (c1, c2)) = match sol.side {
        BlockSide::Upper => ((da, dc), (db, dd)),
        BlockSide::Lower => ((dc, da), (dd, db)),
    };
    // block rows are (r1, c1) pairs and columns (r2, c2) pairs
    let rows = n * r1 * r2;
    let cols = n * c1 * c2;
    let mut m = ComplexMatrix::zeros(rows, cols);
    for lambda in 0..n * n {
        let (l1, l0) = (lambda / n, lambda % n);
        let mut pt = ComplexMatrix::zeros(r1 * c1, r2 * c2);
        for (mu, x) in xs.iter().enumerate() {
            let w = s[(lambda, mu)];
            if w != ZERO {
                pt.add_scaled(w, x);
            }
        }
        for a in 0..r1 {
            for b in 0..c1 {
                for cc in 0..r2 {
                    for d in 0..c2 {
                        m[((l1 * r1 + a) * r2 + cc, (l0 * c1 + b) * c2 + d)] = pt[(a * c1 + b, cc * c2 + d)];
                    }
                }
            }
        }
    }
    let sv = singular_values(&m);
    match sv.as_slice() {
        [] => Ok(0.0),
        [s1, ..] if *s1 == 0.0 => Ok(0.0),
        [_] => Ok(0.0),
        [s1, s2, ..] => Ok(s2 / s1),
    }
}

pub fn cg_factorization_check(
    sol: &MomentumSolution,
    sim: &SimilarityMap,
    ratio_tol: f64,
) -> Result<VerificationReport> {
    let ratio = cg_rank_ratio(sol, sim)?;
    let mut report = VerificationReport::new();
    report.push("cg.rank_one", ratio, ratio_tol);
    Ok(report)
}
