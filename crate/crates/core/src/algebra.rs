//! Generators in the `2N`-rep (`J`, `K`, `P`) and in the `N²`-rep (`j`, `k`),
//! with residual checks for their commutation relations.

use num_complex::Complex64;

use crate::basis::{complex_coefficients, HermitianBasis};
use crate::linalg::{ComplexMatrix, I, ZERO};
use crate::report::VerificationReport;
use crate::sign::Sign;
use crate::structure::StructureConstants;
use crate::{Error, Result};

/// `J^μ = diag(h, h)`, `K^μ = diag(ih, -ih)` and the two momentum families
/// `P_+^μ = [[0, c_+ h], [0, 0]]`, `P_-^μ = [[0, 0], [c_- h, 0]]`.
///
/// Exactly one of `c_plus`, `c_minus` is nonzero; the matching family is
/// the momentum for the set's sign.
#[derive(Clone, Debug)]
pub struct GeneratorSet2N {
    pub n: usize,
    pub eps: Sign,
    pub c_plus: Complex64,
    pub c_minus: Complex64,
    pub j: Vec<ComplexMatrix>,
    pub k: Vec<ComplexMatrix>,
    pub p_plus: Vec<ComplexMatrix>,
    pub p_minus: Vec<ComplexMatrix>,
    pub basis: HermitianBasis,
}

impl GeneratorSet2N {
    pub fn dim(&self) -> usize {
        self.j.len()
    }

    /// The nonzero momentum family.
    pub fn momentum(&self) -> &[ComplexMatrix] {
        match self.eps {
            Sign::Plus => &self.p_plus,
            Sign::Minus => &self.p_minus,
        }
    }

    /// The constant of the nonzero momentum block.
    pub fn c(&self) -> Complex64 {
        match self.eps {
            Sign::Plus => self.c_plus,
            Sign::Minus => self.c_minus,
        }
    }

    /// Block offsets `(row, col)` of the nonzero momentum block.
    fn momentum_block(&self) -> (usize, usize) {
        match self.eps {
            Sign::Plus => (0, self.n),
            Sign::Minus => (self.n, 0),
        }
    }
}

/// `j^λ_{μν} = i f^{μλν}` and `k^λ_{μν} = -ε i d^{μλν}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSetN2 {
    pub n: usize,
    pub eps: Sign,
    pub j: Vec<ComplexMatrix>,
    pub k: Vec<ComplexMatrix>,
}

impl GeneratorSetN2 {
    pub fn dim(&self) -> usize {
        self.j.len()
    }

    /// Largest entrywise difference against another set.
    pub fn max_abs_diff(&self, other: &GeneratorSetN2) -> f64 {
        let diff = |a: &[ComplexMatrix], b: &[ComplexMatrix]| {
            a.iter().zip(b).map(|(x, y)| x.max_abs_diff(y)).fold(0.0, f64::max)
        };
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        diff(&self.j, &other.j).max(diff(&self.k, &other.k))
    }
}

pub fn build_2n_generators(basis: &HermitianBasis, eps: Sign, c: Complex64) -> Result<GeneratorSet2N> {
    if c == ZERO {
        return Err(Error::ZeroMomentumConstant);
    }
    let n = basis.n();
    let zero = ComplexMatrix::zeros(n, n);
    let mut j = Vec::with_capacity(basis.dim());
    let mut k = Vec::with_capacity(basis.dim());
    let mut p_plus = Vec::with_capacity(basis.dim());
    let mut p_minus = Vec::with_capacity(basis.dim());
    let (c_plus, c_minus) = match eps {
        Sign::Plus => (c, ZERO),
        Sign::Minus => (ZERO, c),
    };
    for h in basis.matrices() {
        let ih = h.scale(I);
        j.push(ComplexMatrix::from_blocks(h, &zero, &zero, h));
        k.push(ComplexMatrix::from_blocks(&ih, &zero, &zero, &-&ih));
        p_plus.push(ComplexMatrix::from_blocks(&zero, &h.scale(c_plus), &zero, &zero));
        p_minus.push(ComplexMatrix::from_blocks(&zero, &zero, &h.scale(c_minus), &zero));
    }
    Ok(GeneratorSet2N { n, eps, c_plus, c_minus, j, k, p_plus, p_minus, basis: basis.clone() })
}

pub fn build_n2_generators(sc: &StructureConstants, eps: Sign) -> GeneratorSetN2 {
    let dim = sc.dim();
    let e = eps.value();
    let j = (0..dim).map(|l| ComplexMatrix::from_fn(dim, dim, |m, n| Complex64::new(0.0, sc.f(m, l, n)))).collect();
    let k =
        (0..dim).map(|l| ComplexMatrix::from_fn(dim, dim, |m, n| Complex64::new(0.0, -e * sc.d(m, l, n)))).collect();
    GeneratorSetN2 { n: sc.n(), eps, j, k }
}

/// `Σ_σ scale · c(σ) · gens[σ]`.
fn combination(gens: &[ComplexMatrix], scale: Complex64, c: impl Fn(usize) -> f64) -> ComplexMatrix {
    let size = gens[0].rows();
    let mut out = ComplexMatrix::zeros(size, size);
    for (sigma, g) in gens.iter().enumerate() {
        let v = c(sigma);
        if v != 0.0 {
            out.add_scaled(scale * v, g);
        }
    }
    out
}

/// `max_{μν} ‖[a^μ, b^ν] - scale · t^{μνσ} out^σ‖_F`.
pub(crate) fn family_residual(
    a: &[ComplexMatrix],
    b: &[ComplexMatrix],
    out: &[ComplexMatrix],
    scale: Complex64,
    t: impl Fn(usize, usize, usize) -> f64,
) -> f64 {
    let mut worst = 0.0f64;
    for (mu, am) in a.iter().enumerate() {
        for (nu, bm) in b.iter().enumerate() {
            let lhs = am.commutator(bm);
            let rhs = combination(out, scale, |s| t(mu, nu, s));
            worst = worst.max(lhs.distance(&rhs));
        }
    }
    worst
}

/// Max of `‖[a^μ, b^ν]‖_F`.
pub(crate) fn commuting_residual(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    let mut worst = 0.0f64;
    for am in a {
        for bm in b {
            worst = worst.max(am.commutator(bm).frobenius_norm());
        }
    }
    worst
}

fn check_dims(n: usize, dim: usize, sc: &StructureConstants) -> bool {
    n == sc.n() && dim == sc.dim()
}

/// The six relation families of the `2N`-rep, one record each.
pub fn verify_poincare_weyl(g: &GeneratorSet2N, sc: &StructureConstants, tol: f64) -> VerificationReport {
    let mut report = VerificationReport::new();
    if !check_dims(g.n, g.dim(), sc) {
        report.push("poincare_weyl.dimensions", f64::INFINITY, tol);
        return report;
    }
    let f = |a: usize, b: usize, c: usize| sc.f(a, b, c);
    let d = |a: usize, b: usize, c: usize| sc.d(a, b, c);
    let p = g.momentum();
    let minus_i = Complex64::new(0.0, -1.0);
    let eps_i = Complex64::new(0.0, -g.eps.value());
    report.push("poincare_weyl.[J,J]=ifJ", family_residual(&g.j, &g.j, &g.j, I, f), tol);
    report.push("poincare_weyl.[J,K]=ifK", family_residual(&g.j, &g.k, &g.k, I, f), tol);
    report.push("poincare_weyl.[K,K]=-ifJ", family_residual(&g.k, &g.k, &g.j, minus_i, f), tol);
    report.push("poincare_weyl.[P,J]=ifP", family_residual(p, &g.j, p, I, f), tol);
    report.push("poincare_weyl.[P,K]=-eps_i_dP", family_residual(p, &g.k, p, eps_i, d), tol);
    report.push("poincare_weyl.[P,P]=0", commuting_residual(p, p), tol);
    report
}

pub fn verify_lorentz_weyl(g: &GeneratorSetN2, sc: &StructureConstants, tol: f64) -> VerificationReport {
    lorentz_weyl_report("lorentz_weyl", &g.j, &g.k, sc, tol)
}

pub(crate) fn lorentz_weyl_report(
    prefix: &str,
    j: &[ComplexMatrix],
    k: &[ComplexMatrix],
    sc: &StructureConstants,
    tol: f64,
) -> VerificationReport {
    let mut report = VerificationReport::new();
    if j.len() != sc.dim() || k.len() != sc.dim() {
        report.push(format!("{prefix}.dimensions"), f64::INFINITY, tol);
        return report;
    }
    let f = |a: usize, b: usize, c: usize| sc.f(a, b, c);
    let minus_i = Complex64::new(0.0, -1.0);
    report.push(format!("{prefix}.[j,j]=ifj"), family_residual(j, j, j, I, f), tol);
    report.push(format!("{prefix}.[j,k]=ifk"), family_residual(j, k, k, I, f), tol);
    report.push(format!("{prefix}.[k,k]=-ifj"), family_residual(k, k, j, minus_i, f), tol);
    report
}

/// Reads the coefficients of `[P^μ, A] = a_{μσ} P^σ` for every `A` in
/// `{J^ν, K^ν}` by expanding the nonzero momentum block in the basis.
pub fn extract_copycat(g: &GeneratorSet2N, tol: f64) -> Result<GeneratorSetN2> {
    let n = g.n;
    let dim = g.dim();
    let p = g.momentum();
    let c = g.c();
    let (br, bc) = g.momentum_block();
    let read = |a: &ComplexMatrix| -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(dim, dim);
        for (mu, pm) in p.iter().enumerate() {
            let comm = pm.commutator(a);
            let block = comm.block(br, bc, n, n).scale(c.inv());
            let coeffs = complex_coefficients(&block, &g.basis)?;
            let mut rebuilt = ComplexMatrix::zeros(2 * n, 2 * n);
            for (sigma, z) in coeffs.iter().enumerate() {
                rebuilt.add_scaled(*z, &p[sigma]);
                out[(mu, sigma)] = *z;
            }
            // also catches anything outside the momentum block
            let residual = comm.distance(&rebuilt);
            if residual > tol * (1.0 + comm.frobenius_norm()) {
                return Err(Error::ExpansionResidual { residual });
            }
        }
        Ok(out)
    };
    let j = g.j.iter().map(&read).collect::<Result<Vec<_>>>()?;
    let k = g.k.iter().map(&read).collect::<Result<Vec<_>>>()?;
    Ok(GeneratorSetN2 { n, eps: g.eps, j, k })
}

/// Entrywise hermiticity pattern of the utility `N²`-rep: `j` hermitian
/// and traceless, `k` antihermitian.
pub fn verify_n2_pattern(g: &GeneratorSetN2, tol: f64) -> VerificationReport {
    let mut herm = 0.0f64;
    let mut trace = 0.0f64;
    let mut anti = 0.0f64;
    for (jm, km) in g.j.iter().zip(&g.k) {
        herm = herm.max(jm.hermitian_residual());
        trace = trace.max(jm.trace().norm());
        anti = anti.max((&km.adjoint() + km).max_abs());
    }
    let mut report = VerificationReport::new();
    report.push("n2_rep.j_hermitian", herm, tol);
    report.push("n2_rep.j_traceless", trace, tol);
    report.push("n2_rep.k_antihermitian", anti, tol);
    report
}
