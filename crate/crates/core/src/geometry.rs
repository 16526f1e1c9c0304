//! Finite rotations, boosts and scale transformations of `N²`-dimensional
//! events, with invariance and covariance checks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{GeneratorSet2N, GeneratorSetN2};
use crate::basis::{utility_labels, BasisLabel};
use crate::linalg::{matrix_exp, ComplexMatrix, I};
use crate::report::VerificationReport;
use crate::sign::Sign;
use crate::structure::StructureConstants;
use crate::{Error, Result};

/// Rotation angles `θ` and boost parameters `φ`, one per generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformParams {
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub eps: Sign,
}

impl TransformParams {
    pub fn identity(dim: usize, eps: Sign) -> Self {
        Self { theta: vec![0.0; dim], phi: vec![0.0; dim], eps }
    }

    pub fn rotation(theta: Vec<f64>, eps: Sign) -> Self {
        let phi = vec![0.0; theta.len()];
        Self { theta, phi, eps }
    }

    pub fn boost(phi: Vec<f64>, eps: Sign) -> Self {
        let theta = vec![0.0; phi.len()];
        Self { theta, phi, eps }
    }

    fn check(&self, dim: usize) -> Result<()> {
        if self.theta.len() != dim || self.phi.len() != dim {
            return Err(Error::InvalidParams(format!(
                "theta has {} and phi has {} entries, expected {dim}",
                self.theta.len(),
                self.phi.len()
            )));
        }
        Ok(())
    }
}

/// Coordinates `x^μ`; the last entry is the time coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Event {
    pub x: Vec<f64>,
}

impl Event {
    pub fn new(x: Vec<f64>) -> Self {
        Self { x }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn time(&self) -> f64 {
        *self.x.last().expect("events are non-empty")
    }

    pub fn spatial(&self) -> &[f64] {
        &self.x[..self.x.len() - 1]
    }

    /// `Σ_i (x^i)²`.
    pub fn distance_squared(&self) -> f64 {
        self.spatial().iter().map(|v| v * v).sum()
    }

    /// `Σ_i (x^i)² - (x^t)²`.
    pub fn interval(&self) -> f64 {
        self.distance_squared() - self.time() * self.time()
    }

    pub fn norm(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// A real `N² x N²` transformation, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    dim: usize,
    data: Vec<f64>,
}

impl Transform {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Self { dim, data }
    }

    /// Drops the imaginary part after checking it is below `tol`.
    pub fn from_complex(m: &ComplexMatrix, tol: f64) -> Result<Self> {
        m.require_square()?;
        let residual = m.max_imag();
        if residual > tol {
            return Err(Error::ImaginaryResidue { residual });
        }
        Ok(Self { dim: m.rows(), data: m.as_slice().iter().map(|z| z.re).collect() })
    }

    pub fn from_rows(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!("{} entries for a {dim}x{dim} transform", data.len())));
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_real(self.dim, self.dim, &self.data).expect("square by construction")
    }

    pub fn max_abs_diff(&self, other: &Transform) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// `max |D Dᵀ - I|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let dot: f64 = (0..n).map(|k| self.get(r, k) * self.get(c, k)).sum();
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

fn weighted_sum(gens: &[ComplexMatrix], weights: &[f64]) -> ComplexMatrix {
    let size = gens[0].rows();
    let mut out = ComplexMatrix::zeros(size, size);
    for (g, w) in gens.iter().zip(weights) {
        if *w != 0.0 {
            out.add_scaled(Complex64::new(*w, 0.0), g);
        }
    }
    out
}

/// `exp(i Σ w_σ g^σ)`.
fn exp_i(gens: &[ComplexMatrix], weights: &[f64]) -> Result<ComplexMatrix> {
    Ok(matrix_exp(&weighted_sum(gens, weights).scale(I))?)
}

/// `D = exp(i φ·k) exp(i θ·j)`.
pub fn build_transform(g: &GeneratorSetN2, p: &TransformParams, tol: f64) -> Result<Transform> {
    p.check(g.dim())?;
    if p.eps != g.eps {
        return Err(Error::InvalidParams(format!("parameters carry sign {} but generators {}", p.eps, g.eps)));
    }
    let rotation = exp_i(&g.j, &p.theta)?;
    let boost = exp_i(&g.k, &p.phi)?;
    let d = &boost * &rotation;
    // entries grow like e^{|φ|}, so the residue bound scales with them
    Transform::from_complex(&d, tol * d.max_abs().max(1.0))
}

pub fn transform_event(d: &Transform, e: &Event) -> Result<Event> {
    if d.dim() != e.dim() {
        return Err(Error::DimensionMismatch(format!("{}-dim transform on a {}-dim event", d.dim(), e.dim())));
    }
    let n = d.dim();
    let x = (0..n).map(|r| (0..n).map(|c| d.get(r, c) * e.x[c]).sum()).collect();
    Ok(Event::new(x))
}

/// `(|Σ(x'^i)² - Σ(x^i)²|, |x'^t - x^t|)` for the finite rotation `exp(iθ·j)`.
pub fn rotation_invariance_check(g: &GeneratorSetN2, theta: &[f64], e: &Event, tol: f64) -> Result<(f64, f64)> {
    let params = TransformParams::rotation(theta.to_vec(), g.eps);
    let d = build_transform(g, &params, tol)?;
    let moved = transform_event(&d, e)?;
    Ok(((moved.distance_squared() - e.distance_squared()).abs(), (moved.time() - e.time()).abs()))
}

/// Interval change under the finite boost `exp(iφ·k)`. Measured only.
pub fn finite_boost_leakage(g: &GeneratorSetN2, phi: &[f64], e: &Event, tol: f64) -> Result<f64> {
    let params = TransformParams::boost(phi.to_vec(), g.eps);
    let d = build_transform(g, &params, tol)?;
    Ok(transform_event(&d, e)?.interval() - e.interval())
}

/// First-order interval change under an infinitesimal boost `δφ`:
/// `2ε Σ_ρ δφ_ρ (Σ_{ij} d^{iρj} x^i x^j - d^{tρt} (x^t)²)`.
pub fn interval_first_order_change(sc: &StructureConstants, dphi: &[f64], e: &Event, eps: Sign) -> Result<f64> {
    let dim = sc.dim();
    if dphi.len() != dim || e.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "dphi has {} and x has {} entries, expected {dim}",
            dphi.len(),
            e.dim()
        )));
    }
    let t = sc.time_index();
    let x = &e.x;
    let mut total = 0.0;
    for (rho, &dp) in dphi.iter().enumerate() {
        if dp == 0.0 {
            continue;
        }
        let mut inner = -sc.d(t, rho, t) * x[t] * x[t];
        for i in 0..t {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..t {
                inner += sc.d(i, rho, j) * x[i] * x[j];
            }
        }
        total += dp * inner;
    }
    Ok(2.0 * eps.value() * total)
}

/// Flat indices of `h^{+,12}`, `h^{-,12}`, `h^{0,22}` and the time matrix.
/// Positions follow the utility ordering.
pub fn subspace_indices(n: usize) -> Result<[usize; 4]> {
    if n < 2 {
        return Err(Error::InvalidParams("the 4-d subspace needs N >= 2".into()));
    }
    let labels = utility_labels(n);
    let find = |l: BasisLabel| labels.iter().position(|m| *m == l).expect("label present for N >= 2");
    Ok([
        find(BasisLabel::plus(1, 2)),
        find(BasisLabel::minus(1, 2)),
        find(BasisLabel::diag(2)),
        find(BasisLabel::time()),
    ])
}

/// [`interval_first_order_change`] with the event and boost restricted to
/// the 4-d subspace. `dphi_xyz` are the boost parameters along its three
/// spatial directions.
pub fn subspace_invariance_check(sc: &StructureConstants, e: &Event, dphi_xyz: [f64; 3], eps: Sign) -> Result<f64> {
    let idx = subspace_indices(sc.n())?;
    if e.dim() != sc.dim() {
        return Err(Error::DimensionMismatch(format!("event has {} entries, expected {}", e.dim(), sc.dim())));
    }
    if let Some((i, v)) = e.x.iter().enumerate().find(|(i, v)| **v != 0.0 && !idx.contains(i)) {
        return Err(Error::SupportViolation(format!("x[{i}] = {v} lies outside the subspace")));
    }
    let mut dphi = vec![0.0; sc.dim()];
    for (k, v) in dphi_xyz.iter().enumerate() {
        dphi[idx[k]] = *v;
    }
    interval_first_order_change(sc, &dphi, e, eps)
}

/// A unit boost direction and unit event with a large first-order change.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalWitness {
    pub dphi: Vec<f64>,
    pub x: Vec<f64>,
    pub change: f64,
}

/// Scans spatial boost directions `e_ρ` against events `e_a` and
/// `(e_a + e_b)/√2` and returns the pair with the largest `|change|`.
pub fn find_interval_witness(sc: &StructureConstants, eps: Sign) -> Option<IntervalWitness> {
    let dim = sc.dim();
    let t = sc.time_index();
    let mut best: Option<IntervalWitness> = None;
    for rho in 0..t {
        let mut dphi = vec![0.0; dim];
        dphi[rho] = 1.0;
        for a in 0..dim {
            for b in a..dim {
                let mut x = vec![0.0; dim];
                if a == b {
                    x[a] = 1.0;
                } else {
                    x[a] = std::f64::consts::FRAC_1_SQRT_2;
                    x[b] = std::f64::consts::FRAC_1_SQRT_2;
                }
                let e = Event::new(x);
                let change = interval_first_order_change(sc, &dphi, &e, eps).expect("dimensions match");
                if best.as_ref().is_none_or(|w| change.abs() > w.change.abs()) {
                    best = Some(IntervalWitness { dphi: dphi.clone(), x: e.x, change });
                }
            }
        }
    }
    best.filter(|w| w.change != 0.0)
}

/// `exp(-iθ·J) P^μ exp(iθ·J) = Σ_ρ [exp(iθ·j)]_{μρ} P^ρ` and the same with
/// `K`, `k` and `φ`.
pub fn covariance_check(
    g2n: &GeneratorSet2N,
    gn2: &GeneratorSetN2,
    p: &TransformParams,
    tol: f64,
) -> Result<VerificationReport> {
    p.check(g2n.dim())?;
    if gn2.dim() != g2n.dim() || g2n.eps != gn2.eps {
        return Err(Error::InvalidParams("generator sets disagree in dimension or sign".into()));
    }
    let momentum = g2n.momentum();
    let side = |big: &[ComplexMatrix], small: &[ComplexMatrix], w: &[f64]| -> Result<f64> {
        let u = exp_i(big, w)?;
        let u_inv = exp_i(big, &w.iter().map(|v| -v).collect::<Vec<_>>())?;
        let vec_rep = exp_i(small, w)?;
        let mut worst = 0.0f64;
        for (mu, pm) in momentum.iter().enumerate() {
            let lhs = &(&u_inv * pm) * &u;
            let mut rhs = ComplexMatrix::zeros(pm.rows(), pm.cols());
            for (rho, pr) in momentum.iter().enumerate() {
                rhs.add_scaled(vec_rep[(mu, rho)], pr);
            }
            worst = worst.max(lhs.distance(&rhs));
        }
        Ok(worst)
    };
    let mut report = VerificationReport::new();
    report.push("covariance.rotation", side(&g2n.j, &gn2.j, &p.theta)?, tol);
    report.push("covariance.boost", side(&g2n.k, &gn2.k, &p.phi)?, tol);
    Ok(report)
}
