//! JSON documents. Complex numbers are `[re, im]`, matrices are row-major
//! nested arrays, and every top-level document carries `"schema": "npw-v1"`.

use serde::{Deserialize, Serialize};

use crate::algebra::{GeneratorSet2N, GeneratorSetN2};
use crate::basis::{anti_rep, BasisKind, BasisLabel, HermitianBasis};
use crate::linalg::ComplexMatrix;
use crate::momentum::{BlockSide, MomentumSolution};
use crate::report::{VerificationRecord, VerificationReport};
use crate::sign::Sign;
use crate::structure::StructureConstants;
use crate::{Complex64, Error, Result};

pub const SCHEMA: &str = "npw-v1";

pub const ORDERING_NOTE: &str =
    "flat order: plus pairs, minus pairs, diagonal ladder, time; (a,b) lexicographic within each family; 0-based";

pub const TENSOR_NOTE: &str = "t[mu][nu][sigma]: [h^mu,h^nu] = i f h^sigma, {h^mu,h^nu} = d h^sigma";

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.rows()).map(|r| m.row(r).iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<ComplexMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::Schema("ragged matrix rows".into()));
    }
    let data = rows.iter().flatten().map(|[re, im]| Complex64::new(*re, *im)).collect();
    Ok(ComplexMatrix::from_vec(r, c, data)?)
}

fn matrices_to_json(ms: &[ComplexMatrix]) -> Vec<JsonMatrix> {
    ms.iter().map(matrix_to_json).collect()
}

fn matrices_from_json(ms: &[JsonMatrix]) -> Result<Vec<ComplexMatrix>> {
    ms.iter().map(matrix_from_json).collect()
}

fn check_schema(schema: &str) -> Result<()> {
    if schema != SCHEMA {
        return Err(Error::Schema(format!("expected schema {SCHEMA}, found {schema}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisDoc {
    pub n: usize,
    pub kind: BasisKind,
    pub ordering: String,
    pub labels: Vec<BasisLabel>,
    pub matrices: Vec<JsonMatrix>,
}

impl BasisDoc {
    pub fn from_basis(b: &HermitianBasis) -> Self {
        Self {
            n: b.n(),
            kind: b.kind(),
            ordering: ORDERING_NOTE.into(),
            labels: b.labels().to_vec(),
            matrices: matrices_to_json(b.matrices()),
        }
    }

    pub fn to_basis(&self) -> Result<HermitianBasis> {
        HermitianBasis::from_parts(self.n, self.kind, matrices_from_json(&self.matrices)?, self.labels.clone(), 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureDoc {
    pub n: usize,
    pub kind: BasisKind,
    pub utility_rep: bool,
    pub index_order: String,
    pub f: Vec<Vec<Vec<f64>>>,
    pub d: Vec<Vec<Vec<f64>>>,
}

fn nest(t: &[f64], dim: usize) -> Vec<Vec<Vec<f64>>> {
    t.chunks(dim * dim).map(|plane| plane.chunks(dim).map(<[f64]>::to_vec).collect()).collect()
}

fn flatten(t: &[Vec<Vec<f64>>]) -> Vec<f64> {
    t.iter().flatten().flatten().copied().collect()
}

impl StructureDoc {
    pub fn from_constants(sc: &StructureConstants) -> Self {
        Self {
            n: sc.n(),
            kind: sc.kind(),
            utility_rep: sc.utility_rep(),
            index_order: TENSOR_NOTE.into(),
            f: nest(sc.f_tensor(), sc.dim()),
            d: nest(sc.d_tensor(), sc.dim()),
        }
    }

    pub fn to_constants(&self) -> Result<StructureConstants> {
        StructureConstants::from_tensors(self.n, self.kind, flatten(&self.f), flatten(&self.d))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Generators2NDoc {
    pub n: usize,
    pub eps: Sign,
    pub c_plus: [f64; 2],
    pub c_minus: [f64; 2],
    pub j: Vec<JsonMatrix>,
    pub k: Vec<JsonMatrix>,
    pub p_plus: Vec<JsonMatrix>,
    pub p_minus: Vec<JsonMatrix>,
}

impl Generators2NDoc {
    pub fn from_set(g: &GeneratorSet2N) -> Self {
        Self {
            n: g.n,
            eps: g.eps,
            c_plus: [g.c_plus.re, g.c_plus.im],
            c_minus: [g.c_minus.re, g.c_minus.im],
            j: matrices_to_json(&g.j),
            k: matrices_to_json(&g.k),
            p_plus: matrices_to_json(&g.p_plus),
            p_minus: matrices_to_json(&g.p_minus),
        }
    }

    /// The set needs its basis back, which the document does not repeat.
    pub fn to_set(&self, basis: &HermitianBasis) -> Result<GeneratorSet2N> {
        Ok(GeneratorSet2N {
            n: self.n,
            eps: self.eps,
            c_plus: Complex64::new(self.c_plus[0], self.c_plus[1]),
            c_minus: Complex64::new(self.c_minus[0], self.c_minus[1]),
            j: matrices_from_json(&self.j)?,
            k: matrices_from_json(&self.k)?,
            p_plus: matrices_from_json(&self.p_plus)?,
            p_minus: matrices_from_json(&self.p_minus)?,
            basis: basis.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorsN2Doc {
    pub n: usize,
    pub eps: Sign,
    pub j: Vec<JsonMatrix>,
    pub k: Vec<JsonMatrix>,
}

impl GeneratorsN2Doc {
    pub fn from_set(g: &GeneratorSetN2) -> Self {
        Self { n: g.n, eps: g.eps, j: matrices_to_json(&g.j), k: matrices_to_json(&g.k) }
    }

    pub fn to_set(&self) -> Result<GeneratorSetN2> {
        Ok(GeneratorSetN2 {
            n: self.n,
            eps: self.eps,
            j: matrices_from_json(&self.j)?,
            k: matrices_from_json(&self.k)?,
        })
    }
}

/// Everything `generate` writes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerateDoc {
    pub schema: String,
    pub n: usize,
    pub eps: Sign,
    pub basis: BasisDoc,
    pub anti_rep: BasisDoc,
    pub structure: StructureDoc,
    pub generators_2n: Generators2NDoc,
    pub generators_n2: GeneratorsN2Doc,
}

impl GenerateDoc {
    pub fn new(basis: &HermitianBasis, sc: &StructureConstants, g2n: &GeneratorSet2N, gn2: &GeneratorSetN2) -> Self {
        Self {
            schema: SCHEMA.into(),
            n: basis.n(),
            eps: g2n.eps,
            basis: BasisDoc::from_basis(basis),
            anti_rep: BasisDoc::from_basis(&anti_rep(basis)),
            structure: StructureDoc::from_constants(sc),
            generators_2n: Generators2NDoc::from_set(g2n),
            generators_n2: GeneratorsN2Doc::from_set(gn2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub schema: String,
    pub n: usize,
    pub eps: Sign,
    pub tolerance: f64,
    pub seed: u64,
    pub rng: String,
    pub all_pass: bool,
    pub records: Vec<VerificationRecord>,
}

impl ReportDoc {
    /// Records are sorted by identity.
    pub fn new(n: usize, eps: Sign, tolerance: f64, seed: u64, rng: &str, report: VerificationReport) -> Self {
        let report = report.sorted();
        Self {
            schema: SCHEMA.into(),
            n,
            eps,
            tolerance,
            seed,
            rng: rng.into(),
            all_pass: report.all_pass(),
            records: report.records,
        }
    }

    pub fn report(&self) -> VerificationReport {
        VerificationReport { records: self.records.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumDoc {
    pub schema: String,
    pub n: usize,
    pub eps: Sign,
    /// Rep names `[A, B, C, D]`.
    pub reps: [String; 4],
    pub side: BlockSide,
    pub dims: [usize; 4],
    pub basis_dim: usize,
    pub normalization: String,
    /// `solutions[k][μ]` is `P^μ` of basis vector `k` on the direct sum.
    pub solutions: Vec<Vec<JsonMatrix>>,
    pub records: Vec<VerificationRecord>,
}

impl MomentumDoc {
    pub fn new(sol: &MomentumSolution, reps: [String; 4], report: VerificationReport) -> Self {
        Self {
            schema: SCHEMA.into(),
            n: sol.n,
            eps: sol.eps,
            reps,
            side: sol.side,
            dims: sol.dims,
            basis_dim: sol.basis_dim(),
            normalization: "unit Frobenius norm per basis vector; largest entry real positive".into(),
            solutions: sol.solutions.iter().map(|p| matrices_to_json(p)).collect(),
            records: report.sorted().records,
        }
    }

    pub fn to_solution(&self) -> Result<MomentumSolution> {
        let solutions = self.solutions.iter().map(|p| matrices_from_json(p)).collect::<Result<Vec<_>>>()?;
        let dim_ab = self.dims[0] * self.dims[1];
        let dim_cd = self.dims[2] * self.dims[3];
        let blocks = solutions
            .iter()
            .map(|ps| {
                ps.iter()
                    .map(|p| match self.side {
                        BlockSide::Upper => p.block(0, dim_ab, dim_ab, dim_cd),
                        BlockSide::Lower => p.block(dim_ab, 0, dim_cd, dim_ab),
                    })
                    .collect()
            })
            .collect();
        Ok(MomentumSolution { n: self.n, eps: self.eps, side: self.side, dims: self.dims, blocks, solutions })
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(doc)?)
}

/// Parses a top-level document and checks its schema tag.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    match value.get("schema").and_then(|s| s.as_str()) {
        Some(s) => check_schema(s)?,
        None => return Err(Error::Schema("missing schema field".into())),
    }
    Ok(serde_json::from_value(value)?)
}
