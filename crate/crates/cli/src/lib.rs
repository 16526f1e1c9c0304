//! Commands behind the `npw` binary.
//!
//! Each `cmd_*` writes a human summary to the supplied writer and, when an
//! output path is configured, a JSON document tagged with the schema
//! version. Library callers get the same documents back from the
//! `*_document` functions.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use npw_core::algebra::verify_n2_pattern;
use npw_core::export::{self, GenerateDoc, MomentumDoc, ReportDoc, SCHEMA};
use npw_core::geometry::{finite_boost_leakage, subspace_indices};
use npw_core::momentum::{verify_kronecker_form, verify_momentum_solution, verify_similarity};
use npw_core::structure::{verify_anti_rep_relations, verify_closure};
use npw_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const RNG_NAME: &str = "ChaCha8Rng";

/// Random draws per seeded family in `cmd_verify`.
pub const TRIALS: usize = 25;

/// Size of the entry added to `d` by the fault-injection switch.
pub const FAULT_SIZE: f64 = 1e-3;

const COMMUTE_TOL: f64 = 1e-12;
const CG_RATIO_TOL: f64 = 1e-8;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Core(#[from] npw_core::Error),
}

impl CliError {
    /// Every error is a usage or IO problem as far as the shell is concerned.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

impl From<io::Error> for CliError {
    fn from(source: io::Error) -> Self {
        CliError::Io { path: PathBuf::from("<stdout>"), source }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub eps: Sign,
    pub tolerance: f64,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(n: usize, eps: Sign, tolerance: f64, seed: u64, output: Option<PathBuf>) -> Result<Self, CliError> {
        if n == 0 {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive and finite, got {tolerance}")));
        }
        Ok(Self { n, eps, tolerance, seed, output })
    }

    pub fn dim(&self) -> usize {
        self.n * self.n
    }
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn emit(config: &RunConfig, json: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match &config.output {
        Some(path) => write_output(path, json),
        None => Ok(writeln!(out, "{json}")?),
    }
}

// ---- generate ----

pub fn generate_document(config: &RunConfig) -> Result<GenerateDoc, CliError> {
    let basis = build_utility_basis(config.n)?;
    let sc = compute_structure_constants(&basis, config.tolerance)?;
    let g2n = build_2n_generators(&basis, config.eps, Complex64::new(1.0, 0.0))?;
    let gn2 = build_n2_generators(&sc, config.eps);
    Ok(GenerateDoc::new(&basis, &sc, &g2n, &gn2))
}

/// Writes the basis, anti-rep, `f`, `d` and both generator sets. Without an
/// output path the document goes to `out`.
pub fn cmd_generate(config: &RunConfig, out: &mut dyn Write) -> Result<Status, CliError> {
    let doc = generate_document(config)?;
    let json = export::to_json(&doc)?;
    emit(config, &json, out)?;
    if let Some(path) = &config.output {
        writeln!(out, "wrote N = {} algebra ({} basis matrices) to {}", config.n, config.dim(), path.display())?;
    }
    Ok(Status::Pass)
}

// ---- verify ----

/// Keeps the worst residual per identity across repeated trials.
#[derive(Default)]
struct Worst(BTreeMap<String, (f64, f64)>);

impl Worst {
    fn add(&mut self, report: VerificationReport) {
        for r in report.records {
            let slot = self.0.entry(r.identity).or_insert((0.0, r.tolerance));
            if r.residual.is_nan() || r.residual > slot.0 {
                slot.0 = r.residual;
            }
        }
    }

    fn push(&mut self, identity: &str, residual: f64, tol: f64) {
        let mut r = VerificationReport::new();
        r.push(identity, residual, tol);
        self.add(r);
    }

    fn into_report(self) -> VerificationReport {
        let mut report = VerificationReport::new();
        for (identity, (residual, tol)) in self.0 {
            report.push(identity, residual, tol);
        }
        report
    }
}

fn uniform(rng: &mut ChaCha8Rng, len: usize, half_width: f64) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-half_width..half_width)).collect()
}

/// Rescales `v` onto the sphere of radius `r` when it lies outside.
fn clamp_norm(mut v: Vec<f64>, r: f64) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > r {
        v.iter_mut().for_each(|x| *x *= r / norm);
    }
    v
}

/// The whole suite for one `(N, ε)`. With `inject_fault` a single entry of
/// `d` is corrupted before anything downstream is built.
pub fn verify_suite(config: &RunConfig, inject_fault: bool) -> Result<VerificationReport, CliError> {
    let (n, eps, tol) = (config.n, config.eps, config.tolerance);
    let dim = config.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let basis = build_utility_basis(n)?;
    let mut sc = compute_structure_constants(&basis, tol)?;
    if inject_fault {
        sc.perturb_d(0, 1 % dim, 2 % dim, FAULT_SIZE);
    }

    let mut report = VerificationReport::new();
    report.push("basis.orthonormality", basis.orthonormality_residual(), tol);
    let time_trace = basis.matrices()[basis.time_index()].trace().re;
    report.push("basis.time_trace", (time_trace - (n as f64 / 2.0).sqrt()).abs(), tol);
    report.extend(verify_closure(&basis, &sc, tol));
    report.extend(verify_anti_rep_relations(&basis, &sc, tol));
    report.extend(verify_time_index(&sc, tol));
    report.extend(verify_symmetries(&sc, tol));

    let g2n = build_2n_generators(&basis, eps, Complex64::new(1.0, 0.0))?;
    let gn2 = build_n2_generators(&sc, eps);
    report.extend(verify_poincare_weyl(&g2n, &sc, tol));
    report.extend(verify_lorentz_weyl(&gn2, &sc, tol));
    report.extend(verify_n2_pattern(&gn2, tol));
    let copycat = match extract_copycat(&g2n, tol) {
        Ok(e) => e.max_abs_diff(&gn2),
        Err(Error::ExpansionResidual { residual }) => residual,
        Err(e) => return Err(e.into()),
    };
    report.push("copycat.extracted_vs_direct", copycat, tol);

    let mut worst = Worst::default();
    for _ in 0..TRIALS {
        let theta = clamp_norm(uniform(&mut rng, dim, 1.0), 1.0);
        let phi = clamp_norm(uniform(&mut rng, dim, 1.0), 1.0);
        worst.add(covariance_check(&g2n, &gn2, &TransformParams { theta, phi, eps }, tol)?);
    }
    for _ in 0..TRIALS {
        let theta = uniform(&mut rng, dim, PI);
        let e = Event::new(uniform(&mut rng, dim, 1.0));
        let (dist, time) = rotation_invariance_check(&gn2, &theta, &e, tol)?;
        worst.push("rotation.distance", dist, tol);
        worst.push("rotation.time", time, tol);
    }
    if n == 2 {
        for _ in 0..TRIALS {
            let mut phi = uniform(&mut rng, dim, 1.0);
            phi[dim - 1] = 0.0;
            let e = Event::new(uniform(&mut rng, dim, 1.0));
            worst.push("interval.n2_boost", finite_boost_leakage(&gn2, &phi, &e, tol)?.abs(), tol);
        }
    }
    if n >= 3 {
        let idx = subspace_indices(n)?;
        for _ in 0..TRIALS {
            let dphi = uniform(&mut rng, 3, 1.0);
            let mut x = vec![0.0; dim];
            for i in idx {
                x[i] = rng.random_range(-1.0..1.0);
            }
            let change = subspace_invariance_check(&sc, &Event::new(x), [dphi[0], dphi[1], dphi[2]], eps)?;
            worst.push("subspace.first_order", change.abs(), tol);
        }
    }
    report.extend(worst.into_report());

    let sim = build_similarity(&basis)?;
    report.extend(verify_similarity(&sim, &basis, &sc, eps, tol));
    report.extend(verify_kronecker_form(&basis, &sc, eps, tol)?);
    Ok(report.sorted())
}

pub fn verify_document(config: &RunConfig, inject_fault: bool) -> Result<ReportDoc, CliError> {
    let report = verify_suite(config, inject_fault)?;
    Ok(ReportDoc::new(config.n, config.eps, config.tolerance, config.seed, RNG_NAME, report))
}

fn family(identity: &str) -> &str {
    identity.split('.').next().unwrap_or(identity)
}

/// Runs the suite, prints a per-family summary and writes the JSON report.
pub fn cmd_verify(config: &RunConfig, inject_fault: bool, out: &mut dyn Write) -> Result<Status, CliError> {
    let doc = verify_document(config, inject_fault)?;
    let mut families: BTreeMap<&str, (usize, usize, f64)> = BTreeMap::new();
    for r in &doc.records {
        let slot = families.entry(family(&r.identity)).or_default();
        slot.0 += 1;
        slot.1 += usize::from(!r.pass);
        slot.2 = slot.2.max(r.residual);
    }
    writeln!(out, "N = {}, eps_P = {}, tol = {:e}, seed = {} ({RNG_NAME})", doc.n, doc.eps, doc.tolerance, doc.seed)?;
    for (name, (count, failed, worst)) in &families {
        let verdict = if *failed == 0 { "PASS" } else { "FAIL" };
        writeln!(out, "{verdict}  {name:<16} {count:>3} checks  worst residual {worst:.3e}")?;
    }
    for r in doc.records.iter().filter(|r| !r.pass) {
        writeln!(out, "  {r}")?;
    }
    let failed = doc.records.iter().filter(|r| !r.pass).count();
    if failed == 0 {
        writeln!(out, "all {} identities pass", doc.records.len())?;
    } else {
        let names: Vec<&str> = families.iter().filter(|(_, v)| v.1 > 0).map(|(k, _)| *k).collect();
        writeln!(out, "{failed} of {} identities fail in: {}", doc.records.len(), names.join(", "))?;
    }
    if let Some(path) = &config.output {
        write_output(path, &export::to_json(&doc)?)?;
    }
    Ok(if doc.all_pass { Status::Pass } else { Status::Fail })
}

// ---- transform ----

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformDoc {
    pub schema: String,
    pub n: usize,
    pub eps: Sign,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub x: Event,
    pub x_prime: Event,
    /// Rows of `D = exp(iφ·k) exp(iθ·j)`.
    pub matrix: Vec<Vec<f64>>,
    pub interval_delta: f64,
    pub time_delta: f64,
    pub distance_squared_delta: f64,
}

fn check_len(name: &str, v: &[f64], dim: usize) -> Result<(), CliError> {
    if v.len() != dim {
        return Err(CliError::Usage(format!("--{name} has {} entries, expected N² = {dim}", v.len())));
    }
    Ok(())
}

/// `theta` and `phi` default to zero.
pub fn transform_document(
    config: &RunConfig,
    theta: Option<Vec<f64>>,
    phi: Option<Vec<f64>>,
    x: Vec<f64>,
) -> Result<TransformDoc, CliError> {
    let dim = config.dim();
    let theta = theta.unwrap_or_else(|| vec![0.0; dim]);
    let phi = phi.unwrap_or_else(|| vec![0.0; dim]);
    check_len("theta", &theta, dim)?;
    check_len("phi", &phi, dim)?;
    check_len("x", &x, dim)?;
    let basis = build_utility_basis(config.n)?;
    let sc = compute_structure_constants(&basis, config.tolerance)?;
    let gn2 = build_n2_generators(&sc, config.eps);
    let params = TransformParams { theta: theta.clone(), phi: phi.clone(), eps: config.eps };
    let d = build_transform(&gn2, &params, config.tolerance)?;
    let e = Event::new(x);
    let moved = transform_event(&d, &e)?;
    Ok(TransformDoc {
        schema: SCHEMA.into(),
        n: config.n,
        eps: config.eps,
        theta,
        phi,
        matrix: d.as_slice().chunks(dim).map(<[f64]>::to_vec).collect(),
        interval_delta: moved.interval() - e.interval(),
        time_delta: moved.time() - e.time(),
        distance_squared_delta: moved.distance_squared() - e.distance_squared(),
        x: e,
        x_prime: moved,
    })
}

fn format_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.12}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn cmd_transform(
    config: &RunConfig,
    theta: Option<Vec<f64>>,
    phi: Option<Vec<f64>>,
    x: Vec<f64>,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let doc = transform_document(config, theta, phi, x)?;
    writeln!(out, "x  = {}", format_vec(&doc.x.x))?;
    writeln!(out, "x' = {}", format_vec(&doc.x_prime.x))?;
    writeln!(out, "interval delta   {:.3e}", doc.interval_delta)?;
    writeln!(out, "time delta       {:.3e}", doc.time_delta)?;
    writeln!(out, "distance² delta  {:.3e}", doc.distance_squared_delta)?;
    if let Some(path) = &config.output {
        write_output(path, &export::to_json(&doc)?)?;
    }
    Ok(Status::Pass)
}

// ---- momentum ----

/// `[A, B, C, D]` for the `(A,B) ⊕ (C,D)` direct sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepSpec(pub [RepKind; 4]);

impl RepSpec {
    pub const DEFAULT_AB: [RepKind; 2] = [RepKind::Fund, RepKind::Antifund];

    /// `"C,D"` pairs with the default `(A,B) = (fund, antifund)`;
    /// `"A,B:C,D"` names all four.
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let pair = |s: &str| -> Result<[RepKind; 2], CliError> {
            let parts: Vec<&str> = s.split(',').collect();
            let [a, b] = parts.as_slice() else {
                return Err(CliError::Usage(format!("expected a pair 'X,Y' in rep spec, got '{s}'")));
            };
            let kind = |t: &str| t.parse::<RepKind>().map_err(|e| CliError::Usage(e.to_string()));
            Ok([kind(a)?, kind(b)?])
        };
        let halves: Vec<&str> = spec.split(':').collect();
        let (ab, cd) = match halves.as_slice() {
            [cd] => (Self::DEFAULT_AB, pair(cd)?),
            [ab, cd] => (pair(ab)?, pair(cd)?),
            _ => return Err(CliError::Usage(format!("malformed rep spec '{spec}'"))),
        };
        Ok(RepSpec([ab[0], ab[1], cd[0], cd[1]]))
    }

    pub fn names(&self) -> [String; 4] {
        self.0.map(|k| k.name().to_string())
    }
}

impl std::fmt::Display for RepSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b}) + ({c},{d})")
    }
}

/// Solves for the momentum matrices, checks every solution, and adds the
/// rank-one test when the solution is unique and all factors irreducible.
pub fn momentum_document(config: &RunConfig, spec: RepSpec, side: Option<BlockSide>) -> Result<MomentumDoc, CliError> {
    let (eps, tol) = (config.eps, config.tolerance);
    let side = side.unwrap_or_else(|| BlockSide::default_for(eps));
    let basis = build_utility_basis(config.n)?;
    let sc = compute_structure_constants(&basis, tol)?;
    let [a, b, c, d] = spec.0;
    let ab = CombinedRep::from_kinds(a, b, &basis, &sc, tol)?;
    let cd = CombinedRep::from_kinds(c, d, &basis, &sc, tol)?;
    let sol = solve_momentum(&ab, &cd, &sc, eps, side, tol)?;
    let mut report = verify_momentum_solution(&sol, &ab, &cd, &sc, tol, tol.min(COMMUTE_TOL));
    if sol.basis_dim() == 1 && spec.0.iter().all(|k| k.is_irreducible()) {
        report.extend(cg_factorization_check(&sol, &build_similarity(&basis)?, CG_RATIO_TOL)?);
    }
    Ok(MomentumDoc::new(&sol, spec.names(), report))
}

pub fn cmd_momentum(
    config: &RunConfig,
    spec: RepSpec,
    side: Option<BlockSide>,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let doc = momentum_document(config, spec, side)?;
    writeln!(out, "{spec} at N = {}, eps_P = {}, {} block", doc.n, doc.eps, doc.side)?;
    if doc.basis_dim == 0 {
        writeln!(out, "no momentum matrices: the solution space is empty")?;
    } else {
        writeln!(out, "basis_dim = {}", doc.basis_dim)?;
        for r in &doc.records {
            writeln!(out, "  {r}")?;
        }
    }
    if let Some(path) = &config.output {
        write_output(path, &export::to_json(&doc)?)?;
    }
    let pass = doc.records.iter().all(|r| r.pass);
    Ok(if pass { Status::Pass } else { Status::Fail })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(n: usize) -> RunConfig {
        RunConfig::new(n, Sign::Plus, 1e-10, 7, None).unwrap()
    }

    #[test]
    fn config_rejects_bad_values() {
        assert!(RunConfig::new(0, Sign::Plus, 1e-10, 0, None).is_err());
        assert!(RunConfig::new(2, Sign::Plus, 0.0, 0, None).is_err());
        assert!(RunConfig::new(2, Sign::Plus, f64::NAN, 0, None).is_err());
    }

    #[test]
    fn rep_spec_forms() {
        let s = RepSpec::parse("sym2,antisym2bar").unwrap();
        assert_eq!(s.0, [RepKind::Fund, RepKind::Antifund, RepKind::Sym2, RepKind::Antisym2bar]);
        let s = RepSpec::parse("trivial,fund:fund,trivial").unwrap();
        assert_eq!(s.0, [RepKind::Trivial, RepKind::Fund, RepKind::Fund, RepKind::Trivial]);
        for bad in ["", "fund", "fund,antifund,trivial", "a,b:c,d:e,f", "spinor,fund", "fund,"] {
            assert!(matches!(RepSpec::parse(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn suite_passes_and_fault_is_named() {
        let report = verify_suite(&config(2), false).unwrap();
        assert!(report.all_pass(), "{report}");
        let faulty = verify_suite(&config(3), true).unwrap();
        let failing: Vec<&str> = faulty.failures().map(|r| r.identity.as_str()).collect();
        assert!(failing.contains(&"poincare_weyl.[P,K]=-eps_i_dP"), "{failing:?}");
    }

    #[test]
    fn n1_suite_passes() {
        assert!(verify_suite(&config(1), false).unwrap().all_pass());
    }

    #[test]
    fn transform_rejects_wrong_lengths() {
        let err = transform_document(&config(2), None, None, vec![1.0, 0.0]).unwrap_err();
        assert!(matches!(err, CliError::Usage(_)));
    }
}
