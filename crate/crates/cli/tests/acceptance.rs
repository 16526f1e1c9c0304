//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use npw_cli::{cmd_verify, RunConfig};
use npw_core::geometry::{find_interval_witness, finite_boost_leakage, subspace_indices};
use npw_core::momentum::{verify_momentum_solution, verify_similarity};
use npw_core::structure::verify_closure;
use npw_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x6e70_7731;

struct Gate {
    failed: usize,
}

impl Gate {
    fn check(&mut self, id: usize, title: &str, pass: bool, detail: String) {
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {verdict}  {title}: {detail}");
        self.failed += usize::from(!pass);
    }
}

fn utility(n: usize) -> (HermitianBasis, StructureConstants) {
    let basis = build_utility_basis(n).unwrap();
    let sc = compute_structure_constants(&basis, 1e-12).unwrap();
    (basis, sc)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn uniform(rng: &mut ChaCha8Rng, len: usize, w: f64) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-w..w)).collect()
}

fn unit(mut v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

fn within_ball(v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 1.0 {
        unit(v)
    } else {
        v
    }
}

fn worst(report: &VerificationReport) -> f64 {
    report.max_residual()
}

fn basis_correctness(gate: &mut Gate) {
    let start = Instant::now();
    let mut ortho = 0.0f64;
    let mut trace = 0.0f64;
    let mut count_ok = true;
    for n in 1..=6 {
        let b = build_utility_basis(n).unwrap();
        count_ok &= b.matrices().len() == n * n;
        ortho = ortho.max(b.orthonormality_residual());
        let t = b.matrices()[b.time_index()].trace();
        trace = trace.max((t - Complex64::new((n as f64 / 2.0).sqrt(), 0.0)).norm());
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = count_ok && ortho < 1e-12 && trace < 1e-12 && secs < 1.0;
    gate.check(
        1,
        "basis correctness, N = 1..6",
        pass,
        format!("orthonormality {ortho:.1e}, time trace {trace:.1e} (tol 1e-12), {secs:.3} s (limit 1 s)"),
    );
}

fn structure_symmetry(gate: &mut Gate) {
    let mut sym = 0.0f64;
    let mut closure = 0.0f64;
    for n in 1..=6 {
        let (basis, sc) = utility(n);
        sym = sym.max(worst(&verify_symmetries(&sc, 1e-12)));
        closure = closure.max(worst(&verify_closure(&basis, &sc, 1e-12)));
    }
    let pass = sym < 1e-12 && closure < 1e-12;
    gate.check(
        2,
        "structure symmetry, N = 1..6",
        pass,
        format!("symmetry {sym:.1e}, closure {closure:.1e} (tol 1e-12)"),
    );
}

fn time_index(gate: &mut Gate) {
    let mut r = 0.0f64;
    for n in 1..=6 {
        r = r.max(worst(&verify_time_index(&utility(n).1, 1e-12)));
    }
    gate.check(3, "time-index identities, N = 1..6", r < 1e-12, format!("max residual {r:.1e} (tol 1e-12)"));
}

fn algebra_suites(gate: &mut Gate) {
    let start = Instant::now();
    let mut pass = true;
    let mut details = Vec::new();
    for n in 1..=6 {
        let tol = if n <= 4 { 1e-12 } else { 1e-10 };
        let (basis, sc) = utility(n);
        let mut r = 0.0f64;
        for eps in [Sign::Plus, Sign::Minus] {
            let g2n = build_2n_generators(&basis, eps, one()).unwrap();
            let gn2 = build_n2_generators(&sc, eps);
            r = r.max(worst(&verify_poincare_weyl(&g2n, &sc, tol)));
            r = r.max(worst(&verify_lorentz_weyl(&gn2, &sc, tol)));
        }
        pass &= r < tol;
        details.push(format!("N={n} {r:.1e}"));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 60.0;
    gate.check(
        4,
        "Poincare-Weyl (2N) and Lorentz-Weyl (N²) suites",
        pass,
        format!("{} (tol 1e-12 to N=4, 1e-10 above), {secs:.2} s (limit 60 s)", details.join(", ")),
    );
}

fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    if a > 2 || b > 2 || c > 2 {
        return 0.0;
    }
    let (i, j, k) = (a as f64, b as f64, c as f64);
    (j - i) * (k - i) * (k - j) / 2.0
}

fn copycat(gate: &mut Gate) {
    let mut cross = 0.0f64;
    for n in 1..=4 {
        let (basis, sc) = utility(n);
        for eps in [Sign::Plus, Sign::Minus] {
            let g = build_2n_generators(&basis, eps, one()).unwrap();
            let e = extract_copycat(&g, 1e-12).unwrap();
            cross = cross.max(e.max_abs_diff(&build_n2_generators(&sc, eps)));
        }
    }
    // N = 2: j^a_{μν} = i ε_{μaν}, k^a_{μν} = -i(δ_{μa}δ_{νt} + δ_{νa}δ_{μt}), k^t = -i
    let (basis, _) = utility(2);
    let e = extract_copycat(&build_2n_generators(&basis, Sign::Plus, one()).unwrap(), 1e-12).unwrap();
    let delta = |a: usize, b: usize| f64::from(a == b);
    let mut n2 = 0.0f64;
    for a in 0..4 {
        for mu in 0..4 {
            for nu in 0..4 {
                let jw = Complex64::new(0.0, levi_civita(mu, a, nu));
                let kw = if a == 3 {
                    Complex64::new(0.0, -delta(mu, nu))
                } else {
                    Complex64::new(0.0, -(delta(mu, a) * delta(nu, 3) + delta(nu, a) * delta(mu, 3)))
                };
                n2 = n2.max((e.j[a][(mu, nu)] - jw).norm()).max((e.k[a][(mu, nu)] - kw).norm());
            }
        }
    }
    let pass = cross < 1e-12 && n2 < 1e-12;
    gate.check(
        5,
        "CopyCat cross-check",
        pass,
        format!("N<=4 extracted vs direct {cross:.1e}, N=2 closed form {n2:.1e} (tol 1e-12)"),
    );
}

fn lorentz_recovery(gate: &mut Gate) {
    let (_, sc) = utility(2);
    let g = build_n2_generators(&sc, Sign::Plus);
    let transform = |theta: Vec<f64>, phi: Vec<f64>| {
        build_transform(&g, &TransformParams { theta, phi, eps: Sign::Plus }, 1e-12).unwrap()
    };
    let mut rot = 0.0f64;
    for th in [0.3f64, FRAC_PI_2, 2.0] {
        let (s, c) = th.sin_cos();
        let want = [c, s, 0., 0., -s, c, 0., 0., 0., 0., 1., 0., 0., 0., 0., 1.];
        let d = transform(vec![0.0, 0.0, th, 0.0], vec![0.0; 4]);
        rot = rot.max(d.max_abs_diff(&Transform::from_rows(4, want.to_vec()).unwrap()));
    }
    let mut boost = 0.0f64;
    for ph in [0.5f64, 1.0] {
        let (ch, sh) = (ph.cosh(), ph.sinh());
        let want = [1., 0., 0., 0., 0., 1., 0., 0., 0., 0., ch, sh, 0., 0., sh, ch];
        let d = transform(vec![0.0; 4], vec![0.0, 0.0, ph, 0.0]);
        boost = boost.max(d.max_abs_diff(&Transform::from_rows(4, want.to_vec()).unwrap()));
    }
    let pt = 0.8f64;
    let d = transform(vec![0.0; 4], vec![0.0, 0.0, 0.0, pt]);
    let mut scale = vec![0.0; 16];
    for i in 0..4 {
        scale[i * 5] = pt.exp();
    }
    let time = d.max_abs_diff(&Transform::from_rows(4, scale).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut interval = 0.0f64;
    for _ in 0..100 {
        let mut phi = uniform(&mut rng, 4, 1.0);
        phi[3] = 0.0;
        let e = Event::new(uniform(&mut rng, 4, 1.0));
        interval = interval.max(finite_boost_leakage(&g, &phi, &e, 1e-12).unwrap().abs());
    }
    let pass = rot < 1e-12 && boost < 1e-12 && time < 1e-12 && interval < 1e-10;
    gate.check(
        6,
        "N = 2 Lorentz recovery",
        pass,
        format!(
            "rotation {rot:.1e}, boost {boost:.1e}, time boost {time:.1e} (tol 1e-12), interval over 100 events {interval:.1e} (tol 1e-10)"
        ),
    );
}

fn rotation_invariance(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut dist = 0.0f64;
    let mut time = 0.0f64;
    for n in 2..=6 {
        let dim = n * n;
        let g = build_n2_generators(&utility(n).1, Sign::Plus);
        for _ in 0..100 {
            let theta = uniform(&mut rng, dim, PI);
            let e = Event::new(uniform(&mut rng, dim, 1.0));
            let (d, t) = rotation_invariance_check(&g, &theta, &e, 1e-12).unwrap();
            dist = dist.max(d);
            time = time.max(t);
        }
    }
    let pass = dist < 1e-10 && time < 1e-10;
    gate.check(
        7,
        "rotation invariance, N = 2..6, 100 trials each",
        pass,
        format!("distance {dist:.1e}, time {time:.1e} (tol 1e-10)"),
    );
}

fn interval_witness(gate: &mut Gate) {
    let (_, sc) = utility(3);
    let w = find_interval_witness(&sc, Sign::Plus);
    let change = w.as_ref().map_or(0.0, |w| w.change.abs());
    let norms_ok = w.as_ref().is_some_and(|w| {
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        (norm(&w.dphi) - 1.0).abs() < 1e-12 && (norm(&w.x) - 1.0).abs() < 1e-12
    });
    let idx = subspace_indices(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut restricted = 0.0f64;
    for _ in 0..100 {
        let dphi = unit(uniform(&mut rng, 3, 1.0));
        let xs = unit(uniform(&mut rng, 4, 1.0));
        let mut x = vec![0.0; 9];
        for (k, i) in idx.iter().enumerate() {
            x[*i] = xs[k];
        }
        for eps in [Sign::Plus, Sign::Minus] {
            let v = subspace_invariance_check(&sc, &Event::new(x.clone()), [dphi[0], dphi[1], dphi[2]], eps).unwrap();
            restricted = restricted.max(v.abs());
        }
    }
    let pass = norms_ok && change > 1e-3 && restricted < 1e-12;
    gate.check(
        8,
        "non-invariance witness, N = 3",
        pass,
        format!("unit witness |change| {change:.3} (need > 1e-3), subspace {restricted:.1e} (tol 1e-12)"),
    );
}

fn covariance(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut r = 0.0f64;
    for n in 1..=4 {
        let dim = n * n;
        let (basis, sc) = utility(n);
        for eps in [Sign::Plus, Sign::Minus] {
            let g2n = build_2n_generators(&basis, eps, one()).unwrap();
            let gn2 = build_n2_generators(&sc, eps);
            for _ in 0..50 {
                let p = TransformParams {
                    theta: within_ball(uniform(&mut rng, dim, 1.0)),
                    phi: within_ball(uniform(&mut rng, dim, 1.0)),
                    eps,
                };
                r = r.max(worst(&covariance_check(&g2n, &gn2, &p, 1e-9).unwrap()));
            }
        }
    }
    gate.check(9, "covariance, 50 draws per N <= 4", r < 1e-9, format!("max residual {r:.1e} (tol 1e-9)"));
}

fn similarity(gate: &mut Gate) {
    let mut s = 0.0f64;
    for n in 1..=6 {
        let (basis, sc) = utility(n);
        let sim = build_similarity(&basis).unwrap();
        for eps in [Sign::Plus, Sign::Minus] {
            s = s.max(worst(&verify_similarity(&sim, &basis, &sc, eps, 1e-12)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let mut change = 0.0f64;
    for n in 1..=3 {
        let dim = n * n;
        let (basis, _) = utility(n);
        for trial in 0..10 {
            let mut r: Vec<f64> = uniform(&mut rng, dim * dim, 0.5);
            for i in 0..dim {
                r[i * dim + i] += 1.5;
            }
            let eps = if trial % 2 == 0 { Sign::Plus } else { Sign::Minus };
            let report = basis_change_covariance(&basis, &BasisChange::new(dim, r).unwrap(), eps, 1e-10).unwrap();
            change = change.max(worst(&report));
        }
    }
    let pass = s < 1e-12 && change < 1e-10;
    gate.check(
        10,
        "similarity identities and basis-change covariance",
        pass,
        format!("S identities N<=6 {s:.1e} (tol 1e-12), 10 random R per N<=3 {change:.1e} (tol 1e-10)"),
    );
}

fn momentum(gate: &mut Gate) {
    let (basis, sc) = utility(2);
    let sim = build_similarity(&basis).unwrap();
    let rep = |a, b| CombinedRep::from_kinds(a, b, &basis, &sc, 1e-10).unwrap();

    // (2+2): P^μ = (0, h^μ; 0, 0) for ε = +1, mirrored for ε = -1
    let ab = rep(RepKind::Trivial, RepKind::Fund);
    let cd = rep(RepKind::Fund, RepKind::Trivial);
    let zero = ComplexMatrix::zeros(2, 2);
    let mut projection = 0.0f64;
    for eps in [Sign::Plus, Sign::Minus] {
        let side = BlockSide::default_for(eps);
        let sol = solve_momentum(&ab, &cd, &sc, eps, side, 1e-10).unwrap();
        let target: Vec<_> = basis
            .matrices()
            .iter()
            .map(|h| match side {
                BlockSide::Upper => ComplexMatrix::from_blocks(&zero, h, &zero, &zero),
                BlockSide::Lower => ComplexMatrix::from_blocks(&zero, &zero, h, &zero),
            })
            .collect();
        projection =
            projection.max(if sol.basis_dim() == 0 { f64::INFINITY } else { sol.projection_residual(&target) });
    }

    let mut relations = 0.0f64;
    let mut commute = 0.0f64;
    let mut ratio = 0.0f64;
    let mut solutions = 0;
    let mut rank_checks = 0;
    for eps in [Sign::Plus, Sign::Minus] {
        for [a, b] in [[RepKind::Fund, RepKind::Antifund], [RepKind::Trivial, RepKind::Fund]] {
            let ab = rep(a, b);
            for c in RepKind::ALL {
                for d in RepKind::ALL {
                    let cd = rep(c, d);
                    for side in [BlockSide::Upper, BlockSide::Lower] {
                        let sol = solve_momentum(&ab, &cd, &sc, eps, side, 1e-10).unwrap();
                        if sol.basis_dim() == 0 {
                            continue;
                        }
                        solutions += sol.basis_dim();
                        let report = verify_momentum_solution(&sol, &ab, &cd, &sc, 1e-10, 1e-12);
                        for r in &report.records {
                            if r.identity == "momentum.[P,P]=0" {
                                commute = commute.max(r.residual);
                            } else {
                                relations = relations.max(r.residual);
                            }
                        }
                        if sol.basis_dim() == 1 && [a, b, c, d].iter().all(|k| k.is_irreducible()) {
                            ratio = ratio.max(npw_core::momentum::cg_rank_ratio(&sol, &sim).unwrap());
                            rank_checks += 1;
                        }
                    }
                }
            }
        }
    }
    let pass = projection < 1e-10 && relations < 1e-10 && commute < 1e-12 && ratio < 1e-8 && rank_checks > 0;
    gate.check(
        11,
        "momentum solver, N = 2",
        pass,
        format!(
            "(2+2) projection {projection:.1e} (tol 1e-10), {solutions} solutions: relations {relations:.1e} (tol 1e-10), \
             commutators {commute:.1e} (tol 1e-12), rank-one ratio over {rank_checks} pairings {ratio:.1e} (tol 1e-8)"
        ),
    );
}

fn determinism(gate: &mut Gate) {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let config = RunConfig::new(3, Sign::Minus, 1e-10, 20251014, Some(path.clone())).unwrap();
        cmd_verify(&config, false, &mut std::io::sink()).unwrap();
        fs::read(path).unwrap()
    };
    let (a, b) = (run("a.json"), run("b.json"));
    gate.check(
        12,
        "determinism of cmd_verify",
        !a.is_empty() && a == b,
        format!("two seeded runs, {} bytes, identical = {}", a.len(), a == b),
    );
}

fn main() -> ExitCode {
    let mut gate = Gate { failed: 0 };
    basis_correctness(&mut gate);
    structure_symmetry(&mut gate);
    time_index(&mut gate);
    algebra_suites(&mut gate);
    copycat(&mut gate);
    lorentz_recovery(&mut gate);
    rotation_invariance(&mut gate);
    interval_witness(&mut gate);
    covariance(&mut gate);
    similarity(&mut gate);
    momentum(&mut gate);
    determinism(&mut gate);
    if gate.failed == 0 {
        println!("acceptance: 12 of 12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} of 12 criteria fail", gate.failed);
        ExitCode::FAILURE
    }
}
