//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use wml_bench::tomography::compare_tomography;
use wml_core::channels::{
    choi_trace_distance, exact_channel, is_cptp, ChoiState, DensityMatrix, JumpAction,
    LindbladSpec, SuperOperator,
};
use wml_core::engine::{
    build_m, build_m_poly, interleaved_to_canonical, poly_program_state, run, Algorithm, CycJump,
    LinearSpec, Mode, Ordering, PolySpec, Problem, Resource, RunConfig,
};
use wml_core::fit::loglog_fit;
use wml_core::lcu::lcu_prepare_linear;
use wml_core::program::{encode_operator, perturb_unit_operator, psi_distance};
use wml_core::tensor::{
    gamma_vector, kron, partial_trace, permute_subsystems, trace_norm, vec_inner, SystemDims,
};
use wml_core::Matrix;

type M = Matrix<f64>;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

/// Channels assembled by expectation-mode runs, checked together at the end.
#[derive(Default)]
struct Ledger {
    channels: Vec<(String, SuperOperator<f64>)>,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(r: &mut impl Rng, rows: usize, cols: usize) -> M {
    let data = (0..rows * cols)
        .map(|_| Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal)))
        .collect();
    M::from_vec(rows, cols, data).unwrap()
}

fn unit_operator(r: &mut impl Rng, d: usize) -> M {
    let g = gaussian(r, d, d);
    g.scale_real(1.0 / g.frobenius())
}

fn random_density(r: &mut impl Rng, d: usize) -> M {
    let g = gaussian(r, d, d);
    let p = g.dot(&g.adjoint());
    p.scale_real(1.0 / p.trace().re)
}

/// L ρ L† − ½{L†L, ρ} written out term by term.
fn dissipator(l: &M, rho: &M) -> M {
    let ld = l.adjoint();
    let mut out = l.dot(rho).dot(&ld);
    out -= &ld.dot(l).dot(rho).scale_real(0.5);
    out -= &rho.dot(&ld).dot(l).scale_real(0.5);
    out
}

fn standard_spec() -> LindbladSpec<f64> {
    let sigma = M::from_real(2, 2, &[0.75, 0.25, 0.25, 0.25]).unwrap();
    let l1 = M::unit(2, 0, 1);
    let l2 = M::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
        .unwrap()
        .scale_real(0.5 * std::f64::consts::FRAC_1_SQRT_2);
    LindbladSpec::new(2, vec![(-0.7, sigma)], vec![l1, l2]).unwrap()
}

fn plus_state() -> DensityMatrix<f64> {
    DensityMatrix::new(M::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap()).unwrap()
}

fn doubling(from: usize, to: usize) -> Vec<usize> {
    std::iter::successors(Some(from), |n| (n * 2 <= to).then_some(n * 2)).collect()
}

fn sweep_errors(
    alg: Algorithm,
    problem: &Problem<f64>,
    t: f64,
    ns: &[usize],
    ordering: Ordering,
    ledger: &mut Ledger,
) -> Vec<f64> {
    let rho = plus_state_for(problem.dim());
    ns.iter()
        .map(|&n| {
            let rep = run(
                alg,
                problem,
                &rho,
                &RunConfig::new(t, n).with_ordering(ordering),
            )
            .unwrap();
            ledger.channels.push((
                format!("alg {} {ordering:?} n={n}", alg.number()),
                rep.channel.unwrap(),
            ));
            rep.error_vs_oracle.unwrap()
        })
        .collect()
}

fn plus_state_for(d: usize) -> DensityMatrix<f64> {
    DensityMatrix::pure(&vec![Complex64::new(1.0, 0.0); d]).unwrap()
}

fn slope(ns: &[usize], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    loglog_fit(&xs, errs).map(|f| f.slope).unwrap_or(f64::NAN)
}

fn criterion_1(_: &mut Ledger) -> Outcome {
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for d in [2, 3] {
        let m = build_m::<f64>(d).unwrap();
        let dims = SystemDims::new(vec![d, d * d]).unwrap();
        for _ in 0..50 {
            let l = unit_operator(&mut r, d);
            let rho = random_density(&mut r, d);
            let big = kron(&rho, encode_operator(&l).unwrap().density().matrix()).unwrap();
            let reduced = partial_trace(&dissipator(&m, &big), &dims, &[0]).unwrap();
            worst = worst.max((&reduced - &dissipator(&l, &rho)).frobenius());
        }
    }
    Outcome::new(
        worst <= 1e-10,
        format!("max residual {worst:.2e} (limit 1e-10) over 100 pairs"),
    )
}

/// ⊗_ℓ (L_ℓ ⊗ I)ΓΓ†(L′_ℓ ⊗ I) with pairs interleaved, then reordered P-block first.
fn product_program(d: usize, ls: &[M], lps: &[M]) -> M {
    let g = gamma_vector::<f64>(d);
    let gg = M::outer(&g, &g);
    let id = M::identity(d);
    let mut acc = M::identity(1);
    for (l, lp) in ls.iter().zip(lps) {
        acc = kron(
            &acc,
            &kron(l, &id).unwrap().dot(&gg).dot(&kron(lp, &id).unwrap()),
        )
        .unwrap();
    }
    let deg = ls.len();
    let perm: Vec<usize> = (0..deg)
        .map(|i| 2 * i)
        .chain((0..deg).map(|i| 2 * i + 1))
        .collect();
    permute_subsystems(&acc, &SystemDims::uniform(d, 2 * deg).unwrap(), &perm).unwrap()
}

fn criterion_2(_: &mut Ledger) -> Outcome {
    let mut r = rng(2);
    let mut parts = Vec::new();
    let mut ok = true;
    for (d, deg, dense) in [(2usize, 2usize, true), (3, 2, true), (2, 3, false)] {
        let jump = CycJump::new(d, deg).unwrap();
        let m = dense.then(|| build_m_poly::<f64>(d, deg).unwrap());
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let ls: Vec<M> = (0..deg).map(|_| gaussian(&mut r, d, d)).collect();
            let lps: Vec<M> = (0..deg).map(|_| gaussian(&mut r, d, d)).collect();
            let rho = random_density(&mut r, d);
            let x = kron(&rho, &product_program(d, &ls, &lps)).unwrap();
            let got = match &m {
                Some(m) => {
                    let mdm = m.adjoint().dot(m);
                    [m.dot(&x).dot(&m.adjoint()), mdm.dot(&x), x.dot(&mdm)]
                }
                None => {
                    let left = |a: &M| JumpAction::<f64>::left(&jump, a);
                    let left_adj = |a: &M| JumpAction::<f64>::left_adjoint(&jump, a);
                    [
                        left(&left(&x).adjoint()).adjoint(),
                        left_adj(&left(&x)),
                        left_adj(&left(&x.adjoint())).adjoint(),
                    ]
                }
            };
            let lprod = ls.iter().fold(M::identity(d), |a, l| a.dot(l));
            let lpprod = lps.iter().rev().fold(M::identity(d), |a, l| a.dot(l));
            let want = [
                lprod.dot(&rho).dot(&lpprod),
                lpprod.dot(&lprod).dot(&rho),
                rho.dot(&lpprod).dot(&lprod),
            ];
            let dims = SystemDims::new(vec![d, x.rows() / d]).unwrap();
            for (g, w) in got.iter().zip(&want) {
                worst = worst.max((&partial_trace(g, &dims, &[0]).unwrap() - w).frobenius());
            }
        }
        ok &= worst <= 1e-9;
        parts.push(format!(
            "({d},{deg}{}) {worst:.1e}",
            if dense { "" } else { " action" }
        ));
    }
    Outcome::new(
        ok,
        format!("max residual per (d,D): {} (limit 1e-9)", parts.join(", ")),
    )
}

fn criterion_3(ledger: &mut Ledger) -> Outcome {
    let ns = doubling(8, 1024);
    let errs = sweep_errors(
        Algorithm::One,
        &Problem::Lindblad(standard_spec()),
        1.0,
        &ns,
        Ordering::Forward,
        ledger,
    );
    let s = slope(&ns, &errs);
    let ratio = errs[0] / errs[errs.len() - 1];
    Outcome::new(
        (-1.15..=-0.85).contains(&s) && ratio >= 64.0,
        format!("slope {s:.3} (range [-1.15, -0.85]), error ratio n=8/n=1024 {ratio:.1} (min 64)"),
    )
}

fn criterion_4(ledger: &mut Ledger) -> Outcome {
    let ns = doubling(16, 512);
    let problem = Problem::Lindblad(standard_spec());
    let fwd = sweep_errors(
        Algorithm::Two,
        &problem,
        1.0,
        &ns,
        Ordering::Forward,
        ledger,
    );
    let pal = sweep_errors(
        Algorithm::Two,
        &problem,
        1.0,
        &ns,
        Ordering::Palindromic,
        ledger,
    );
    let (sf, sp) = (slope(&ns, &fwd), slope(&ns, &pal));
    let below = fwd.iter().zip(&pal).filter(|(f, p)| p <= f).count();
    Outcome::new(
        (sf + 1.0).abs() <= 0.15 && (sp + 1.0).abs() <= 0.15 && below == ns.len(),
        format!(
            "slopes forward {sf:.3}, palindromic {sp:.3}; palindromic <= forward at {below}/{} n",
            ns.len()
        ),
    )
}

fn criterion_5(ledger: &mut Ledger) -> Outcome {
    let linear =
        LinearSpec::new(2, vec![(1.0, M::unit(2, 0, 1)), (1.0, M::unit(2, 1, 0))]).unwrap();
    let ns = doubling(8, 512);
    let errs = sweep_errors(
        Algorithm::Three,
        &Problem::Linear(linear),
        1.0,
        &ns,
        Ordering::Forward,
        ledger,
    );
    let s = slope(&ns, &errs);

    let mut r = rng(5);
    let (mut worst_fid, mut worst_p): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let terms: Vec<_> = (0..2)
            .map(|_| {
                (
                    0.1 + r.random::<f64>(),
                    encode_operator(&unit_operator(&mut r, 2)).unwrap(),
                )
            })
            .collect();
        let rep = lcu_prepare_linear(&terms).unwrap();
        let mut direct = [Complex64::new(0.0, 0.0); 4];
        for (w, p) in &terms {
            for (a, z) in direct.iter_mut().zip(p.amplitudes()) {
                *a += z * w;
            }
        }
        let c: f64 = direct.iter().map(|z| z.norm_sqr()).sum();
        let unit: Vec<Complex64> = direct.iter().map(|z| z / c.sqrt()).collect();
        let lambda: f64 = terms.iter().map(|(w, _)| w).sum();
        worst_fid = worst_fid.max(1.0 - vec_inner(rep.prepared.amps(), &unit).norm_sqr());
        worst_p = worst_p.max((rep.success_prob - c / (lambda * lambda)).abs());
    }
    Outcome::new(
        (s + 1.0).abs() <= 0.15 && worst_fid <= 1e-10 && worst_p <= 1e-12,
        format!("slope {s:.3}; max infidelity {worst_fid:.1e} (limit 1e-10); max success_prob error {worst_p:.1e} (limit 1e-12)"),
    )
}

fn criterion_6(ledger: &mut Ledger) -> Outcome {
    let l1 = M::unit(2, 0, 1);
    let l2 = M::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
        .unwrap()
        .scale_real(std::f64::consts::FRAC_1_SQRT_2);
    let poly = PolySpec::new(
        2,
        vec![l1.clone(), l2.clone()],
        vec![(vec![0, 1], 1.0), (vec![0], 1.0)],
    )
    .unwrap();
    let (phi, c) = poly_program_state(&poly).unwrap();
    let canon = interleaved_to_canonical(&phi, 2, 2).unwrap();
    let m = build_m_poly::<f64>(2, 2).unwrap();
    let target = &l1.dot(&l2) + &l1;
    let dims = SystemDims::new(vec![2, 16]).unwrap();
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let rho = random_density(&mut r, 2);
        let big = kron(&rho, &M::outer(&canon, &canon)).unwrap();
        let red = partial_trace(&dissipator(&m, &big), &dims, &[0]).unwrap();
        worst = worst
            .max(trace_norm(&(&red - &dissipator(&target, &rho).scale_real(1.0 / c))).unwrap());
    }
    let ns = doubling(8, 256);
    let errs = sweep_errors(
        Algorithm::Four,
        &Problem::Poly(poly),
        1.0,
        &ns,
        Ordering::Forward,
        ledger,
    );
    let s = slope(&ns, &errs);
    Outcome::new(
        worst <= 1e-9 && (s + 1.0).abs() <= 0.15,
        format!("first-order residual {worst:.1e} (limit 1e-9); slope {s:.3}"),
    )
}

fn criterion_7(_: &mut Ledger) -> Outcome {
    let mut r = rng(7);
    let (mut eq, mut excess): (f64, f64) = (0.0, f64::NEG_INFINITY);
    for i in 0..100 {
        let l = unit_operator(&mut r, 2);
        let lt = if i % 2 == 0 {
            unit_operator(&mut r, 2)
        } else {
            let delta = 1e-3 + 1.4 * r.random::<f64>();
            perturb_unit_operator(&l, delta, &mut r).unwrap()
        };
        let d = psi_distance(&l, &lt).unwrap();
        eq = eq.max((d.trace_dist - d.overlap_formula).abs());
        excess = excess.max(d.trace_dist - d.hs_dist);
    }
    Outcome::new(
        eq <= 1e-10 && excess <= 0.0,
        format!("max equality residual {eq:.1e} (limit 1e-10); max(trace distance - HS distance) {excess:.3}"),
    )
}

fn criterion_8(_: &mut Ledger) -> Outcome {
    let mut r = rng(8);
    let mut worst_ratio: f64 = 0.0;
    for &delta in &[0.02, 0.05, 0.1] {
        for &t in &[0.5, 1.0] {
            for _ in 0..20 {
                let l = unit_operator(&mut r, 2);
                let lt = perturb_unit_operator(&l, delta, &mut r).unwrap();
                let a = exact_channel(&LindbladSpec::from_jumps(2, vec![l]).unwrap(), t, 1e-13)
                    .unwrap();
                let b = exact_channel(&LindbladSpec::from_jumps(2, vec![lt]).unwrap(), t, 1e-13)
                    .unwrap();
                let dist = choi_trace_distance(
                    &ChoiState::of_superop(&a).unwrap(),
                    &ChoiState::of_superop(&b).unwrap(),
                )
                .unwrap();
                worst_ratio = worst_ratio.max(dist / (2.0 * delta * t));
            }
        }
    }
    Outcome::new(
        worst_ratio <= 1.0,
        format!("max distance / (2 delta t) = {worst_ratio:.3} (limit 1) over 120 instances"),
    )
}

fn criterion_9(_: &mut Ledger) -> Outcome {
    let rows = compare_tomography(&[2, 4, 8, 16], 0.1, 1.0).unwrap();
    let constant = rows.iter().all(|r| r.wml_copies == rows[0].wml_copies);
    let increasing = rows
        .windows(2)
        .all(|w| w[1].tomography_bound > w[0].tomography_bound);
    let v = rows[0].tomography_bound;
    Outcome::new(
        constant && increasing && (v - 87.8).abs() <= 0.1,
        format!(
            "WML copies {} at every d: {constant}; tomography increasing: {increasing}; d=2 bound {v:.2} (target 87.8 +- 0.1)",
            rows[0].wml_copies
        ),
    )
}

fn criterion_10(ledger: &mut Ledger) -> Outcome {
    let mut failed = Vec::new();
    let mut worst: f64 = 0.0;
    for (name, ch) in &ledger.channels {
        let rep = is_cptp(ch, 1e-8).unwrap();
        worst = worst.max(
            (-rep.min_choi_eigenvalue)
                .max(rep.tp_deviation)
                .max(rep.hermiticity_error),
        );
        if !rep.passed {
            failed.push(name.clone());
        }
    }
    Outcome::new(
        failed.is_empty() && !ledger.channels.is_empty(),
        format!(
            "{} channels, worst violation {worst:.1e} (limit 1e-8), failures {failed:?}",
            ledger.channels.len()
        ),
    )
}

fn criterion_11(_: &mut Ledger) -> Outcome {
    let spec = standard_spec();
    let problem = Problem::Lindblad(spec.clone());
    let rho = plus_state();
    let n = 16;
    let expect = run(Algorithm::One, &problem, &rho, &RunConfig::new(1.0, n))
        .unwrap()
        .final_state;
    let counts = [25usize, 100, 400, 1600];
    let replicates = 16u64;
    let rms: Vec<f64> = counts
        .iter()
        .map(|&t| {
            let sq: f64 = (0..replicates)
                .map(|k| {
                    let mode = Mode::MonteCarlo {
                        seed: 11_000 + 100 * t as u64 + k,
                        trajectories: t,
                    };
                    let mean = run(
                        Algorithm::One,
                        &problem,
                        &rho,
                        &RunConfig::new(1.0, n).with_mode(mode),
                    )
                    .unwrap()
                    .final_state;
                    trace_norm(&(mean.matrix() - expect.matrix()))
                        .unwrap()
                        .powi(2)
                })
                .sum();
            (sq / replicates as f64).sqrt()
        })
        .collect();
    let s = slope(&counts, &rms);

    let (steps, trajectories) = (100usize, 1000usize);
    let mode = Mode::MonteCarlo {
        seed: 11,
        trajectories,
    };
    let rep = run(
        Algorithm::One,
        &problem,
        &rho,
        &RunConfig::new(1.0, steps).with_mode(mode),
    )
    .unwrap();
    let draws = (steps * trajectories) as f64;
    let c = spec.normalization();
    let mut probs: Vec<(Resource, f64)> = spec
        .hamiltonian_terms()
        .iter()
        .enumerate()
        .map(|(j, (cj, _))| (Resource::Sigma(j), cj.abs() / c))
        .collect();
    probs.extend(
        spec.jumps()
            .iter()
            .enumerate()
            .map(|(k, l)| (Resource::Psi(k), l.frobenius().powi(2) / c)),
    );
    let z = probs
        .iter()
        .map(|(res, p)| {
            let got = rep.consumed.get(res).copied().unwrap_or(0) as f64;
            (got - draws * p).abs() / (draws * p * (1.0 - p)).sqrt()
        })
        .fold(0.0, f64::max);
    Outcome::new(
        (s + 0.5).abs() <= 0.2 && z <= 3.0,
        format!("RMS slope {s:.3} (target -0.5 +- 0.2); max |z| of branch counts {z:.2} (limit 3) at 1e5 draws"),
    )
}

type Criterion = (
    u8,
    &'static str,
    Option<Duration>,
    fn(&mut Ledger) -> Outcome,
);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (
            1,
            "first-order generator identity",
            Some(Duration::from_secs(5)),
            criterion_1,
        ),
        (
            2,
            "cyclic-swap trace identities",
            Some(Duration::from_secs(60)),
            criterion_2,
        ),
        (
            3,
            "algorithm 1 scaling",
            Some(Duration::from_secs(120)),
            criterion_3,
        ),
        (
            4,
            "algorithm 2 orderings",
            Some(Duration::from_secs(180)),
            criterion_4,
        ),
        (5, "algorithm 3 and LCU preparation", None, criterion_5),
        (6, "algorithm 4 polynomial jump", None, criterion_6),
        (7, "program-state distance", None, criterion_7),
        (8, "perturbed jump channel distance", None, criterion_8),
        (9, "tomography comparison", None, criterion_9),
        (10, "CPTP integrity", None, criterion_10),
        (11, "Monte-Carlo consistency", None, criterion_11),
    ];
    let mut ledger = Ledger::default();
    let mut failures = 0;
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let out = f(&mut ledger);
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let passed = out.passed && in_time;
        if !passed {
            failures += 1;
        }
        let budget = limit
            .map(|l| format!(", limit {} s", l.as_secs()))
            .unwrap_or_default();
        println!(
            "criterion {id:>2} {} {name}: {} ({:.2} s{budget})",
            if passed { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
