//! `verify-lemmas`: randomized checks of the identities the algorithms rest on.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use wml_core::channels::{is_cptp, DensityMatrix, JumpAction, LindbladSpec};
use wml_core::engine::{
    build_m_poly, channel_of_algorithm, run, Algorithm, CycJump, LinearSpec, Mode, PolySpec,
    Problem, Resource, RunConfig,
};
use wml_core::fit::loglog_fit;
use wml_core::program::{encode_operator, perturb_unit_operator, psi_distance, OmegaSampler};
use wml_core::tensor::{
    gamma_vector, hs_inner, kron, partial_trace, permute_subsystems, swap_operator, trace_norm,
    vec_inner, SystemDims,
};
use wml_core::Matrix;

use crate::error::Result;

type M = Matrix<f64>;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub trials: usize,
    /// Drop the normalization of M; the identities built on it must then fail.
    pub corrupt_m: bool,
    /// Replaces the tolerance of every exact identity.
    pub tol: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 50,
            corrupt_m: false,
            tol: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LemmaReport {
    pub seed: u64,
    pub trials: usize,
    pub corrupt_m: bool,
    pub checks: Vec<Check>,
}

impl LemmaReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }
}

fn check(name: impl Into<String>, residuals: &[f64], tolerance: f64) -> Check {
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let finite = residuals.iter().all(|r| r.is_finite());
    Check {
        name: name.into(),
        samples: residuals.len(),
        max_residual,
        tolerance,
        passed: finite && max_residual <= tolerance,
    }
}

fn gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> M {
    let data = (0..rows * cols)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    M::from_vec(rows, cols, data).expect("finite samples")
}

fn unit_operator(rng: &mut impl Rng, d: usize) -> M {
    let g = gaussian(rng, d, d);
    g.scale_real(1.0 / g.frobenius())
}

fn random_density(rng: &mut impl Rng, d: usize) -> M {
    let g = gaussian(rng, d, d);
    let p = g.dot(&g.adjoint());
    p.scale_real(1.0 / p.trace().re)
}

fn dissipator(l: &M, rho: &M) -> M {
    let ld = l.adjoint();
    let ldl = ld.dot(l);
    let mut out = l.dot(rho).dot(&ld);
    out -= &ldl.dot(rho).scale_real(0.5);
    out -= &rho.dot(&ldl).scale_real(0.5);
    out
}

/// M, optionally without its d^{−D/2} prefactor.
struct Interaction {
    jump: CycJump,
    scale: f64,
}

impl Interaction {
    fn new(d: usize, degree: usize, corrupt: bool) -> Result<Self> {
        let jump = CycJump::new(d, degree)?;
        let scale = if corrupt {
            (d.pow(degree as u32) as f64).sqrt()
        } else {
            1.0
        };
        Ok(Self { jump, scale })
    }

    fn dense(&self) -> Result<M> {
        Ok(build_m_poly::<f64>(self.jump.d(), self.jump.degree())?.scale_real(self.scale))
    }

    fn left(&self, x: &M) -> M {
        JumpAction::<f64>::left(&self.jump, x).scale_real(self.scale)
    }

    fn left_adjoint(&self, x: &M) -> M {
        JumpAction::<f64>::left_adjoint(&self.jump, x).scale_real(self.scale)
    }
}

fn encoding_isometry(rng: &mut impl Rng, trials: usize) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for d in [2, 3] {
        for _ in 0..trials {
            let a = gaussian(rng, d, d);
            let b = gaussian(rng, d, d);
            let lhs = vec_inner(
                encode_operator(&a)?.amplitudes(),
                encode_operator(&b)?.amplitudes(),
            );
            let rhs = hs_inner(&a, &b)? / (a.frobenius() * b.frobenius());
            out.push((lhs - rhs).norm());
        }
    }
    Ok(out)
}

/// Residuals of the trace-distance equality and of the bound, for unit pairs
/// that are either independent or close.
fn program_distance(rng: &mut impl Rng, trials: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (mut eq, mut bound) = (Vec::new(), Vec::new());
    for d in [2, 3] {
        for i in 0..trials {
            let l = unit_operator(rng, d);
            let lt = if i % 2 == 0 {
                unit_operator(rng, d)
            } else {
                let delta = 1e-3 + rng.random::<f64>() * 1.4;
                perturb_unit_operator(&l, delta, rng)?
            };
            let dist = psi_distance(&l, &lt)?;
            eq.push((dist.trace_dist - dist.overlap_formula).abs());
            bound.push((dist.trace_dist - dist.hs_dist).max(0.0));
        }
    }
    Ok((eq, bound))
}

fn first_order(rng: &mut impl Rng, trials: usize, corrupt: bool) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for d in [2, 3] {
        let m = Interaction::new(d, 1, corrupt)?.dense()?;
        let dims = SystemDims::new(vec![d, d * d])?;
        for _ in 0..trials {
            let l = unit_operator(rng, d);
            let rho = random_density(rng, d);
            let big = kron(&rho, encode_operator(&l)?.density().matrix())?;
            let reduced = partial_trace(&dissipator(&m, &big), &dims, &[0])?;
            out.push((&reduced - &dissipator(&l, &rho)).frobenius());
        }
    }
    Ok(out)
}

fn partial_swap(rng: &mut impl Rng, trials: usize) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let minus_i = Complex64::new(0.0, -1.0);
    for d in [2, 3] {
        let s = swap_operator::<f64>(d);
        let dims = SystemDims::new(vec![d, d])?;
        for _ in 0..trials {
            let rho = random_density(rng, d);
            let sigma = random_density(rng, d);
            let big = kron(&rho, &sigma)?;
            let lhs = partial_trace(&s.commutator(&big).scale(minus_i), &dims, &[0])?;
            let rhs = sigma.commutator(&rho).scale(minus_i);
            out.push((&lhs - &rhs).frobenius());
        }
    }
    Ok(out)
}

/// ⊗_ℓ (L_ℓ ⊗ I)ΓΓ†(L′_ℓ ⊗ I) reordered from P¹Q¹…P^DQ^D to P¹…P^D Q¹…Q^D.
fn product_program(d: usize, ls: &[M], lps: &[M]) -> Result<M> {
    let g = gamma_vector::<f64>(d);
    let gg = M::outer(&g, &g);
    let id = M::identity(d);
    let mut acc = M::identity(1);
    for (l, lp) in ls.iter().zip(lps) {
        let f = kron(l, &id)?.dot(&gg).dot(&kron(lp, &id)?);
        acc = kron(&acc, &f)?;
    }
    let degree = ls.len();
    let perm: Vec<usize> = (0..degree)
        .map(|i| 2 * i)
        .chain((0..degree).map(|i| 2 * i + 1))
        .collect();
    Ok(permute_subsystems(
        &acc,
        &SystemDims::uniform(d, 2 * degree)?,
        &perm,
    )?)
}

/// Largest residual of the three cyclic-swap trace identities per sample.
fn cyclic_swap(
    rng: &mut impl Rng,
    d: usize,
    degree: usize,
    dense: bool,
    trials: usize,
    corrupt: bool,
) -> Result<Vec<f64>> {
    let inter = Interaction::new(d, degree, corrupt)?;
    let m = if dense { Some(inter.dense()?) } else { None };
    let mut out = Vec::new();
    for _ in 0..trials {
        let ls: Vec<M> = (0..degree).map(|_| unit_operator(rng, d)).collect();
        let lps: Vec<M> = (0..degree).map(|_| unit_operator(rng, d)).collect();
        let rho = random_density(rng, d);
        let x = kron(&rho, &product_program(d, &ls, &lps)?)?;
        let (mxm, mdm_x, x_mdm) = match &m {
            Some(m) => {
                let mdm = m.adjoint().dot(m);
                (m.dot(&x).dot(&m.adjoint()), mdm.dot(&x), x.dot(&mdm))
            }
            None => (
                inter.left(&inter.left(&x).adjoint()).adjoint(),
                inter.left_adjoint(&inter.left(&x)),
                inter.left_adjoint(&inter.left(&x.adjoint())).adjoint(),
            ),
        };
        let dims = SystemDims::new(vec![d, x.rows() / d])?;
        let lprod = ls.iter().fold(M::identity(d), |a, l| a.dot(l));
        let lpprod = lps.iter().rev().fold(M::identity(d), |a, l| a.dot(l));
        let want = [
            lprod.dot(&rho).dot(&lpprod),
            lpprod.dot(&lprod).dot(&rho),
            rho.dot(&lpprod).dot(&lprod),
        ];
        let mut worst: f64 = 0.0;
        for (got, want) in [mxm, mdm_x, x_mdm].iter().zip(&want) {
            worst = worst.max((&partial_trace(got, &dims, &[0])? - want).frobenius());
        }
        out.push(worst);
    }
    Ok(out)
}

/// Spec with J = 1, K = 2 shared by the sampling and channel checks.
pub fn reference_spec() -> Result<LindbladSpec<f64>> {
    let sigma = M::from_real(2, 2, &[0.75, 0.25, 0.25, 0.25])?;
    let l1 = M::unit(2, 0, 1);
    let l2 = M::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])?
        .scale_real(0.5 * std::f64::consts::FRAC_1_SQRT_2);
    Ok(LindbladSpec::new(2, vec![(-0.7, sigma)], vec![l1, l2])?)
}

fn reference_state() -> Result<DensityMatrix<f64>> {
    Ok(DensityMatrix::new(M::from_real(
        2,
        2,
        &[0.5, 0.5, 0.5, 0.5],
    )?)?)
}

/// χ² statistic of 10⁵ draws of ω's register against its distribution.
fn omega_chi_square(rng: &mut impl Rng) -> Result<f64> {
    let sampler = OmegaSampler::new(&reference_spec()?)?;
    let dist: Vec<_> = sampler.distribution().collect();
    let draws = 100_000;
    let mut counts = vec![0usize; dist.len()];
    for _ in 0..draws {
        let s = sampler.sample(rng);
        let i = dist
            .iter()
            .position(|(o, _)| *o == s)
            .expect("sampled outcome is listed");
        counts[i] += 1;
    }
    Ok(dist
        .iter()
        .zip(&counts)
        .map(|((_, p), &k)| {
            let e = p * draws as f64;
            (k as f64 - e).powi(2) / e
        })
        .sum())
}

/// Worst CPTP violation over the channels of all four algorithms.
fn cptp_violations(tol: f64) -> Result<Vec<f64>> {
    let linear = LinearSpec::new(2, vec![(1.0, M::unit(2, 0, 1)), (1.0, M::unit(2, 1, 0))])?;
    let x = M::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])?.scale_real(std::f64::consts::FRAC_1_SQRT_2);
    let poly = PolySpec::new(
        2,
        vec![M::unit(2, 0, 1), x],
        vec![(vec![0, 1], 1.0), (vec![0], 1.0)],
    )?;
    let cases = [
        (Algorithm::One, Problem::Lindblad(reference_spec()?)),
        (Algorithm::Two, Problem::Lindblad(reference_spec()?)),
        (Algorithm::Three, Problem::Linear(linear)),
        (Algorithm::Four, Problem::Poly(poly)),
    ];
    let mut out = Vec::new();
    for (alg, problem) in &cases {
        for n in [4, 16] {
            let ch = channel_of_algorithm(*alg, problem, &RunConfig::new(1.0, n))?;
            let rep = is_cptp(&ch, tol)?;
            out.push(
                (-rep.min_choi_eigenvalue)
                    .max(rep.tp_deviation)
                    .max(rep.hermiticity_error)
                    .max(0.0),
            );
        }
    }
    Ok(out)
}

/// |slope + ½| of the RMS trajectory-mean error against trajectory count.
fn monte_carlo_slope(seed: u64) -> Result<f64> {
    let spec = reference_spec()?;
    let rho = reference_state()?;
    let problem = Problem::Lindblad(spec);
    let n = 16;
    let expect = run(Algorithm::One, &problem, &rho, &RunConfig::new(1.0, n))?.final_state;
    let counts = [25usize, 100, 400, 1600];
    let replicates = 16u64;
    let mut rms = Vec::new();
    for &t in &counts {
        let mut sq = 0.0;
        for rep in 0..replicates {
            let mode = Mode::MonteCarlo {
                seed: seed
                    .wrapping_mul(1_000_003)
                    .wrapping_add(1000 * t as u64 + rep),
                trajectories: t,
            };
            let mean = run(
                Algorithm::One,
                &problem,
                &rho,
                &RunConfig::new(1.0, n).with_mode(mode),
            )?
            .final_state;
            sq += trace_norm(&(mean.matrix() - expect.matrix()))?.powi(2);
        }
        rms.push((sq / replicates as f64).sqrt());
    }
    let xs: Vec<f64> = counts.iter().map(|&t| t as f64).collect();
    Ok((loglog_fit(&xs, &rms)?.slope + 0.5).abs())
}

/// Largest |z| of the consumption counts over 10⁵ Monte-Carlo draws.
fn consumption_z(seed: u64) -> Result<Vec<f64>> {
    let spec = reference_spec()?;
    let c = spec.normalization();
    let (n, trajectories) = (100usize, 1000usize);
    let cfg = RunConfig::new(1.0, n).with_mode(Mode::MonteCarlo { seed, trajectories });
    let rep = run(
        Algorithm::One,
        &Problem::Lindblad(spec.clone()),
        &reference_state()?,
        &cfg,
    )?;
    let draws = (n * trajectories) as f64;
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
    Ok(probs
        .into_iter()
        .map(|(r, p)| {
            let got = rep.consumed.get(&r).copied().unwrap_or(0) as f64;
            (got - draws * p).abs() / (draws * p * (1.0 - p)).sqrt()
        })
        .collect())
}

pub fn verify_lemmas(opts: &VerifyOptions) -> Result<LemmaReport> {
    let trials = opts.trials.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let tol = |default: f64| opts.tol.unwrap_or(default);
    let mut checks = Vec::new();

    checks.push(check(
        "encoding_isometry",
        &encoding_isometry(&mut rng, trials)?,
        tol(1e-12),
    ));
    let (eq, bound) = program_distance(&mut rng, trials)?;
    checks.push(check("program_distance_equality", &eq, tol(1e-10)));
    checks.push(check("program_distance_bound", &bound, tol(1e-12)));
    checks.push(check(
        "first_order_generator",
        &first_order(&mut rng, trials, opts.corrupt_m)?,
        tol(1e-10),
    ));
    checks.push(check(
        "partial_swap_commutator",
        &partial_swap(&mut rng, trials)?,
        tol(1e-12),
    ));
    for (d, degree, dense) in [(2, 2, true), (3, 2, true), (2, 3, false)] {
        let label = if dense { "dense" } else { "action" };
        let res = cyclic_swap(&mut rng, d, degree, dense, trials, opts.corrupt_m)?;
        checks.push(check(
            format!("cyclic_swap_d{d}_D{degree}_{label}"),
            &res,
            tol(1e-9),
        ));
    }
    // Significance 1e−3 with two degrees of freedom.
    checks.push(check(
        "omega_frequencies_chi2",
        &[omega_chi_square(&mut rng)?],
        -2.0 * 1e-3f64.ln(),
    ));
    checks.push(check(
        "channels_cptp",
        &cptp_violations(tol(1e-8))?,
        tol(1e-8),
    ));
    checks.push(check(
        "monte_carlo_slope",
        &[monte_carlo_slope(opts.seed)?],
        0.2,
    ));
    checks.push(check(
        "consumption_frequencies_z",
        &consumption_z(opts.seed)?,
        3.0,
    ));

    Ok(LemmaReport {
        seed: opts.seed,
        trials,
        corrupt_m: opts.corrupt_m,
        checks,
    })
}
