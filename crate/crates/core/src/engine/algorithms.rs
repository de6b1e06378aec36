use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channels::{
    choi_trace_distance, exact_channel, ChoiState, DensityMatrix, LindbladSpec, SuperOperator,
};
use crate::error::{Result, WmlError};
use crate::program::{encode_operator, OmegaSample, OmegaSampler, ProgramState};
use crate::scalar::{cr, lit, Real, C};
use crate::tensor::{kron_vec, permute_vector, vec_norm, Matrix, SystemDims};

use super::interaction::{padding_weight, swap_step_channel, Interaction};
use super::specs::{LinearSpec, PolySpec};
use super::{ChannelMode, Mode, Ordering, Resource, RunConfig, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Sampled mixture ω with a fixed step Δ = ct/n.
    One,
    /// Deterministic sweep over every term.
    Two,
    /// Single jump that is a positive combination of encoded operators.
    Three,
    /// Single jump that is a polynomial in encoded operators.
    Four,
}

impl Algorithm {
    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            4 => Ok(Self::Four),
            _ => Err(WmlError::Argument(format!("unknown algorithm {k}"))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
            Self::Three => 3,
            Self::Four => 4,
        }
    }
}

/// Input to an algorithm.
#[derive(Debug, Clone, PartialEq)]
pub enum Problem<T: Real> {
    Lindblad(LindbladSpec<T>),
    Linear(LinearSpec<T>),
    Poly(PolySpec<T>),
}

impl<T: Real> Problem<T> {
    pub fn dim(&self) -> usize {
        match self {
            Self::Lindblad(s) => s.dim(),
            Self::Linear(s) => s.dim(),
            Self::Poly(s) => s.dim(),
        }
    }

    /// The Lindbladian whose exact channel the algorithm approximates.
    pub fn target(&self) -> Result<LindbladSpec<T>> {
        match self {
            Self::Lindblad(s) => Ok(s.clone()),
            Self::Linear(s) => s.target(),
            Self::Poly(s) => s.target(),
        }
    }
}

/// φ = (1/√c) Σ_k c_k ψ_k together with c = ‖L‖₂².
pub fn linear_program_state<T: Real>(spec: &LinearSpec<T>) -> Result<(ProgramState<T>, T)> {
    let d = spec.dim();
    let mut acc = vec![cr(T::zero()); d * d];
    for (ck, lk) in spec.terms() {
        let psi = encode_operator(lk)?;
        for (a, &z) in acc.iter_mut().zip(psi.amplitudes()) {
            *a += z * *ck;
        }
    }
    let norm = vec_norm(&acc);
    let phi = acc.into_iter().map(|z| z / norm).collect();
    Ok((ProgramState::from_vec(d, phi)?, norm * norm))
}

/// φ = (1/√c) Σ_s w_s φ_s in interleaved order P¹Q¹…P^DQ^D, together with
/// c = ‖Σ_s w_s φ_s‖², where φ_s = ψ_{s[1]} ⊗ ⋯ ⊗ ψ_{s[|s|]} ⊗ Φ^{⊗(D−|s|)}
/// and w_s = c_s·d^{(D−|s|)/2}.
pub fn poly_program_state<T: Real>(spec: &PolySpec<T>) -> Result<(Vec<C<T>>, T)> {
    let d = spec.dim();
    let degree = spec.degree();
    let psis = spec
        .operators()
        .iter()
        .map(encode_operator)
        .collect::<Result<Vec<_>>>()?;
    let phi = ProgramState::<T>::maximally_entangled(d);
    let len = (d * d).pow(degree as u32);
    crate::tensor::check_entries(len, 1)?;
    let mut acc = vec![cr(T::zero()); len];
    for (s, cs) in spec.strings() {
        let mut v = vec![cr(T::one())];
        for &k in s {
            v = kron_vec(&v, psis[k].amplitudes());
        }
        for _ in s.len()..degree {
            v = kron_vec(&v, phi.amplitudes());
        }
        let w = *cs * padding_weight::<T>(d, degree, s.len());
        for (a, z) in acc.iter_mut().zip(v) {
            *a += z * w;
        }
    }
    let norm = vec_norm(&acc);
    Ok((acc.into_iter().map(|z| z / norm).collect(), norm * norm))
}

/// Reorders a program vector from P¹Q¹…P^DQ^D to P¹…P^D Q¹…Q^D.
pub fn interleaved_to_canonical<T: Real>(v: &[C<T>], d: usize, degree: usize) -> Result<Vec<C<T>>> {
    let dims = SystemDims::uniform(d, 2 * degree)?;
    let perm: Vec<usize> = (0..degree)
        .map(|l| 2 * l)
        .chain((0..degree).map(|l| 2 * l + 1))
        .collect();
    permute_vector(v, &dims, &perm)
}

/// Per-sweep structure of an algorithm with every step channel built.
enum Plan<T: Real> {
    /// Weighted branches; one is applied per step.
    Mixture(Vec<(Resource, T, SuperOperator<T>)>),
    /// Channels applied in order each sweep.
    Sequence(Vec<(Resource, SuperOperator<T>)>),
}

fn check_dims<T: Real>(rho: &DensityMatrix<T>, d: usize) -> Result<()> {
    if rho.dim() != d {
        return Err(WmlError::Shape(format!(
            "state has dimension {}, spec has {d}",
            rho.dim()
        )));
    }
    Ok(())
}

fn alg1_branches<T: Real>(
    spec: &LindbladSpec<T>,
    delta: T,
    channel_mode: ChannelMode,
    tol: T,
    padded: bool,
) -> Result<Vec<(Resource, T, SuperOperator<T>)>> {
    let c = spec.normalization();
    if !(c > T::zero()) {
        return Err(WmlError::Spec(
            "normalization constant is zero; nothing to simulate".into(),
        ));
    }
    let d = spec.dim();
    let mut out = Vec::new();
    for (j, (cj, sigma)) in spec.hamiltonian_terms().iter().enumerate() {
        let ch = if padded {
            // ω carries an extra register τ = I/d here; it is traced out untouched.
            let tau = Matrix::identity(d).scale_real(T::one() / T::from(d).unwrap());
            let joint = crate::tensor::kron(sigma, &tau)?;
            padded_swap_channel(&joint, d, *cj < T::zero(), delta, tol)?
        } else {
            swap_step_channel(sigma, *cj < T::zero(), delta, tol)?
        };
        out.push((Resource::Sigma(j), cj.abs() / c, ch));
    }
    if !spec.jumps().is_empty() {
        let inter = Interaction::new(d, 1, channel_mode)?;
        for (k, l) in spec.jumps().iter().enumerate() {
            let psi = encode_operator(l)?;
            let ch = inter.step_channel(psi.amplitudes(), delta, tol)?;
            out.push((Resource::Psi(k), l.frobenius().powi(2) / c, ch));
        }
    }
    Ok(out)
}

/// Partial-swap step with σ ⊗ τ on two program registers; only the first
/// is swapped with the system.
fn padded_swap_channel<T: Real>(
    joint: &Matrix<T>,
    d: usize,
    negative: bool,
    delta: T,
    tol: T,
) -> Result<SuperOperator<T>> {
    let sign = if negative { T::one() } else { -T::one() };
    let s = crate::tensor::swap_operator::<T>(d);
    let u = crate::tensor::mat_exp(&s.scale(crate::scalar::c(T::zero(), sign * delta)), tol)?;
    let u = crate::tensor::kron(&u, &Matrix::identity(d))?;
    let ud = u.adjoint();
    let dims = SystemDims::new(vec![d, d, d])?;
    SuperOperator::from_fn(d, |x| {
        let big = crate::tensor::kron(x, joint)?;
        crate::tensor::partial_trace(&u.dot(&big).dot(&ud), &dims, &[0])
    })
}

fn plan<T: Real>(alg: Algorithm, problem: &Problem<T>, cfg: &RunConfig<T>) -> Result<Plan<T>> {
    let n = T::from(cfg.n).unwrap();
    let t = cfg.t;
    match (alg, problem) {
        (Algorithm::One, Problem::Lindblad(spec)) => {
            let delta = spec.normalization() * t / n;
            let padded = matches!(cfg.mode, Mode::MonteCarlo { .. });
            Ok(Plan::Mixture(alg1_branches(
                spec,
                delta,
                cfg.channel_mode,
                cfg.tol,
                padded,
            )?))
        }
        (Algorithm::Two, Problem::Lindblad(spec)) => {
            if spec.is_empty() {
                return Err(WmlError::Spec("Lindbladian has no terms".into()));
            }
            let scale = match cfg.ordering {
                Ordering::Forward => T::one(),
                Ordering::Palindromic => lit(0.5),
            };
            let d = spec.dim();
            let inter = if spec.jumps().is_empty() {
                None
            } else {
                Some(Interaction::new(d, 1, cfg.channel_mode)?)
            };
            let mut jumps = Vec::new();
            for (k, l) in spec.jumps().iter().enumerate() {
                let delta = l.frobenius().powi(2) * t / n * scale;
                let psi = encode_operator(l)?;
                let ch = inter.as_ref().expect("jumps present").step_channel(
                    psi.amplitudes(),
                    delta,
                    cfg.tol,
                )?;
                jumps.push((Resource::Psi(k), ch));
            }
            let mut hams = Vec::new();
            for (j, (cj, sigma)) in spec.hamiltonian_terms().iter().enumerate() {
                let delta = cj.abs() * t / n * scale;
                hams.push((
                    Resource::Sigma(j),
                    swap_step_channel(sigma, *cj < T::zero(), delta, cfg.tol)?,
                ));
            }
            let mut steps: Vec<(Resource, SuperOperator<T>)> = Vec::new();
            steps.extend(jumps.iter().rev().cloned());
            steps.extend(hams.iter().rev().cloned());
            if cfg.ordering == Ordering::Palindromic {
                steps.extend(hams.iter().cloned());
                steps.extend(jumps.iter().cloned());
            }
            Ok(Plan::Sequence(steps))
        }
        (Algorithm::Three, Problem::Linear(spec)) => {
            let (phi, c) = linear_program_state(spec)?;
            let inter = Interaction::new(spec.dim(), 1, cfg.channel_mode)?;
            let ch = inter.step_channel(phi.amplitudes(), c * t / n, cfg.tol)?;
            Ok(Plan::Sequence(vec![(Resource::Phi, ch)]))
        }
        (Algorithm::Four, Problem::Poly(spec)) => {
            let (phi, c) = poly_program_state(spec)?;
            let canonical = interleaved_to_canonical(&phi, spec.dim(), spec.degree())?;
            let inter = Interaction::new(spec.dim(), spec.degree(), cfg.channel_mode)?;
            let ch = inter.step_channel(&canonical, c * t / n, cfg.tol)?;
            Ok(Plan::Sequence(vec![(Resource::Phi, ch)]))
        }
        (alg, _) => Err(WmlError::Argument(format!(
            "algorithm {} does not accept this kind of specification",
            alg.number()
        ))),
    }
}

impl<T: Real> Plan<T> {
    /// One full step (expectation over branches, or a whole sweep).
    fn sweep_channel(&self, d: usize) -> Result<SuperOperator<T>> {
        match self {
            Plan::Mixture(branches) => {
                let parts: Vec<(T, &SuperOperator<T>)> =
                    branches.iter().map(|(_, p, s)| (*p, s)).collect();
                SuperOperator::combine(d, &parts)
            }
            Plan::Sequence(steps) => {
                let mut acc = SuperOperator::identity(d);
                for (_, s) in steps {
                    acc = acc.then(s)?;
                }
                Ok(acc)
            }
        }
    }

    fn expectation_accounting(
        &self,
        n: usize,
    ) -> (BTreeMap<Resource, u64>, BTreeMap<Resource, f64>) {
        let mut consumed = BTreeMap::new();
        let mut expected = BTreeMap::new();
        match self {
            Plan::Mixture(branches) => {
                consumed.insert(Resource::Omega, n as u64);
                for (r, p, _) in branches {
                    *expected.entry(*r).or_insert(0.0) += p.as_f64() * n as f64;
                }
            }
            Plan::Sequence(steps) => {
                for (r, _) in steps {
                    *consumed.entry(*r).or_insert(0) += n as u64;
                }
                for (r, c) in &consumed {
                    expected.insert(*r, *c as f64);
                }
            }
        }
        (consumed, expected)
    }
}

fn iterate<T: Real>(sweep: &SuperOperator<T>, x: &Matrix<T>, n: usize) -> Result<Matrix<T>> {
    let mut y = x.clone();
    for _ in 0..n {
        y = sweep.apply_matrix(&y)?;
    }
    Ok(y)
}

fn checked_state<T: Real>(m: Matrix<T>) -> Result<DensityMatrix<T>> {
    DensityMatrix::with_tol(m, lit(T::STATE_TOL * 100.0))
        .map_err(|e| WmlError::NumericalIntegrity(format!("algorithm output: {e}")))
}

/// Runs any algorithm on its matching problem kind.
pub fn run<T: Real>(
    alg: Algorithm,
    problem: &Problem<T>,
    rho: &DensityMatrix<T>,
    cfg: &RunConfig<T>,
) -> Result<RunReport<T>> {
    cfg.validate()?;
    let start = Instant::now();
    let d = problem.dim();
    check_dims(rho, d)?;
    if let Mode::MonteCarlo { .. } = cfg.mode {
        if alg != Algorithm::One {
            return Err(WmlError::Mode(format!(
                "algorithm {} consumes every program state deterministically; Monte-Carlo sampling applies only to algorithm 1",
                alg.number()
            )));
        }
    }
    let plan = plan(alg, problem, cfg)?;
    match cfg.mode {
        Mode::Expectation => {
            let sweep = plan.sweep_channel(d)?;
            let final_state = checked_state(iterate(&sweep, rho.matrix(), cfg.n)?)?;
            let channel = SuperOperator::from_fn(d, |e| iterate(&sweep, e, cfg.n))?;
            let exact = exact_channel(&problem.target()?, cfg.t, cfg.tol)?;
            let error = choi_trace_distance(
                &ChoiState::of_superop(&channel)?,
                &ChoiState::of_superop(&exact)?,
            )?;
            let (consumed, expected_consumption) = plan.expectation_accounting(cfg.n);
            Ok(RunReport {
                final_state,
                channel: Some(channel),
                consumed,
                expected_consumption,
                error_vs_oracle: Some(error),
                wall_time: start.elapsed(),
            })
        }
        Mode::MonteCarlo { seed, trajectories } => {
            let Problem::Lindblad(spec) = problem else {
                return Err(WmlError::Mode(
                    "Monte-Carlo mode needs a Lindblad spec".into(),
                ));
            };
            let Plan::Mixture(branches) = &plan else {
                return Err(WmlError::Mode(
                    "Monte-Carlo mode needs a sampled plan".into(),
                ));
            };
            let sampler = OmegaSampler::new(spec)?;
            let lookup = |s: OmegaSample| -> Resource {
                match s {
                    OmegaSample::Positive(j) | OmegaSample::Negative(j) => Resource::Sigma(j),
                    OmegaSample::Jump(k) => Resource::Psi(k),
                }
            };
            let channels: BTreeMap<Resource, &SuperOperator<T>> =
                branches.iter().map(|(r, _, s)| (*r, s)).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut consumed: BTreeMap<Resource, u64> = BTreeMap::new();
            let mut mean = Matrix::zeros(d, d);
            for _ in 0..trajectories {
                let mut x = rho.matrix().clone();
                for _ in 0..cfg.n {
                    let r = lookup(sampler.sample(&mut rng));
                    *consumed.entry(r).or_insert(0) += 1;
                    x = channels[&r].apply_matrix(&x)?;
                }
                mean += &x;
            }
            let mean = mean.scale_real(T::one() / T::from(trajectories).unwrap());
            let draws = (cfg.n * trajectories) as f64;
            let expected_consumption = branches
                .iter()
                .map(|(r, p, _)| (*r, p.as_f64() * draws))
                .collect();
            Ok(RunReport {
                final_state: checked_state(mean)?,
                channel: None,
                consumed,
                expected_consumption,
                error_vs_oracle: None,
                wall_time: start.elapsed(),
            })
        }
    }
}

/// One expectation-mode step of the first algorithm:
/// (1/c)[Σ_j |c_j| Tr₂(e^{∓iSΔ}(ρ ⊗ σ_j)e^{±iSΔ}) + Σ_k ‖L_k‖₂² Tr₂₃(e^{𝓜Δ}(ρ ⊗ ψ_k))].
pub fn alg1_step_expectation<T: Real>(
    rho: &DensityMatrix<T>,
    spec: &LindbladSpec<T>,
    delta: T,
    channel_mode: ChannelMode,
    tol: T,
) -> Result<DensityMatrix<T>> {
    check_dims(rho, spec.dim())?;
    if !(delta >= T::zero()) {
        return Err(WmlError::Argument(format!(
            "step must be nonnegative, got {delta}"
        )));
    }
    let plan = Plan::Mixture(alg1_branches(spec, delta, channel_mode, tol, false)?);
    let step = plan.sweep_channel(spec.dim())?;
    checked_state(step.apply_matrix(rho.matrix())?)
}

pub fn alg1_run<T: Real>(
    rho: &DensityMatrix<T>,
    spec: &LindbladSpec<T>,
    cfg: &RunConfig<T>,
) -> Result<RunReport<T>> {
    run(Algorithm::One, &Problem::Lindblad(spec.clone()), rho, cfg)
}

pub fn alg2_run<T: Real>(
    rho: &DensityMatrix<T>,
    spec: &LindbladSpec<T>,
    cfg: &RunConfig<T>,
) -> Result<RunReport<T>> {
    run(Algorithm::Two, &Problem::Lindblad(spec.clone()), rho, cfg)
}

pub fn alg3_run<T: Real>(
    rho: &DensityMatrix<T>,
    spec: &LinearSpec<T>,
    cfg: &RunConfig<T>,
) -> Result<RunReport<T>> {
    run(Algorithm::Three, &Problem::Linear(spec.clone()), rho, cfg)
}

pub fn alg4_run<T: Real>(
    rho: &DensityMatrix<T>,
    spec: &PolySpec<T>,
    cfg: &RunConfig<T>,
) -> Result<RunReport<T>> {
    run(Algorithm::Four, &Problem::Poly(spec.clone()), rho, cfg)
}

/// Superoperator of an expectation-mode run, assembled on matrix units.
pub fn channel_of_algorithm<T: Real>(
    alg: Algorithm,
    problem: &Problem<T>,
    cfg: &RunConfig<T>,
) -> Result<SuperOperator<T>> {
    if let Mode::MonteCarlo { .. } = cfg.mode {
        return Err(WmlError::Mode(
            "Monte-Carlo outputs are sampled states, not channels".into(),
        ));
    }
    cfg.validate()?;
    let d = problem.dim();
    let sweep = plan(alg, problem, cfg)?.sweep_channel(d)?;
    SuperOperator::from_fn(d, |e| iterate(&sweep, e, cfg.n))
}

/// ⌈c²t²/ε⌉ with the constant taken as one.
pub fn copies_needed(c: f64, t: f64, eps: f64) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(WmlError::Argument(format!(
            "target accuracy must lie in (0, 1), got {eps}"
        )));
    }
    if !(c > 0.0) || !(t > 0.0) || !c.is_finite() || !t.is_finite() {
        return Err(WmlError::Argument(
            "normalization and time must be positive".into(),
        ));
    }
    let x = c * c * t * t / eps;
    // Absorb floating-point noise so exact integers are not rounded up.
    let r = x.round();
    let n = if (x - r).abs() <= 1e-9 * x.max(1.0) {
        r
    } else {
        x.ceil()
    };
    Ok(n.max(1.0) as u64)
}

/// Total copies and the expected per-state split n_j = |c_j|/c·n, m_k = ‖L_k‖₂²/c·n.
#[derive(Debug, Clone, PartialEq)]
pub struct CopyBudget {
    pub total: u64,
    pub hamiltonian: Vec<f64>,
    pub jumps: Vec<f64>,
}

pub fn copies_for_spec<T: Real>(spec: &LindbladSpec<T>, t: f64, eps: f64) -> Result<CopyBudget> {
    let c = spec.normalization().as_f64();
    let total = copies_needed(c, t, eps)?;
    let n = total as f64;
    Ok(CopyBudget {
        total,
        hamiltonian: spec
            .hamiltonian_terms()
            .iter()
            .map(|(cj, _)| cj.abs().as_f64() / c * n)
            .collect(),
        jumps: spec
            .jumps()
            .iter()
            .map(|l| l.frobenius().powi(2).as_f64() / c * n)
            .collect(),
    })
}
