//! Statevector simulation of the linear-combination-of-unitaries preparation
//! of program states, with amplitude amplification and query accounting.

use crate::engine::PolySpec;
use crate::error::{Result, WmlError};
use crate::program::ProgramState;
use crate::scalar::{cr, lit, Real, C};
use crate::tensor::{check_entries, kron_vec, vec_inner, vec_norm, Matrix, SystemDims};

/// Unit vector on a composite register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    dims: SystemDims,
    amps: Vec<C<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(dims: SystemDims, amps: Vec<C<T>>) -> Result<Self> {
        if amps.len() != dims.total() {
            return Err(WmlError::Shape(format!(
                "{} amplitudes for a register of dimension {}",
                amps.len(),
                dims.total()
            )));
        }
        let norm = vec_norm(&amps);
        if !((norm - T::one()).abs() <= lit(T::STATE_TOL)) {
            return Err(WmlError::Argument(format!("state vector norm is {norm}")));
        }
        Ok(Self { dims, amps })
    }

    /// Computational basis vector |i⟩.
    pub fn basis(dims: SystemDims, i: usize) -> Result<Self> {
        if i >= dims.total() {
            return Err(WmlError::Argument(format!(
                "basis index {i} out of range {}",
                dims.total()
            )));
        }
        let mut amps = vec![cr(T::zero()); dims.total()];
        amps[i] = cr(T::one());
        Ok(Self { dims, amps })
    }

    /// A program state on the pair of d-dimensional registers it lives on.
    pub fn from_program(psi: &ProgramState<T>) -> Result<Self> {
        Self::new(
            SystemDims::uniform(psi.dim(), 2)?,
            psi.amplitudes().to_vec(),
        )
    }

    pub fn dims(&self) -> &SystemDims {
        &self.dims
    }

    pub fn amps(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C<T>> {
        self.amps
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        if self.amps.len() != other.amps.len() {
            return Err(WmlError::Shape(
                "fidelity between vectors of different length".into(),
            ));
        }
        Ok(vec_inner(&self.amps, &other.amps).norm_sqr())
    }
}

/// Queries to the four oracles, tallied separately.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryTally {
    pub select: u64,
    pub select_adjoint: u64,
    pub ancilla: u64,
    pub ancilla_adjoint: u64,
}

impl QueryTally {
    pub fn total(&self) -> u64 {
        self.select + self.select_adjoint + self.ancilla + self.ancilla_adjoint
    }

    /// One application of A = (U_A† ⊗ I)·select·(U_A ⊗ I).
    fn forward(&mut self) {
        self.ancilla += 1;
        self.select += 1;
        self.ancilla_adjoint += 1;
    }

    /// One application of A†.
    fn backward(&mut self) {
        self.ancilla += 1;
        self.select_adjoint += 1;
        self.ancilla_adjoint += 1;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LcuReport<T: Real> {
    /// Post-selected, renormalized output.
    pub prepared: StateVector<T>,
    /// Ancilla-|0⟩ probability of one unamplified pass, c/λ².
    pub success_prob: T,
    pub aa_rounds: u64,
    /// Success probability after `aa_rounds` exact amplification rounds.
    pub amplified_prob: T,
    /// λ = Σ_k c_k.
    pub lambda: T,
    /// c = ‖Σ_k c_k ψ_k‖².
    pub c: T,
    /// Ancilla-|0⟩ block of A|0⟩|anchor⟩ before post-selection.
    pub block: Vec<C<T>>,
    /// Queries for the initial pass plus every amplification round.
    pub queries: QueryTally,
}

impl<T: Real> LcuReport<T> {
    /// 1 − amplified success probability.
    pub fn residual(&self) -> T {
        T::one() - self.amplified_prob
    }
}

/// Unitary U with U·anchor = target, built from two Householder reflections
/// and a phase on |0⟩.
pub fn complete_unitary<T: Real>(target: &[C<T>], anchor: &[C<T>]) -> Result<Matrix<T>> {
    let n = target.len();
    if anchor.len() != n || n == 0 {
        return Err(WmlError::Shape(format!(
            "target of length {n} and anchor of length {}",
            anchor.len()
        )));
    }
    check_entries(n, n)?;
    for (v, name) in [(target, "target"), (anchor, "anchor")] {
        let norm = vec_norm(v);
        if !((norm - T::one()).abs() <= lit(T::STATE_TOL)) {
            return Err(WmlError::Argument(format!("{name} has norm {norm}")));
        }
    }
    let (h_anchor, a_anchor) = householder_to_e0(anchor);
    let (h_target, a_target) = householder_to_e0(target);
    let mut phase = Matrix::identity(n);
    phase.as_mut_slice()[0] = a_target / a_anchor;
    Ok(h_target.dot(&phase).dot(&h_anchor))
}

/// Hermitian unitary H with H x = α e₀, returned with α.
fn householder_to_e0<T: Real>(x: &[C<T>]) -> (Matrix<T>, C<T>) {
    let n = x.len();
    let x0 = x[0];
    let alpha = if x0.norm() > T::zero() {
        -x0 / x0.norm()
    } else {
        cr(-T::one())
    };
    let mut v = x.to_vec();
    v[0] -= alpha;
    let vv = vec_norm(&v).powi(2);
    let mut h = Matrix::identity(n);
    let outer = Matrix::outer(&v, &v).scale_real(lit::<T>(2.0) / vv);
    h -= &outer;
    (h, alpha)
}

/// Best of floor and ceil of π/(4θ) − ½ with sin θ = √p, floored at zero.
pub fn amplification_rounds<T: Real>(p: T) -> u64 {
    let theta = p.min(T::one()).sqrt().asin();
    let x = T::PI() / (lit::<T>(4.0) * theta) - lit(0.5);
    if !(x > T::zero()) {
        return 0;
    }
    let lo = x.floor();
    let gain = |r: T| ((lit::<T>(2.0) * r + T::one()) * theta).sin().powi(2);
    // Ties go to the cheaper round count.
    let r = if gain(lo + T::one()) > gain(lo) + lit(1e-12) {
        lo + T::one()
    } else {
        lo
    };
    r.to_u64().unwrap_or(u64::MAX)
}

/// State preparation circuit A = (U_A† ⊗ I)·select·(U_A ⊗ I) over an ancilla
/// of dimension `k` and a target register of dimension `n`.
struct Circuit<T: Real> {
    k: usize,
    n: usize,
    ua: Matrix<T>,
    /// Action of select on each ancilla branch.
    branches: Vec<Box<dyn Fn(&[C<T>]) -> Vec<C<T>>>>,
    branches_adjoint: Vec<Box<dyn Fn(&[C<T>]) -> Vec<C<T>>>>,
}

impl<T: Real> Circuit<T> {
    fn apply_ancilla(&self, u: &Matrix<T>, v: &[C<T>]) -> Vec<C<T>> {
        let mut out = vec![cr(T::zero()); v.len()];
        for a in 0..self.k {
            for b in 0..self.k {
                let w = u.as_slice()[a * self.k + b];
                if w == cr(T::zero()) {
                    continue;
                }
                for (o, &x) in out[a * self.n..(a + 1) * self.n]
                    .iter_mut()
                    .zip(&v[b * self.n..(b + 1) * self.n])
                {
                    *o += w * x;
                }
            }
        }
        out
    }

    fn apply_select(&self, v: &[C<T>], adjoint: bool) -> Vec<C<T>> {
        let maps = if adjoint {
            &self.branches_adjoint
        } else {
            &self.branches
        };
        let mut out = Vec::with_capacity(v.len());
        for (a, f) in maps.iter().enumerate() {
            out.extend(f(&v[a * self.n..(a + 1) * self.n]));
        }
        out
    }

    fn forward(&self, v: &[C<T>], tally: &mut QueryTally) -> Vec<C<T>> {
        tally.forward();
        let v = self.apply_ancilla(&self.ua, v);
        let v = self.apply_select(&v, false);
        self.apply_ancilla(&self.ua.adjoint(), &v)
    }

    fn backward(&self, v: &[C<T>], tally: &mut QueryTally) -> Vec<C<T>> {
        tally.backward();
        let v = self.apply_ancilla(&self.ua, v);
        let v = self.apply_select(&v, true);
        self.apply_ancilla(&self.ua.adjoint(), &v)
    }

    /// Runs A on |0⟩|anchor⟩ and `rounds` amplification rounds.
    /// Returns the final vector and the tally.
    fn run(&self, anchor: &[C<T>], rounds: u64) -> (Vec<C<T>>, QueryTally) {
        let mut tally = QueryTally::default();
        let mut start = vec![cr(T::zero()); self.k * self.n];
        start[..self.n].copy_from_slice(anchor);
        let mut v = self.forward(&start, &mut tally);
        for _ in 0..rounds {
            // Q = −A S₀ A† S_good with S_x = I − 2Π_x.
            for z in &mut v[..self.n] {
                *z = -*z;
            }
            let mut w = self.backward(&v, &mut tally);
            let overlap = vec_inner(&start, &w);
            for (z, &s) in w.iter_mut().zip(&start) {
                *z -= s * overlap * lit::<T>(2.0);
            }
            v = self
                .forward(&w, &mut tally)
                .into_iter()
                .map(|z| -z)
                .collect();
        }
        (v, tally)
    }
}

fn ancilla_state<T: Real>(weights: &[T], lambda: T) -> Vec<C<T>> {
    weights.iter().map(|&w| cr((w / lambda).sqrt())).collect()
}

fn check_weights<T: Real>(weights: &[T]) -> Result<T> {
    if weights.is_empty() {
        return Err(WmlError::Argument(
            "linear combination needs at least one term".into(),
        ));
    }
    if let Some(w) = weights
        .iter()
        .find(|w| !(**w > T::zero()) || !w.is_finite())
    {
        return Err(WmlError::Argument(format!(
            "coefficients must be positive, got {w}"
        )));
    }
    Ok(weights.iter().copied().sum())
}

fn finish<T: Real>(
    circuit: &Circuit<T>,
    anchor: &[C<T>],
    dims: SystemDims,
    lambda: T,
) -> Result<LcuReport<T>> {
    let (once, _) = circuit.run(anchor, 0);
    let block = &once[..circuit.n];
    let norm = vec_norm(block);
    if !(norm > lit(1e-12)) {
        return Err(WmlError::Argument(
            "linear combination cancels to zero".into(),
        ));
    }
    let success_prob = norm * norm;
    let aa_rounds = amplification_rounds(success_prob);
    let (amplified, queries) = circuit.run(anchor, aa_rounds);
    let amplified_prob = vec_norm(&amplified[..circuit.n]).powi(2);
    let prepared = StateVector::new(dims, block.iter().map(|&z| z / norm).collect())?;
    Ok(LcuReport {
        prepared,
        success_prob,
        aa_rounds,
        amplified_prob,
        lambda,
        c: success_prob * lambda * lambda,
        block: block.to_vec(),
        queries,
    })
}

/// Prepares (1/√c)Σ_k c_k ψ_k with U_k|0⟩ = ψ_k and ancilla amplitudes √(c_k/λ).
pub fn lcu_prepare_linear<T: Real>(terms: &[(T, ProgramState<T>)]) -> Result<LcuReport<T>> {
    let weights: Vec<T> = terms.iter().map(|(w, _)| *w).collect();
    let lambda = check_weights(&weights)?;
    let d = terms[0].1.dim();
    if let Some((_, bad)) = terms.iter().find(|(_, p)| p.dim() != d) {
        return Err(WmlError::Shape(format!(
            "program states on d={d} and d={}",
            bad.dim()
        )));
    }
    let n = d * d;
    let k = terms.len();
    check_entries(k * n, 1)?;
    let mut anchor = vec![cr(T::zero()); n];
    anchor[0] = cr(T::one());
    let mut branches: Vec<Box<dyn Fn(&[C<T>]) -> Vec<C<T>>>> = Vec::new();
    let mut branches_adjoint: Vec<Box<dyn Fn(&[C<T>]) -> Vec<C<T>>>> = Vec::new();
    for (_, psi) in terms {
        let u = complete_unitary(psi.amplitudes(), &anchor)?;
        let ud = u.adjoint();
        branches.push(Box::new(move |v| u.apply(v)));
        branches_adjoint.push(Box::new(move |v| ud.apply(v)));
    }
    let mut e0 = vec![cr(T::zero()); k];
    e0[0] = cr(T::one());
    let ua = complete_unitary(&ancilla_state(&weights, lambda), &e0)?;
    let circuit = Circuit {
        k,
        n,
        ua,
        branches,
        branches_adjoint,
    };
    finish(&circuit, &anchor, SystemDims::uniform(d, 2)?, lambda)
}

/// Applies `u` to register `pos` of `count` registers of dimension `n` each.
fn apply_local<T: Real>(u: &Matrix<T>, v: &[C<T>], pos: usize, count: usize) -> Vec<C<T>> {
    let n = u.rows();
    let right = n.pow((count - pos - 1) as u32);
    let left = v.len() / (n * right);
    let mut out = vec![cr(T::zero()); v.len()];
    let us = u.as_slice();
    for l in 0..left {
        for r in 0..right {
            for a in 0..n {
                let mut acc = cr(T::zero());
                for b in 0..n {
                    acc += us[a * n + b] * v[(l * n + b) * right + r];
                }
                out[(l * n + a) * right + r] = acc;
            }
        }
    }
    out
}

/// Prepares the program state of the fourth algorithm in interleaved order
/// P¹Q¹…P^DQ^D, using U_k Φ = ψ_k on the anchor Φ^{⊗D} and select-W with
/// W_s = U_{s[1]} ⊗ ⋯ ⊗ U_{s[|s|]} ⊗ I^{⊗(D−|s|)}.
///
/// Branch s carries the weight c_s·d^{(D−|s|)/2}, so the prepared state
/// matches the one the fourth algorithm consumes; λ and c refer to these
/// weights.
pub fn lcu_prepare_poly<T: Real>(poly: &PolySpec<T>) -> Result<LcuReport<T>> {
    let d = poly.dim();
    let degree = poly.degree();
    let pair = d * d;
    let n = pair
        .checked_pow(degree as u32)
        .ok_or_else(|| WmlError::Size {
            entries: u128::MAX,
            limit: crate::tensor::max_entries(),
        })?;
    let k = poly.strings().len();
    check_entries(k * n, 1)?;
    let phi = ProgramState::<T>::maximally_entangled(d);
    let mut anchor = vec![cr(T::one())];
    for _ in 0..degree {
        anchor = kron_vec(&anchor, phi.amplitudes());
    }
    let mut unitaries = Vec::new();
    for l in poly.operators() {
        let psi = crate::program::encode_operator(l)?;
        let u = complete_unitary(psi.amplitudes(), phi.amplitudes())?;
        unitaries.push([u.clone(), u.adjoint()]);
    }
    let unitaries = std::rc::Rc::new(unitaries);
    let mut branches: Vec<Box<dyn Fn(&[C<T>]) -> Vec<C<T>>>> = Vec::new();
    let mut branches_adjoint: Vec<Box<dyn Fn(&[C<T>]) -> Vec<C<T>>>> = Vec::new();
    let mut weights = Vec::new();
    for (s, cs) in poly.strings() {
        weights.push(*cs * crate::engine::padding_weight::<T>(d, degree, s.len()));
        for adjoint in [false, true] {
            let us = unitaries.clone();
            let s = s.clone();
            let f: Box<dyn Fn(&[C<T>]) -> Vec<C<T>>> = Box::new(move |v| {
                let mut out = v.to_vec();
                for (pos, &op) in s.iter().enumerate() {
                    out = apply_local(&us[op][adjoint as usize], &out, pos, degree);
                }
                out
            });
            if adjoint {
                branches_adjoint.push(f);
            } else {
                branches.push(f);
            }
        }
    }
    let lambda = check_weights(&weights)?;
    let mut e0 = vec![cr(T::zero()); k];
    e0[0] = cr(T::one());
    let ua = complete_unitary(&ancilla_state(&weights, lambda), &e0)?;
    let circuit = Circuit {
        k,
        n,
        ua,
        branches,
        branches_adjoint,
    };
    finish(
        &circuit,
        &anchor,
        SystemDims::uniform(d, 2 * degree)?,
        lambda,
    )
}
