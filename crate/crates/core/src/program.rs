//! Program states: operators encoded as pure states (L ⊗ I)|Γ⟩/‖L‖₂, the
//! sampled mixture used by the first algorithm, and random perturbations of
//! encoded operators.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::{DensityMatrix, LindbladSpec};
use crate::error::{Result, WmlError};
use crate::scalar::{c, lit, Real, C};
use crate::tensor::{hs_inner, trace_norm, vec_norm, Matrix};

/// Unit vector of length d² encoding a d×d operator.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgramState<T: Real> {
    d: usize,
    vec: Vec<C<T>>,
    source: Option<Matrix<T>>,
}

impl<T: Real> ProgramState<T> {
    /// Wraps a raw unit vector of length d².
    pub fn from_vec(d: usize, vec: Vec<C<T>>) -> Result<Self> {
        if vec.len() != d * d {
            return Err(WmlError::Shape(format!(
                "program state on d={d} needs length {}, got {}",
                d * d,
                vec.len()
            )));
        }
        let norm = vec_norm(&vec);
        if (norm - T::one()).abs() > lit(T::STATE_TOL) {
            return Err(WmlError::Argument(format!("program state norm is {norm}")));
        }
        Ok(Self {
            d,
            vec,
            source: None,
        })
    }

    /// Normalized maximally entangled state Φ, which encodes I/√d.
    pub fn maximally_entangled(d: usize) -> Self {
        encode_operator(&Matrix::identity(d)).expect("identity is nonzero")
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.vec
    }

    pub fn source(&self) -> Option<&Matrix<T>> {
        self.source.as_ref()
    }

    /// |ψ⟩⟨ψ|.
    pub fn density(&self) -> DensityMatrix<T> {
        DensityMatrix::pure(&self.vec).expect("unit vector")
    }
}

/// (L ⊗ I)|Γ⟩/‖L‖₂. Amplitude p·d + q equals L[p][q]/‖L‖₂.
pub fn encode_operator<T: Real>(l: &Matrix<T>) -> Result<ProgramState<T>> {
    if !l.is_square() {
        return Err(WmlError::Shape(format!(
            "encoding a {}x{} operator",
            l.rows(),
            l.cols()
        )));
    }
    let norm = l.frobenius();
    if !(norm > lit(1e-12)) {
        return Err(WmlError::Argument("cannot encode the zero operator".into()));
    }
    let vec = l.as_slice().iter().map(|&z| z / norm).collect();
    Ok(ProgramState {
        d: l.rows(),
        vec,
        source: Some(l.clone()),
    })
}

/// Unit-norm operator encoded by a program state.
pub fn decode_operator<T: Real>(psi: &ProgramState<T>) -> Matrix<T> {
    Matrix::from_vec(psi.d, psi.d, psi.vec.clone()).expect("program state has d² finite entries")
}

/// One draw of the classical register of ω: which term the next step simulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OmegaSample {
    /// Hamiltonian term j with c_j > 0 (branch 0).
    Positive(usize),
    /// Hamiltonian term j with c_j < 0 (branch 1).
    Negative(usize),
    /// Jump term k (branch 2).
    Jump(usize),
}

impl OmegaSample {
    pub fn branch(self) -> u8 {
        match self {
            Self::Positive(_) => 0,
            Self::Negative(_) => 1,
            Self::Jump(_) => 2,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Self::Positive(i) | Self::Negative(i) | Self::Jump(i) => i,
        }
    }
}

/// Precomputed sampler over ω's branches with probabilities |c_j|/c and ‖L_k‖₂²/c.
#[derive(Debug, Clone)]
pub struct OmegaSampler {
    outcomes: Vec<OmegaSample>,
    probabilities: Vec<f64>,
    index: WeightedIndex<f64>,
}

impl OmegaSampler {
    pub fn new<T: Real>(spec: &LindbladSpec<T>) -> Result<Self> {
        let mut outcomes = Vec::new();
        let mut weights = Vec::new();
        for (j, (cj, _)) in spec.hamiltonian_terms().iter().enumerate() {
            outcomes.push(if *cj > T::zero() {
                OmegaSample::Positive(j)
            } else {
                OmegaSample::Negative(j)
            });
            weights.push(cj.abs().as_f64());
        }
        for (k, l) in spec.jumps().iter().enumerate() {
            outcomes.push(OmegaSample::Jump(k));
            weights.push(l.frobenius().powi(2).as_f64());
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(WmlError::Spec(
                "normalization constant is zero; nothing to simulate".into(),
            ));
        }
        let index = WeightedIndex::new(&weights)
            .map_err(|e| WmlError::Spec(format!("invalid branch weights: {e}")))?;
        let probabilities = weights.iter().map(|w| w / total).collect();
        Ok(Self {
            outcomes,
            probabilities,
            index,
        })
    }

    pub fn sample(&self, rng: &mut impl Rng) -> OmegaSample {
        self.outcomes[self.index.sample(rng)]
    }

    /// Branch outcomes paired with their probabilities.
    pub fn distribution(&self) -> impl Iterator<Item = (OmegaSample, f64)> + '_ {
        self.outcomes
            .iter()
            .copied()
            .zip(self.probabilities.iter().copied())
    }
}

/// Single draw from ω. Repeated sampling should reuse an [`OmegaSampler`].
pub fn sample_omega<T: Real>(spec: &LindbladSpec<T>, rng: &mut impl Rng) -> Result<OmegaSample> {
    Ok(OmegaSampler::new(spec)?.sample(rng))
}

fn gaussian_matrix<T: Real>(d: usize, rng: &mut impl Rng) -> Matrix<T> {
    let data = (0..d * d)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            c(lit(re), lit(im))
        })
        .collect();
    Matrix::from_vec(d, d, data).expect("finite Gaussian samples")
}

fn check_unit<T: Real>(l: &Matrix<T>, name: &str) -> Result<()> {
    if !l.is_square() {
        return Err(WmlError::Shape(format!(
            "{name} is {}x{}",
            l.rows(),
            l.cols()
        )));
    }
    let n = l.frobenius();
    if (n - T::one()).abs() > lit(T::STATE_TOL) {
        return Err(WmlError::Argument(format!(
            "{name} must have unit Hilbert–Schmidt norm, has {n}"
        )));
    }
    Ok(())
}

/// Random unit-norm L̃ with ‖L̃ − L‖₂ = δ.
///
/// The direction G is Gaussian, made orthogonal to L and normalized, and
/// L̃ = (L + ηG)/√(1 + η²). Then ‖L̃ − L‖₂² = 2 − 2/√(1 + η²), which fixes η.
pub fn perturb_unit_operator<T: Real>(
    l: &Matrix<T>,
    delta: T,
    rng: &mut impl Rng,
) -> Result<Matrix<T>> {
    check_unit(l, "L")?;
    let sqrt2 = T::SQRT_2();
    if !(delta > T::zero()) || delta > sqrt2 * (T::one() + T::epsilon()) {
        return Err(WmlError::Argument(format!(
            "perturbation size {delta} outside (0, √2]"
        )));
    }
    let d = l.rows();
    let g = loop {
        let g = gaussian_matrix::<T>(d, rng);
        let along = hs_inner(l, &g)?;
        let g = &g - &l.scale(along);
        let n = g.frobenius();
        if n > lit(1e-8) {
            break g.scale_real(T::one() / n);
        }
    };
    let cos = T::one() - delta * delta * lit(0.5);
    if cos <= T::zero() {
        return Ok(g);
    }
    // 1/cos² − 1 = (1 − cos)(1 + cos)/cos² with 1 − cos = δ²/2, free of cancellation.
    let eta = delta * ((T::one() + cos) * lit(0.5)).sqrt() / cos;
    let out = (l + &g.scale_real(eta)).scale_real(T::one() / (T::one() + eta * eta).sqrt());
    Ok(out.scale_real(T::one() / out.frobenius()))
}

/// Distances between the program states of two unit-norm operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiDistance<T: Real> {
    /// ½‖ψ̃ψ̃† − ψψ†‖₁ from the spectrum of the difference.
    pub trace_dist: T,
    /// √(1 − |Tr[L̃†L]|²).
    pub overlap_formula: T,
    /// ‖L̃ − L‖₂.
    pub hs_dist: T,
    /// Tr[L̃†L].
    pub overlap: C<T>,
}

pub fn psi_distance<T: Real>(l: &Matrix<T>, l_tilde: &Matrix<T>) -> Result<PsiDistance<T>> {
    check_unit(l, "L")?;
    check_unit(l_tilde, "L̃")?;
    if l.rows() != l_tilde.rows() {
        return Err(WmlError::Shape("operators of different dimension".into()));
    }
    let psi = encode_operator(l)?;
    let psi_t = encode_operator(l_tilde)?;
    let diff = &psi_t.density().into_matrix() - &psi.density().into_matrix();
    let trace_dist = trace_norm(&diff)? * lit(0.5);
    let overlap = hs_inner(l_tilde, l)?;
    let overlap_formula = (T::one() - overlap.norm_sqr()).max(T::zero()).sqrt();
    Ok(PsiDistance {
        trace_dist,
        overlap_formula,
        hs_dist: (l_tilde - l).frobenius(),
        overlap,
    })
}
