//! The fixed interaction operators M and the single-step channels they induce
//! on the system register.

use crate::channels::{
    apply_lindblad_action, default_substeps, generator_superop, JumpAction, SuperOperator,
};
use crate::error::{Result, WmlError};
use crate::scalar::{c, lit, Real, C};
use crate::tensor::{
    check_entries, gamma_vector, kron, mat_exp, partial_trace, swap_operator, Matrix, SystemDims,
};

use super::ChannelMode;

/// Largest total dimension for which `ChannelMode::Auto` exponentiates the
/// full superoperator.
pub const DENSE_MAX_DIM: usize = 16;

/// Default truncation order of the action-based series.
pub const DEFAULT_ORDER: usize = 8;

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(WmlError::Argument(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    Ok(())
}

/// M = (1/√d)(I ⊗ ΓΓ†)(SWAP ⊗ I) on registers (S, P, Q).
pub fn build_m<T: Real>(d: usize) -> Result<Matrix<T>> {
    check_d(d)?;
    let g = gamma_vector::<T>(d);
    let proj = Matrix::outer(&g, &g);
    let left = kron(&Matrix::identity(d), &proj)?;
    let right = kron(&swap_operator(d), &Matrix::identity(d))?;
    Ok(left
        .dot(&right)
        .scale_real(T::one() / T::from(d).unwrap().sqrt()))
}

/// M = d^{−D/2}(I_S ⊗ ⊗_ℓ Γ_{P^ℓ Q^ℓ})(C ⊗ I_Q) on registers
/// (S, P¹…P^D, Q¹…Q^D), where C maps |a₀, a₁, …, a_D⟩ to |a₁, …, a_D, a₀⟩.
///
/// C is the inverse of the cyclic shift returned by `cycswap_operator`; with
/// this direction the reduced action is L₁⋯L_D ρ L′_D⋯L′₁ for product
/// program states. For D = 1 both directions are SWAP and this equals
/// [`build_m`].
pub fn build_m_poly<T: Real>(d: usize, degree: usize) -> Result<Matrix<T>> {
    let jump = CycJump::new(d, degree)?;
    let n = jump.total_dim();
    check_entries(n, n)?;
    Ok(jump.left(&Matrix::identity(n)))
}

/// Structured form of [`build_m_poly`] that applies M without storing it.
#[derive(Debug, Clone)]
pub struct CycJump {
    d: usize,
    degree: usize,
    q_dim: usize,
    /// Row read by (C ⊗ I) for each output row of the (S, P) block.
    shift_src: Vec<usize>,
    /// Row read by (C† ⊗ I).
    unshift_src: Vec<usize>,
    /// Positions of the nonzero entries of γ = Σ_a |a⟩_P |a⟩_Q, all equal to one.
    gamma_support: Vec<usize>,
}

impl CycJump {
    pub fn new(d: usize, degree: usize) -> Result<Self> {
        check_d(d)?;
        if degree == 0 {
            return Err(WmlError::Argument("degree must be at least 1".into()));
        }
        let q_dim = d.checked_pow(degree as u32).ok_or_else(|| WmlError::Size {
            entries: u128::MAX,
            limit: crate::tensor::max_entries(),
        })?;
        let sp_dim = d * q_dim;
        let total = sp_dim as u128 * q_dim as u128;
        if total > usize::MAX as u128 / 2 {
            return Err(WmlError::Size {
                entries: total * total,
                limit: crate::tensor::max_entries(),
            });
        }
        // C|a₀ a₁ … a_D⟩ = |a₁ … a_D a₀⟩: as integers, out = (in mod q_dim)·d + in / q_dim.
        let mut shift_src = vec![0; sp_dim];
        let mut unshift_src = vec![0; sp_dim];
        for input in 0..sp_dim {
            let out = (input % q_dim) * d + input / q_dim;
            shift_src[out] = input;
            unshift_src[input] = out;
        }
        let gamma_support = (0..q_dim).map(|a| a * q_dim + a).collect();
        Ok(Self {
            d,
            degree,
            q_dim,
            shift_src,
            unshift_src,
            gamma_support,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn total_dim(&self) -> usize {
        self.d * self.q_dim * self.q_dim
    }

    /// Dimension of the program registers (P¹…P^D, Q¹…Q^D).
    pub fn program_dim(&self) -> usize {
        self.q_dim * self.q_dim
    }

    fn prefactor<T: Real>(&self) -> T {
        T::one() / T::from(self.q_dim).unwrap().sqrt()
    }

    /// Row permutation (U ⊗ I_Q) X given the source row of each output row.
    fn permute_rows<T: Real>(&self, src: &[usize], x: &Matrix<T>) -> Matrix<T> {
        let cols = x.cols();
        let mut out = Matrix::zeros(x.rows(), cols);
        let q = self.q_dim;
        let xs = x.as_slice();
        let os = out.as_mut_slice();
        for (o, &i) in src.iter().enumerate() {
            for qi in 0..q {
                let (ro, ri) = ((o * q + qi) * cols, (i * q + qi) * cols);
                os[ro..ro + cols].copy_from_slice(&xs[ri..ri + cols]);
            }
        }
        out
    }

    /// (I_S ⊗ |γ⟩⟨γ|) X.
    fn project<T: Real>(&self, x: &Matrix<T>) -> Matrix<T> {
        let cols = x.cols();
        let block = self.program_dim();
        let mut out = Matrix::zeros(x.rows(), cols);
        let xs = x.as_slice();
        let os = out.as_mut_slice();
        let mut acc = vec![C::<T>::new(T::zero(), T::zero()); cols];
        for s in 0..self.d {
            acc.iter_mut()
                .for_each(|z| *z = C::new(T::zero(), T::zero()));
            for &g in &self.gamma_support {
                let r = (s * block + g) * cols;
                for (a, &v) in acc.iter_mut().zip(&xs[r..r + cols]) {
                    *a += v;
                }
            }
            for &g in &self.gamma_support {
                let r = (s * block + g) * cols;
                os[r..r + cols].copy_from_slice(&acc);
            }
        }
        out
    }
}

impl<T: Real> JumpAction<T> for CycJump {
    fn dim(&self) -> usize {
        self.total_dim()
    }

    fn left(&self, x: &Matrix<T>) -> Matrix<T> {
        self.project(&self.permute_rows(&self.shift_src, x))
            .scale_real(self.prefactor())
    }

    fn left_adjoint(&self, x: &Matrix<T>) -> Matrix<T> {
        self.permute_rows(&self.unshift_src, &self.project(x))
            .scale_real(self.prefactor())
    }

    fn hs_norm_sq(&self) -> T {
        T::from(self.d * self.q_dim).unwrap()
    }
}

/// The interaction M in whichever representations the channel mode needs.
#[derive(Debug, Clone)]
pub(crate) struct Interaction<T: Real> {
    jump: CycJump,
    dense: Option<Matrix<T>>,
    mode: ChannelMode,
}

impl<T: Real> Interaction<T> {
    pub(crate) fn new(d: usize, degree: usize, mode: ChannelMode) -> Result<Self> {
        let jump = CycJump::new(d, degree)?;
        let use_dense = match mode {
            ChannelMode::Dense => true,
            ChannelMode::Action { .. } => false,
            ChannelMode::Auto => jump.total_dim() <= DENSE_MAX_DIM,
        };
        let dense = if use_dense {
            let n = jump.total_dim();
            check_entries(n * n, n * n)?;
            Some(build_m_poly(d, degree)?)
        } else {
            None
        };
        Ok(Self { jump, dense, mode })
    }

    /// Reduced channel X ↦ Tr_{P,Q}[e^{𝓜Δ}(X ⊗ |φ⟩⟨φ|)] on the system, with φ
    /// given in canonical register order.
    pub(crate) fn step_channel(
        &self,
        program: &[C<T>],
        delta: T,
        tol: T,
    ) -> Result<SuperOperator<T>> {
        let d = self.jump.d();
        let pdim = self.jump.program_dim();
        if program.len() != pdim {
            return Err(WmlError::Shape(format!(
                "program state of length {} for program registers of dimension {pdim}",
                program.len()
            )));
        }
        let phi = Matrix::outer(program, program);
        let dims = SystemDims::new(vec![d, pdim])?;
        match &self.dense {
            Some(m) => {
                let n = self.jump.total_dim();
                let gen = generator_superop(n, None, &[m])?;
                let e = mat_exp(&gen.scale_real(delta), tol)?;
                SuperOperator::from_fn(d, |x| {
                    let big = kron(x, &phi)?;
                    let out =
                        crate::channels::devectorize(&e.apply(&crate::channels::vectorize(&big)?))?;
                    partial_trace(&out, &dims, &[0])
                })
            }
            None => {
                let (substeps, order) = match self.mode {
                    ChannelMode::Action { substeps, order } => (substeps, order),
                    _ => (None, DEFAULT_ORDER),
                };
                let norm_sq: T = JumpAction::<T>::hs_norm_sq(&self.jump);
                let substeps = substeps.unwrap_or_else(|| default_substeps(delta, norm_sq));
                SuperOperator::from_fn(d, |x| {
                    let big = kron(x, &phi)?;
                    let out = apply_lindblad_action(&big, &self.jump, delta, substeps, order)?;
                    partial_trace(&out, &dims, &[0])
                })
            }
        }
    }
}

/// X ↦ Tr₂[U (X ⊗ σ) U†] with U = e^{−i·sign·SWAP·Δ}.
pub(crate) fn swap_step_channel<T: Real>(
    sigma: &Matrix<T>,
    negative: bool,
    delta: T,
    tol: T,
) -> Result<SuperOperator<T>> {
    let d = sigma.rows();
    let sign = if negative { T::one() } else { -T::one() };
    let u = mat_exp(
        &swap_operator::<T>(d).scale(c(T::zero(), sign * delta)),
        tol,
    )?;
    let ud = u.adjoint();
    let dims = SystemDims::new(vec![d, d])?;
    SuperOperator::from_fn(d, |x| {
        let big = kron(x, sigma)?;
        partial_trace(&u.dot(&big).dot(&ud), &dims, &[0])
    })
}

/// Weight that turns Φ padding into the identity factor the target operator
/// expects: a string of length ℓ padded to degree D picks up d^{−(D−ℓ)/2}
/// from the Φ factors, so its amplitude is scaled by d^{(D−ℓ)/2}.
pub(crate) fn padding_weight<T: Real>(d: usize, degree: usize, len: usize) -> T {
    T::from(d)
        .unwrap()
        .powf(lit::<T>(0.5) * T::from(degree - len).unwrap())
}
