use crate::error::{Result, WmlError};
use crate::scalar::{cr, lit, Real, C};
use crate::tensor::Matrix;

use super::density::density_violation;

/// Lindbladian 𝓛(ρ) = −i[H, ρ] + Σ_k (L_k ρ L_k† − ½{L_k†L_k, ρ}) with the
/// Hamiltonian given as a real combination H = Σ_j c_j σ_j of states.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladSpec<T: Real> {
    d: usize,
    hamiltonian: Vec<(T, Matrix<T>)>,
    jumps: Vec<Matrix<T>>,
}

impl<T: Real> LindbladSpec<T> {
    /// Validates every σ_j as a density matrix and every L_k as nonzero.
    /// Terms with c_j = 0 contribute nothing and are dropped.
    pub fn new(d: usize, hamiltonian: Vec<(T, Matrix<T>)>, jumps: Vec<Matrix<T>>) -> Result<Self> {
        if d == 0 {
            return Err(WmlError::Spec("dimension must be positive".into()));
        }
        let tol: T = lit(T::STATE_TOL);
        let mut kept = Vec::with_capacity(hamiltonian.len());
        for (j, (cj, sigma)) in hamiltonian.into_iter().enumerate() {
            if (sigma.rows(), sigma.cols()) != (d, d) {
                return Err(WmlError::Spec(format!(
                    "sigma_{j} is {}x{}, expected {d}x{d}",
                    sigma.rows(),
                    sigma.cols()
                )));
            }
            if !cj.is_finite() {
                return Err(WmlError::Spec(format!("coefficient c_{j} is not finite")));
            }
            if let Some(msg) = density_violation(&sigma, tol)? {
                return Err(WmlError::Spec(format!("sigma_{j} is not a state: {msg}")));
            }
            if cj.is_zero() {
                log::warn!("dropping Hamiltonian term {j} with zero coefficient");
                continue;
            }
            kept.push((cj, sigma));
        }
        for (k, l) in jumps.iter().enumerate() {
            if (l.rows(), l.cols()) != (d, d) {
                return Err(WmlError::Spec(format!(
                    "L_{k} is {}x{}, expected {d}x{d}",
                    l.rows(),
                    l.cols()
                )));
            }
            if !l.is_finite() {
                return Err(WmlError::Spec(format!("L_{k} has non-finite entries")));
            }
            if !(l.frobenius() > lit(1e-12)) {
                return Err(WmlError::Spec(format!("L_{k} is zero")));
            }
        }
        Ok(Self {
            d,
            hamiltonian: kept,
            jumps,
        })
    }

    /// Purely dissipative spec.
    pub fn from_jumps(d: usize, jumps: Vec<Matrix<T>>) -> Result<Self> {
        Self::new(d, Vec::new(), jumps)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn hamiltonian_terms(&self) -> &[(T, Matrix<T>)] {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[Matrix<T>] {
        &self.jumps
    }

    pub fn is_empty(&self) -> bool {
        self.hamiltonian.is_empty() && self.jumps.is_empty()
    }

    /// H = Σ_j c_j σ_j.
    pub fn hamiltonian(&self) -> Matrix<T> {
        let mut h = Matrix::zeros(self.d, self.d);
        for (cj, sigma) in &self.hamiltonian {
            h += &sigma.scale_real(*cj);
        }
        h
    }

    /// Normalization c = Σ_j |c_j| + Σ_k ‖L_k‖₂².
    pub fn normalization(&self) -> T {
        self.hamiltonian.iter().map(|(cj, _)| cj.abs()).sum::<T>()
            + self.jumps.iter().map(|l| l.frobenius().powi(2)).sum::<T>()
    }

    /// ‖𝓛‖_max = max over |c_j| and ‖L_k‖₂².
    pub fn max_norm(&self) -> T {
        self.hamiltonian
            .iter()
            .map(|(cj, _)| cj.abs())
            .chain(self.jumps.iter().map(|l| l.frobenius().powi(2)))
            .fold(T::zero(), T::max)
    }

    /// Applies the generator to an arbitrary d×d operator.
    pub fn generator(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        if (x.rows(), x.cols()) != (self.d, self.d) {
            return Err(WmlError::Shape(format!(
                "{}x{} operator for a d={} generator",
                x.rows(),
                x.cols(),
                self.d
            )));
        }
        let h = self.hamiltonian();
        let mut out = h.commutator(x).scale(C::new(T::zero(), -T::one()));
        for l in &self.jumps {
            out += &dissipator(l, x);
        }
        Ok(out)
    }
}

/// L X L† − ½{L†L, X}.
pub(crate) fn dissipator<T: Real>(l: &Matrix<T>, x: &Matrix<T>) -> Matrix<T> {
    let ld = l.adjoint();
    let ldl = ld.dot(l);
    &l.dot(x).dot(&ld) - &ldl.anticommutator(x).scale(cr(lit(0.5)))
}
