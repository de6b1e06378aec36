use crate::error::{Result, WmlError};
use crate::scalar::{cr, lit, Real};
use crate::tensor::Matrix;

/// A jump operator M known only through its left action, so that e^{𝓜Δ}
/// can be applied without forming a superoperator.
pub trait JumpAction<T: Real> {
    /// Dimension of the space M acts on.
    fn dim(&self) -> usize;
    /// M X.
    fn left(&self, x: &Matrix<T>) -> Matrix<T>;
    /// M† X.
    fn left_adjoint(&self, x: &Matrix<T>) -> Matrix<T>;
    /// ‖M‖₂².
    fn hs_norm_sq(&self) -> T;
}

impl<T: Real> JumpAction<T> for Matrix<T> {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn left(&self, x: &Matrix<T>) -> Matrix<T> {
        self.dot(x)
    }

    fn left_adjoint(&self, x: &Matrix<T>) -> Matrix<T> {
        self.adjoint().dot(x)
    }

    fn hs_norm_sq(&self) -> T {
        self.frobenius().powi(2)
    }
}

/// 𝓜(X) = M X M† − ½{M†M, X}.
pub fn jump_generator<T: Real, J: JumpAction<T> + ?Sized>(jump: &J, x: &Matrix<T>) -> Matrix<T> {
    let mx = jump.left(x);
    let mxm = jump.left(&mx.adjoint()).adjoint();
    let mdm_x = jump.left_adjoint(&mx);
    let x_mdm = jump.left_adjoint(&jump.left(&x.adjoint())).adjoint();
    let half = cr(lit::<T>(0.5));
    &mxm - &(&mdm_x + &x_mdm).scale(half)
}

/// Default substep count ⌈10·Δ·‖M‖₂²⌉ + 1.
pub fn default_substeps<T: Real>(delta: T, norm_sq: T) -> usize {
    let raw = (lit::<T>(10.0) * delta * norm_sq).ceil();
    raw.to_usize().unwrap_or(usize::MAX - 1) + 1
}

/// e^{𝓜Δ}(ρ) by `substeps` applications of the order-`order` Taylor
/// polynomial of 𝓜Δ/substeps.
pub fn apply_lindblad_action<T: Real, J: JumpAction<T> + ?Sized>(
    rho: &Matrix<T>,
    jump: &J,
    delta: T,
    substeps: usize,
    order: usize,
) -> Result<Matrix<T>> {
    if (rho.rows(), rho.cols()) != (jump.dim(), jump.dim()) {
        return Err(WmlError::Shape(format!(
            "{}x{} operator for a jump on dimension {}",
            rho.rows(),
            rho.cols(),
            jump.dim()
        )));
    }
    if !(delta >= T::zero()) {
        return Err(WmlError::Argument(format!(
            "duration must be nonnegative, got {delta}"
        )));
    }
    if substeps == 0 || order == 0 {
        return Err(WmlError::Argument(
            "substeps and order must be positive".into(),
        ));
    }
    if delta.is_zero() {
        return Ok(rho.clone());
    }
    let h = delta / T::from(substeps).unwrap();
    let mut x = rho.clone();
    for _ in 0..substeps {
        let mut term = x.clone();
        let mut sum = x.clone();
        let mut prev_norm = term.frobenius();
        for k in 1..=order {
            term = jump_generator(jump, &term).scale_real(h / T::from(k).unwrap());
            let norm = term.frobenius();
            if k >= 2 && norm > prev_norm && norm > T::epsilon() * sum.frobenius() {
                return Err(WmlError::StepSize(format!(
                    "series terms grow at order {k}; use more than {substeps} substeps"
                )));
            }
            prev_norm = norm;
            sum += &term;
        }
        if !sum.is_finite() {
            return Err(WmlError::NumericalIntegrity(
                "non-finite series step".into(),
            ));
        }
        x = sum;
    }
    Ok(x)
}
