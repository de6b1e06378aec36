use crate::error::{Result, WmlError};
use crate::scalar::{cr, lit, Real};
use crate::tensor::{hermitian_eigenvalues, kron, partial_trace, trace_norm, Matrix, SystemDims};

use super::superop::SuperOperator;

/// Normalized Choi state (I ⊗ 𝓝)(Φ), reference system first.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiState<T: Real> {
    d_in: usize,
    d_out: usize,
    mat: Matrix<T>,
}

impl<T: Real> ChoiState<T> {
    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.mat
    }

    pub fn of_superop(s: &SuperOperator<T>) -> Result<Self> {
        choi_of(|x| s.apply_matrix(x), s.dim())
    }
}

/// Choi state of a linear map given by its action on d×d operators,
/// assembled as Σ_ij E_ij ⊗ 𝓝(E_ij) / d.
pub fn choi_of<T: Real>(
    apply: impl Fn(&Matrix<T>) -> Result<Matrix<T>>,
    d: usize,
) -> Result<ChoiState<T>> {
    let inv_d = cr(T::one() / T::from(d).unwrap());
    let mut mat: Option<Matrix<T>> = None;
    let mut d_out = 0;
    for i in 0..d {
        for j in 0..d {
            let e = Matrix::unit(d, i, j);
            let out = apply(&e)?;
            if !out.is_square() {
                return Err(WmlError::Shape("channel output is not square".into()));
            }
            let term = kron(&e, &out)?.scale(inv_d);
            match mat.as_mut() {
                None => {
                    d_out = out.rows();
                    mat = Some(term);
                }
                Some(m) => {
                    if out.rows() != d_out {
                        return Err(WmlError::Shape(
                            "inconsistent channel output dimension".into(),
                        ));
                    }
                    *m += &term;
                }
            }
        }
    }
    let mat =
        mat.ok_or_else(|| WmlError::Argument("Choi state of a zero-dimensional map".into()))?;
    Ok(ChoiState {
        d_in: d,
        d_out,
        mat,
    })
}

/// ½‖a − b‖₁.
pub fn choi_trace_distance<T: Real>(a: &ChoiState<T>, b: &ChoiState<T>) -> Result<T> {
    if (a.d_in, a.d_out) != (b.d_in, b.d_out) {
        return Err(WmlError::Shape(
            "Choi states of different dimensions".into(),
        ));
    }
    Ok(trace_norm(&(&a.mat - &b.mat))? * lit(0.5))
}

/// Complete-positivity and trace-preservation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptpReport<T> {
    pub min_choi_eigenvalue: T,
    pub tp_deviation: T,
    pub hermiticity_error: T,
    pub passed: bool,
}

pub fn is_cptp<T: Real>(s: &SuperOperator<T>, tol: T) -> Result<CptpReport<T>> {
    let choi = ChoiState::of_superop(s)?;
    let d = s.dim();
    let herm = choi.mat.hermiticity_error();
    let min_eig = hermitian_eigenvalues(&choi.mat)?[0];
    let dims = SystemDims::new(vec![d, d])?;
    let reduced = partial_trace(&choi.mat.scale_real(T::from(d).unwrap()), &dims, &[0])?;
    let tp = (&reduced - &Matrix::identity(d)).frobenius();
    Ok(CptpReport {
        min_choi_eigenvalue: min_eig,
        tp_deviation: tp,
        hermiticity_error: herm,
        passed: min_eig >= -tol && tp <= tol && herm <= tol,
    })
}
