use crate::error::{Result, WmlError};
use crate::scalar::{cr, lit, Real, C};
use crate::tensor::{min_eigenvalue, Matrix};

/// Quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    mat: Matrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates at the default state tolerance of the scalar type.
    pub fn new(mat: Matrix<T>) -> Result<Self> {
        Self::with_tol(mat, lit(T::STATE_TOL))
    }

    pub fn with_tol(mat: Matrix<T>, tol: T) -> Result<Self> {
        let err = density_violation(&mat, tol)?;
        match err {
            None => Ok(Self { mat }),
            Some(msg) => Err(WmlError::Argument(format!("not a density matrix: {msg}"))),
        }
    }

    /// Pure state |v⟩⟨v| after normalizing `v`.
    pub fn pure(v: &[C<T>]) -> Result<Self> {
        let norm = crate::tensor::vec_norm(v);
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(WmlError::Argument("pure state from a zero vector".into()));
        }
        let u: Vec<C<T>> = v.iter().map(|&z| z / norm).collect();
        Ok(Self {
            mat: Matrix::outer(&u, &u),
        })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            mat: Matrix::identity(d).scale(cr(T::one() / T::from(d).unwrap())),
        }
    }

    /// Wraps a matrix already known to be a state, skipping validation.
    pub(crate) fn trusted(mat: Matrix<T>) -> Self {
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.mat
    }
}

/// Describes the first violated density invariant, if any.
pub(crate) fn density_violation<T: Real>(m: &Matrix<T>, tol: T) -> Result<Option<String>> {
    if !m.is_square() {
        return Err(WmlError::Shape(format!("{}x{} state", m.rows(), m.cols())));
    }
    if !m.is_finite() {
        return Ok(Some("non-finite entries".into()));
    }
    let herm = m.hermiticity_error();
    if herm > tol {
        return Ok(Some(format!("Hermiticity error {herm:e}")));
    }
    let tr = m.trace();
    if (tr - C::new(T::one(), T::zero())).norm() > tol {
        return Ok(Some(format!("trace {tr}")));
    }
    let min = min_eigenvalue(m)?;
    if min < -tol {
        return Ok(Some(format!("minimum eigenvalue {min:e}")));
    }
    Ok(None)
}
