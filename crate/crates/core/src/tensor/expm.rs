//! Matrix exponential by scaling and squaring with a truncated Taylor series.

use super::matrix::Matrix;
use crate::error::{Result, WmlError};
use crate::scalar::{cr, lit, Real};

const MAX_TERMS: usize = 60;

/// `e^a` for any square `a`, Hermitian or not.
///
/// The input is scaled by `2^-s` until its 1-norm is at most one half, the
/// series is summed until the next term drops below `tol` relative to the
/// partial sum, and the result is squared `s` times.
pub fn mat_exp<T: Real>(a: &Matrix<T>, tol: T) -> Result<Matrix<T>> {
    if !a.is_square() {
        return Err(WmlError::Shape(format!(
            "matrix exponential of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if !(tol > T::zero()) {
        return Err(WmlError::Argument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !a.is_finite() {
        return Err(WmlError::NumericalIntegrity("non-finite exponent".into()));
    }
    let half: T = lit(0.5);
    let mut s = 0i32;
    let mut scaled = a.norm1();
    while scaled > half {
        scaled *= half;
        s += 1;
    }
    let x = a.scale_real(half.powi(s));

    // Squaring amplifies the truncation error roughly by 2^s.
    let target = tol * half.powi(s.min(40)) * lit(1e-2);
    let mut sum = Matrix::identity(a.rows());
    let mut term = Matrix::identity(a.rows());
    let mut converged = false;
    for k in 1..=MAX_TERMS {
        term = term.dot(&x).scale(cr(T::one() / T::from(k).unwrap()));
        sum += &term;
        if term.norm1() <= target.max(T::epsilon()) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(WmlError::NumericalIntegrity(format!(
            "Taylor series did not converge in {MAX_TERMS} terms"
        )));
    }
    for _ in 0..s {
        sum = sum.dot(&sum);
    }
    if !sum.is_finite() {
        return Err(WmlError::NumericalIntegrity(
            "matrix exponential overflowed".into(),
        ));
    }
    Ok(sum)
}
