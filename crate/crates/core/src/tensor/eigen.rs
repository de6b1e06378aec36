//! Eigenvalues of Hermitian matrices and the Schatten norms built on them.

use num_traits::Zero;

use super::matrix::Matrix;
use crate::error::{Result, WmlError};
use crate::scalar::{c, lit, Real, C};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian matrix in ascending order, by cyclic complex
/// Jacobi rotations. Only the Hermitian part of the input is used.
pub fn hermitian_eigenvalues<T: Real>(m: &Matrix<T>) -> Result<Vec<T>> {
    if !m.is_square() {
        return Err(WmlError::Shape(format!(
            "eigenvalues of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let scale = a.frobenius();
    if scale.is_zero() {
        return Ok(vec![T::zero(); n]);
    }
    let threshold = scale * T::epsilon() * lit(0.5);
    let half: T = lit(0.5);
    let mut done = false;
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            done = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= T::min_positive_value() {
                    continue;
                }
                let phase = apq / mag;
                let tau = (a[(q, q)].re - a[(p, p)].re) * half / mag;
                let t = tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                // Rotation U with U_pp = U_qq = c, U_pq = s·e^{iφ}, U_qp = −s·e^{−iφ}.
                let upq = phase * sn;
                let uqp = -phase.conj() * sn;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * cs + akq * uqp;
                    a[(k, q)] = akp * upq + akq * cs;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * cs + aqk * uqp.conj();
                    a[(q, k)] = apk * upq.conj() + aqk * cs;
                }
                a[(p, q)] = C::zero();
                a[(q, p)] = C::zero();
                a[(p, p)] = c(a[(p, p)].re, T::zero());
                a[(q, q)] = c(a[(q, q)].re, T::zero());
            }
        }
    }
    if !done && off_diagonal_norm(&a) > scale * lit(1e-6) {
        return Err(WmlError::NumericalIntegrity(
            "Jacobi eigenvalue iteration did not converge".into(),
        ));
    }
    let mut eig: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(eig)
}

fn off_diagonal_norm<T: Real>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Sum of singular values. Hermitian inputs use their eigenvalues directly;
/// anything else goes through the Hermitian dilation [[0, A], [A†, 0]],
/// whose eigenvalues are ±σ_i.
pub fn trace_norm<T: Real>(a: &Matrix<T>) -> Result<T> {
    if a.is_square() && a.hermiticity_error() <= a.frobenius() * T::epsilon() * lit(8.0) {
        return Ok(hermitian_eigenvalues(a)?.into_iter().map(|x| x.abs()).sum());
    }
    let (r, k) = (a.rows(), a.cols());
    let mut dil = Matrix::zeros(r + k, r + k);
    for i in 0..r {
        for j in 0..k {
            dil[(i, r + j)] = a[(i, j)];
            dil[(r + j, i)] = a[(i, j)].conj();
        }
    }
    let total: T = hermitian_eigenvalues(&dil)?
        .into_iter()
        .map(|x| x.abs())
        .sum();
    Ok(total * lit(0.5))
}

/// Schatten p-norm for p = 1 (trace norm) or p = 2 (Frobenius norm).
pub fn schatten_norm<T: Real>(a: &Matrix<T>, p: u32) -> Result<T> {
    match p {
        1 => trace_norm(a),
        2 => Ok(a.frobenius()),
        _ => Err(WmlError::Argument(format!(
            "Schatten norm p={p} not supported"
        ))),
    }
}

/// Smallest eigenvalue of the Hermitian part.
pub fn min_eigenvalue<T: Real>(m: &Matrix<T>) -> Result<T> {
    Ok(hermitian_eigenvalues(m)?
        .first()
        .copied()
        .unwrap_or_else(T::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cr;

    type M = Matrix<f64>;

    #[test]
    fn eigenvalues_of_known_matrices() {
        let e = hermitian_eigenvalues(&M::diag(&[cr(3.0), cr(-1.0), cr(2.0)])).unwrap();
        assert_eq!(e, vec![-1.0, 2.0, 3.0]);
        let y = M::from_rows(&[vec![cr(0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), cr(0.0)]]).unwrap();
        let e = hermitian_eigenvalues(&y).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-15 && (e[1] - 1.0).abs() < 1e-15);
        // Φ − I/4 has spectrum {3/4, −1/4, −1/4, −1/4}.
        let phi = M::from_real(
            4,
            4,
            &[
                0.5, 0., 0., 0.5, 0., 0., 0., 0., 0., 0., 0., 0., 0.5, 0., 0., 0.5,
            ],
        )
        .unwrap();
        let e = hermitian_eigenvalues(&(&phi - &M::identity(4).scale_real(0.25))).unwrap();
        for (x, y) in e.iter().zip([-0.25, -0.25, -0.25, 0.75]) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn schatten_examples() {
        assert_eq!(schatten_norm(&M::identity(4), 2).unwrap(), 2.0);
        assert!((schatten_norm(&M::diag(&[cr(3.0), cr(-4.0)]), 1).unwrap() - 7.0).abs() < 1e-14);
        let sx = M::from_real(2, 2, &[0., 1., 1., 0.])
            .unwrap()
            .scale_real(0.5f64.sqrt());
        assert!((schatten_norm(&sx, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!(schatten_norm(&sx, 3).is_err());
    }

    #[test]
    fn trace_norm_non_hermitian() {
        // |0⟩⟨1| has a single singular value 1.
        let a = M::unit(2, 0, 1);
        assert!((trace_norm(&a).unwrap() - 1.0).abs() < 1e-14);
        // Rectangular: singular values of [[3, 0, 0], [0, 0, 4]] are 3 and 4.
        let r = M::from_real(2, 3, &[3., 0., 0., 0., 0., 4.]).unwrap();
        assert!((trace_norm(&r).unwrap() - 7.0).abs() < 1e-13);
    }
}
