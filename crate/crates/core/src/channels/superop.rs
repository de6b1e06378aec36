use crate::error::{Result, WmlError};
use crate::scalar::{cr, lit, Real, C};
use crate::tensor::{check_entries, kron, mat_exp, Matrix};

use super::density::{density_violation, DensityMatrix};
use super::spec::LindbladSpec;

/// Column-stacking vectorization: entry (i, j) lands at index j·d + i.
pub fn vectorize<T: Real>(a: &Matrix<T>) -> Result<Vec<C<T>>> {
    if !a.is_square() {
        return Err(WmlError::Shape(format!(
            "vectorizing a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let d = a.rows();
    let mut v = Vec::with_capacity(d * d);
    for j in 0..d {
        for i in 0..d {
            v.push(a[(i, j)]);
        }
    }
    Ok(v)
}

/// Inverse of [`vectorize`].
pub fn devectorize<T: Real>(v: &[C<T>]) -> Result<Matrix<T>> {
    let d = (v.len() as f64).sqrt().round() as usize;
    if d * d != v.len() || d == 0 {
        return Err(WmlError::Shape(format!(
            "length {} is not a perfect square",
            v.len()
        )));
    }
    let mut m = Matrix::zeros(d, d);
    for j in 0..d {
        for i in 0..d {
            m[(i, j)] = v[j * d + i];
        }
    }
    Ok(m)
}

/// Linear map on d×d operators acting on column-stacked vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator<T: Real> {
    d: usize,
    mat: Matrix<T>,
}

impl<T: Real> SuperOperator<T> {
    pub fn new(d: usize, mat: Matrix<T>) -> Result<Self> {
        if !mat.is_square() || mat.rows() != d * d {
            return Err(WmlError::Shape(format!(
                "superoperator on d={d} needs a {0}x{0} matrix, got {1}x{2}",
                d * d,
                mat.rows(),
                mat.cols()
            )));
        }
        Ok(Self { d, mat })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            d,
            mat: Matrix::identity(d * d),
        }
    }

    /// Builds the superoperator of a linear map from its action on matrix units.
    pub fn from_fn(d: usize, mut f: impl FnMut(&Matrix<T>) -> Result<Matrix<T>>) -> Result<Self> {
        check_entries(d * d, d * d)?;
        let mut mat = Matrix::zeros(d * d, d * d);
        for j in 0..d {
            for i in 0..d {
                let out = f(&Matrix::unit(d, i, j))?;
                let col = vectorize(&out)?;
                if col.len() != d * d {
                    return Err(WmlError::Shape("map changes the dimension".into()));
                }
                for (r, z) in col.into_iter().enumerate() {
                    mat[(r, j * d + i)] = z;
                }
            }
        }
        Ok(Self { d, mat })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.mat
    }

    /// Applies the map to any d×d operator.
    pub fn apply_matrix(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        if (x.rows(), x.cols()) != (self.d, self.d) {
            return Err(WmlError::Shape(format!(
                "{}x{} input for a d={} superoperator",
                x.rows(),
                x.cols(),
                self.d
            )));
        }
        devectorize(&self.mat.apply(&vectorize(x)?))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if next.d != self.d {
            return Err(WmlError::Shape(
                "composing superoperators of different dimension".into(),
            ));
        }
        Ok(Self {
            d: self.d,
            mat: next.mat.dot(&self.mat),
        })
    }

    /// `self` applied `n` times.
    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Matrix::identity(self.d * self.d);
        let mut base = self.mat.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.dot(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.dot(&base);
            }
        }
        Self {
            d: self.d,
            mat: acc,
        }
    }

    /// Convex or general linear combination Σ w_i S_i.
    pub fn combine(d: usize, parts: &[(T, &Self)]) -> Result<Self> {
        let mut mat = Matrix::zeros(d * d, d * d);
        for (w, s) in parts {
            if s.d != d {
                return Err(WmlError::Shape(
                    "mixing superoperators of different dimension".into(),
                ));
            }
            mat += &s.mat.scale_real(*w);
        }
        Ok(Self { d, mat })
    }
}

/// Applies a channel to a state and checks the output is still a state at
/// a loosened tolerance.
pub fn apply_superop<T: Real>(
    s: &SuperOperator<T>,
    rho: &DensityMatrix<T>,
) -> Result<DensityMatrix<T>> {
    let out = s.apply_matrix(rho.matrix())?;
    let tol: T = lit(T::STATE_TOL * 100.0);
    match density_violation(&out, tol)? {
        None => Ok(DensityMatrix::trusted(out)),
        Some(msg) => Err(WmlError::NumericalIntegrity(format!(
            "channel output is not a state: {msg}"
        ))),
    }
}

/// Superoperator of X ↦ −i[H, X] + Σ_k (L_k X L_k† − ½{L_k†L_k, X}) on any
/// dimension, assembled from vec(AXB) = (Bᵀ ⊗ A) vec(X).
pub fn generator_superop<T: Real>(
    n: usize,
    h: Option<&Matrix<T>>,
    jumps: &[&Matrix<T>],
) -> Result<Matrix<T>> {
    check_entries(n * n, n * n)?;
    let id = Matrix::identity(n);
    let mut g = Matrix::zeros(n * n, n * n);
    let shape_ok = |m: &Matrix<T>| m.rows() == n && m.cols() == n;
    if let Some(h) = h {
        if !shape_ok(h) {
            return Err(WmlError::Shape("Hamiltonian dimension mismatch".into()));
        }
        let minus_i = C::new(T::zero(), -T::one());
        g += &(&kron(&id, h)? - &kron(&h.transpose(), &id)?).scale(minus_i);
    }
    let half = cr(lit::<T>(0.5));
    for l in jumps {
        if !shape_ok(l) {
            return Err(WmlError::Shape("jump operator dimension mismatch".into()));
        }
        let ldl = l.adjoint().dot(l);
        g += &kron(&l.conj(), l)?;
        g -= &kron(&id, &ldl)?.scale(half);
        g -= &kron(&ldl.transpose(), &id)?.scale(half);
    }
    Ok(g)
}

/// Vectorized Lindbladian of a spec.
pub fn liouvillian<T: Real>(spec: &LindbladSpec<T>) -> Result<SuperOperator<T>> {
    let d = spec.dim();
    let h = spec.hamiltonian();
    let jumps: Vec<&Matrix<T>> = spec.jumps().iter().collect();
    let h = if spec.hamiltonian_terms().is_empty() {
        None
    } else {
        Some(&h)
    };
    SuperOperator::new(d, generator_superop(d, h, &jumps)?)
}

/// The exact channel e^{𝓛t}.
pub fn exact_channel<T: Real>(spec: &LindbladSpec<T>, t: T, tol: T) -> Result<SuperOperator<T>> {
    if !(t >= T::zero()) {
        return Err(WmlError::Argument(format!(
            "evolution time must be nonnegative, got {t}"
        )));
    }
    let l = liouvillian(spec)?;
    if t.is_zero() {
        return Ok(SuperOperator::identity(spec.dim()));
    }
    SuperOperator::new(spec.dim(), mat_exp(&l.matrix().scale_real(t), tol)?)
}
