//! Tensor-product structure: Kronecker products, partial traces, subsystem
//! permutations and the fixed permutation operators built from them.
//!
//! Subsystem 0 is always the leftmost tensor factor, so a basis index
//! decomposes as `i = ((i_0 · d_1 + i_1) · d_2 + i_2) …`.

use num_traits::{One, Zero};

use super::matrix::{check_entries, Matrix};
use crate::error::{Result, WmlError};
use crate::scalar::{Real, C};

/// Ordered subsystem dimensions of a composite register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDims {
    dims: Vec<usize>,
    total: usize,
}

impl SystemDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(WmlError::Argument("at least one subsystem required".into()));
        }
        if dims.contains(&0) {
            return Err(WmlError::Argument(
                "subsystem dimensions must be positive".into(),
            ));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| WmlError::Argument("total dimension overflows".into()))?;
        Ok(Self { dims, total })
    }

    /// `count` copies of a `d`-dimensional subsystem.
    pub fn uniform(d: usize, count: usize) -> Result<Self> {
        Self::new(vec![d; count])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Row-major strides: index = Σ digit_k · stride_k.
    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.dims[k + 1];
        }
        s
    }

    fn digits(&self, mut index: usize, out: &mut [usize]) {
        for k in (0..self.dims.len()).rev() {
            out[k] = index % self.dims[k];
            index /= self.dims[k];
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    check_entries(rows, cols)?;
    let mut out = Matrix::zeros(rows, cols);
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let x = a[(ia, ja)];
            if x.is_zero() {
                continue;
            }
            for ib in 0..b.rows() {
                let r = ia * b.rows() + ib;
                for jb in 0..b.cols() {
                    out[(r, ja * b.cols() + jb)] = x * b[(ib, jb)];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of a sequence of factors, left to right.
pub fn kron_all<T: Real>(factors: &[&Matrix<T>]) -> Result<Matrix<T>> {
    let mut it = factors.iter();
    let first = it
        .next()
        .ok_or_else(|| WmlError::Argument("empty Kronecker product".into()))?;
    it.try_fold((*first).clone(), |acc, f| kron(&acc, f))
}

/// Kronecker product of vectors.
pub fn kron_vec<T: Real>(a: &[C<T>], b: &[C<T>]) -> Vec<C<T>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        out.extend(b.iter().map(|&y| x * y));
    }
    out
}

fn check_square_dims<T: Real>(m: &Matrix<T>, dims: &SystemDims) -> Result<()> {
    if !m.is_square() || m.rows() != dims.total() {
        return Err(WmlError::Shape(format!(
            "operator is {}x{} but subsystem dimensions {:?} give total {}",
            m.rows(),
            m.cols(),
            dims.dims(),
            dims.total()
        )));
    }
    Ok(())
}

/// Traces out every subsystem not listed in `keep`; kept subsystems stay in
/// their original relative order.
pub fn partial_trace<T: Real>(
    m: &Matrix<T>,
    dims: &SystemDims,
    keep: &[usize],
) -> Result<Matrix<T>> {
    check_square_dims(m, dims)?;
    let n = dims.len();
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.iter().any(|&k| k >= n) {
        return Err(WmlError::Shape(format!(
            "keep set {keep:?} out of range for {n} subsystems"
        )));
    }
    let traced: Vec<usize> = (0..n).filter(|k| !kept.contains(k)).collect();
    let strides = dims.strides();
    let keep_dims: Vec<usize> = kept.iter().map(|&k| dims.dims()[k]).collect();
    let trace_dims: Vec<usize> = traced.iter().map(|&k| dims.dims()[k]).collect();
    let keep_total: usize = keep_dims.iter().product();
    let trace_total: usize = trace_dims.iter().product();

    // Offsets into the full index contributed by each kept / traced multi-index.
    let offsets = |sel: &[usize], sel_dims: &[usize], total: usize| -> Vec<usize> {
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; sel.len()];
        for _ in 0..total {
            out.push(sel.iter().zip(&digits).map(|(&k, &d)| d * strides[k]).sum());
            for pos in (0..sel.len()).rev() {
                digits[pos] += 1;
                if digits[pos] < sel_dims[pos] {
                    break;
                }
                digits[pos] = 0;
            }
        }
        out
    };
    let keep_off = offsets(&kept, &keep_dims, keep_total);
    let trace_off = offsets(&traced, &trace_dims, trace_total);

    let mut out = Matrix::zeros(keep_total, keep_total);
    for (a, &ra) in keep_off.iter().enumerate() {
        for (b, &rb) in keep_off.iter().enumerate() {
            let mut acc = C::zero();
            for &t in &trace_off {
                acc += m[(ra + t, rb + t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(WmlError::Argument(format!(
            "permutation {perm:?} has wrong length for {n} subsystems"
        )));
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(WmlError::Argument(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

/// For each index of the permuted register, the index it reads from in the
/// original register. New subsystem `i` is old subsystem `perm[i]`.
fn permutation_map(dims: &SystemDims, perm: &[usize]) -> Result<(Vec<usize>, SystemDims)> {
    check_permutation(perm, dims.len())?;
    let new_dims = SystemDims::new(perm.iter().map(|&p| dims.dims()[p]).collect())?;
    let old_strides = dims.strides();
    let mut map = Vec::with_capacity(dims.total());
    let mut digits = vec![0usize; dims.len()];
    for new_index in 0..dims.total() {
        new_dims.digits(new_index, &mut digits);
        map.push(
            digits
                .iter()
                .zip(perm)
                .map(|(&d, &p)| d * old_strides[p])
                .sum(),
        );
    }
    Ok((map, new_dims))
}

/// Reorders the subsystems of a square operator: subsystem `i` of the result
/// is subsystem `perm[i]` of the input. Equivalent to conjugation by the
/// corresponding permutation unitary.
pub fn permute_subsystems<T: Real>(
    m: &Matrix<T>,
    dims: &SystemDims,
    perm: &[usize],
) -> Result<Matrix<T>> {
    check_square_dims(m, dims)?;
    let (map, _) = permutation_map(dims, perm)?;
    let n = dims.total();
    let mut out = Matrix::zeros(n, n);
    for (i, &oi) in map.iter().enumerate() {
        for (j, &oj) in map.iter().enumerate() {
            out[(i, j)] = m[(oi, oj)];
        }
    }
    Ok(out)
}

/// Vector counterpart of [`permute_subsystems`].
pub fn permute_vector<T: Real>(v: &[C<T>], dims: &SystemDims, perm: &[usize]) -> Result<Vec<C<T>>> {
    if v.len() != dims.total() {
        return Err(WmlError::Shape(format!(
            "vector of length {} for total dimension {}",
            v.len(),
            dims.total()
        )));
    }
    let (map, _) = permutation_map(dims, perm)?;
    Ok(map.iter().map(|&o| v[o]).collect())
}

/// Dimensions after applying `perm`.
pub fn permuted_dims(dims: &SystemDims, perm: &[usize]) -> Result<SystemDims> {
    check_permutation(perm, dims.len())?;
    SystemDims::new(perm.iter().map(|&p| dims.dims()[p]).collect())
}

/// Unnormalized maximally entangled vector Σ_j |j⟩|j⟩.
pub fn gamma_vector<T: Real>(d: usize) -> Vec<C<T>> {
    let mut v = vec![C::zero(); d * d];
    for j in 0..d {
        v[j * d + j] = C::one();
    }
    v
}

/// Two-party exchange Σ_{ij} |i⟩⟨j| ⊗ |j⟩⟨i|.
pub fn swap_operator<T: Real>(d: usize) -> Matrix<T> {
    let mut s = Matrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            s[(j * d + i, i * d + j)] = C::one();
        }
    }
    s
}

/// Cyclic shift on `m` parties of dimension `d`:
/// |a₁,a₂,…,a_m⟩ ↦ |a_m,a₁,…,a_{m−1}⟩.
pub fn cycswap_operator<T: Real>(d: usize, m: usize) -> Result<Matrix<T>> {
    if d < 2 || m < 2 {
        return Err(WmlError::Argument(format!(
            "cyclic shift needs d ≥ 2 and m ≥ 2 (got d={d}, m={m})"
        )));
    }
    let total = (d as u128).pow(m as u32);
    if total > usize::MAX as u128 {
        return Err(WmlError::Size {
            entries: total * total,
            limit: super::matrix::max_entries(),
        });
    }
    let n = total as usize;
    check_entries(n, n)?;
    let dims = SystemDims::uniform(d, m)?;
    // Output subsystem 0 holds input party m−1; output k holds input k−1.
    let perm: Vec<usize> = std::iter::once(m - 1).chain(0..m - 1).collect();
    let (map, _) = permutation_map(&dims, &perm)?;
    let mut u = Matrix::zeros(n, n);
    for (out, &inp) in map.iter().enumerate() {
        u[(out, inp)] = C::one();
    }
    Ok(u)
}

/// Hilbert–Schmidt inner product Tr[a†b].
pub fn hs_inner<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<C<T>> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(WmlError::Shape(format!(
            "Hilbert–Schmidt product of {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.conj() * y)
        .sum())
}
