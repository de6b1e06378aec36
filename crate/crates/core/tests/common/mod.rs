#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use wml_core::channels::DensityMatrix;
use wml_core::Matrix;

pub type M = Matrix<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> M {
    let data = (0..rows * cols)
        .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    M::from_vec(rows, cols, data).unwrap()
}

pub fn unit_operator(rng: &mut impl Rng, d: usize) -> M {
    let g = gaussian(rng, d, d);
    let n = g.frobenius();
    g.scale_real(1.0 / n)
}

pub fn random_density(rng: &mut impl Rng, d: usize) -> M {
    let g = gaussian(rng, d, d);
    let p = g.dot(&g.adjoint());
    let tr = p.trace().re;
    p.scale_real(1.0 / tr)
}

pub fn random_state(rng: &mut impl Rng, d: usize) -> DensityMatrix<f64> {
    DensityMatrix::new(random_density(rng, d)).unwrap()
}

pub fn pauli_x() -> M {
    M::from_real(2, 2, &[0., 1., 1., 0.]).unwrap()
}

pub fn pauli_z() -> M {
    M::from_real(2, 2, &[1., 0., 0., -1.]).unwrap()
}

pub fn ket(n: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![c(0.0, 0.0); n];
    v[i] = c(1.0, 0.0);
    v
}

/// Naive partial trace over the trailing factor of dimension `db`.
pub fn trace_right(m: &M, da: usize, db: usize) -> M {
    let mut out = M::zeros(da, da);
    for i in 0..da {
        for j in 0..da {
            let mut acc = c(0.0, 0.0);
            for k in 0..db {
                acc += m[(i * db + k, j * db + k)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Naive Kronecker product straight from the index formula.
pub fn naive_kron(a: &M, b: &M) -> M {
    let mut out = M::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..out.rows() {
        for j in 0..out.cols() {
            out[(i, j)] = a[(i / b.rows(), j / b.cols())] * b[(i % b.rows(), j % b.cols())];
        }
    }
    out
}

/// Least-squares slope of log(y) against log(x).
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
