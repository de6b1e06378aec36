use crate::channels::LindbladSpec;
use crate::error::{Result, WmlError};
use crate::scalar::{lit, Real};
use crate::tensor::Matrix;

fn check_unit<T: Real>(d: usize, l: &Matrix<T>, what: &str) -> Result<()> {
    if (l.rows(), l.cols()) != (d, d) {
        return Err(WmlError::Spec(format!(
            "{what} is {}x{}, expected {d}x{d}",
            l.rows(),
            l.cols()
        )));
    }
    if !l.is_finite() {
        return Err(WmlError::Spec(format!("{what} has non-finite entries")));
    }
    let n = l.frobenius();
    if (n - T::one()).abs() > lit(T::STATE_TOL) {
        return Err(WmlError::Spec(format!(
            "{what} must have unit Hilbert–Schmidt norm, has {n}"
        )));
    }
    Ok(())
}

fn check_coefficient<T: Real>(c: T, what: &str) -> Result<()> {
    if !(c > T::zero()) || !c.is_finite() {
        return Err(WmlError::Argument(format!(
            "{what} must be positive, got {c}"
        )));
    }
    Ok(())
}

/// Single jump L = Σ_k c_k L_k with positive weights and unit-norm L_k.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSpec<T: Real> {
    d: usize,
    terms: Vec<(T, Matrix<T>)>,
}

impl<T: Real> LinearSpec<T> {
    pub fn new(d: usize, terms: Vec<(T, Matrix<T>)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(WmlError::Spec(
                "linear combination needs at least one term".into(),
            ));
        }
        for (k, (ck, lk)) in terms.iter().enumerate() {
            check_coefficient(*ck, &format!("c_{}", k + 1))?;
            check_unit(d, lk, &format!("L_{}", k + 1))?;
        }
        let out = Self { d, terms };
        if !(out.operator().frobenius() > lit(1e-12)) {
            return Err(WmlError::Spec("linear combination vanishes".into()));
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> &[(T, Matrix<T>)] {
        &self.terms
    }

    /// L = Σ_k c_k L_k.
    pub fn operator(&self) -> Matrix<T> {
        let mut l = Matrix::zeros(self.d, self.d);
        for (ck, lk) in &self.terms {
            l += &lk.scale_real(*ck);
        }
        l
    }

    /// c = ‖L‖₂².
    pub fn normalization(&self) -> T {
        self.operator().frobenius().powi(2)
    }

    /// Σ_k c_k.
    pub fn weight_sum(&self) -> T {
        self.terms.iter().map(|(c, _)| *c).sum()
    }

    /// Lindbladian with L as its only jump: the target of the third algorithm.
    pub fn target(&self) -> Result<LindbladSpec<T>> {
        LindbladSpec::from_jumps(self.d, vec![self.operator()])
    }
}

/// Single jump L = Σ_s c_s T_s with T_s = L_{s[1]} ⋯ L_{s[|s|]}.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySpec<T: Real> {
    d: usize,
    ops: Vec<Matrix<T>>,
    strings: Vec<(Vec<usize>, T)>,
    degree: usize,
}

impl<T: Real> PolySpec<T> {
    /// `strings` hold zero-based indices into `ops`.
    pub fn new(d: usize, ops: Vec<Matrix<T>>, strings: Vec<(Vec<usize>, T)>) -> Result<Self> {
        if ops.is_empty() {
            return Err(WmlError::Spec(
                "polynomial needs at least one operator".into(),
            ));
        }
        if strings.is_empty() {
            return Err(WmlError::Spec(
                "polynomial needs at least one string".into(),
            ));
        }
        for (k, l) in ops.iter().enumerate() {
            check_unit(d, l, &format!("L_{}", k + 1))?;
        }
        for (s, cs) in &strings {
            if s.is_empty() {
                return Err(WmlError::Spec("empty string in polynomial".into()));
            }
            if let Some(&bad) = s.iter().find(|&&k| k >= ops.len()) {
                return Err(WmlError::Spec(format!(
                    "string references operator {} but only {} are defined",
                    bad + 1,
                    ops.len()
                )));
            }
            check_coefficient(*cs, "string coefficient")?;
        }
        let degree = strings.iter().map(|(s, _)| s.len()).max().unwrap_or(1);
        let out = Self {
            d,
            ops,
            strings,
            degree,
        };
        if !(out.operator().frobenius() > lit(1e-12)) {
            return Err(WmlError::Spec("polynomial vanishes".into()));
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn operators(&self) -> &[Matrix<T>] {
        &self.ops
    }

    pub fn strings(&self) -> &[(Vec<usize>, T)] {
        &self.strings
    }

    /// T_s for a string of zero-based operator indices.
    pub fn monomial(&self, s: &[usize]) -> Matrix<T> {
        s.iter()
            .fold(Matrix::identity(self.d), |acc, &k| acc.dot(&self.ops[k]))
    }

    /// L = Σ_s c_s T_s.
    pub fn operator(&self) -> Matrix<T> {
        let mut l = Matrix::zeros(self.d, self.d);
        for (s, cs) in &self.strings {
            l += &self.monomial(s).scale_real(*cs);
        }
        l
    }

    /// Σ_s c_s.
    pub fn weight_sum(&self) -> T {
        self.strings.iter().map(|(_, c)| *c).sum()
    }

    pub fn target(&self) -> Result<LindbladSpec<T>> {
        LindbladSpec::from_jumps(self.d, vec![self.operator()])
    }
}
