//! JSON experiment configs. Complex entries are `[re, im]` pairs and
//! matrices are row-major nested arrays.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use wml_core::channels::{DensityMatrix, LindbladSpec};
use wml_core::engine::{Algorithm, LinearSpec, Ordering, PolySpec, Problem};
use wml_core::Matrix;

use crate::error::{BenchError, Result};

pub type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianTerm {
    pub c: f64,
    pub sigma: RawMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LinearTerm {
    pub c: f64,
    pub l: RawMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PolyString {
    /// One-based operator indices.
    pub word: Vec<usize>,
    pub c: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecConfig {
    Lindblad {
        d: usize,
        #[serde(default)]
        hamiltonian: Vec<HamiltonianTerm>,
        #[serde(default)]
        jumps: Vec<RawMatrix>,
    },
    Linear {
        d: usize,
        terms: Vec<LinearTerm>,
    },
    Poly {
        d: usize,
        operators: Vec<RawMatrix>,
        strings: Vec<PolyString>,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, Default, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    #[default]
    Expectation,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OrderingName {
    Forward,
    Palindromic,
}

impl OrderingName {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Forward => "forward",
            Self::Palindromic => "palindromic",
        }
    }
}

impl From<OrderingName> for Ordering {
    fn from(o: OrderingName) -> Self {
        match o {
            OrderingName::Forward => Ordering::Forward,
            OrderingName::Palindromic => Ordering::Palindromic,
        }
    }
}

fn default_algorithm() -> u8 {
    1
}

fn default_t() -> f64 {
    1.0
}

fn default_trajectories() -> usize {
    100
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub spec: SpecConfig,
    #[serde(default = "default_algorithm")]
    pub algorithm: u8,
    #[serde(default = "default_t")]
    pub t: f64,
    /// Step count for `simulate`; the last of `n_values` when absent.
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub n_values: Vec<usize>,
    #[serde(default)]
    pub mode: ModeName,
    #[serde(default = "default_trajectories")]
    pub trajectories: usize,
    /// Second algorithm only; a sweep without it covers both orderings.
    #[serde(default)]
    pub ordering: Option<OrderingName>,
    #[serde(default)]
    pub seed: u64,
    /// Defaults to |0⟩⟨0|.
    #[serde(default)]
    pub initial_state: Option<RawMatrix>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

pub fn to_matrix(raw: &RawMatrix, name: &str) -> Result<Matrix<f64>> {
    let rows: Vec<Vec<Complex64>> = raw
        .iter()
        .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    Matrix::from_rows(&rows).map_err(|e| BenchError::Config(format!("{name}: {e}")))
}

pub fn from_matrix(m: &Matrix<f64>) -> RawMatrix {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

impl SpecConfig {
    pub fn dim(&self) -> usize {
        match self {
            Self::Lindblad { d, .. } | Self::Linear { d, .. } | Self::Poly { d, .. } => *d,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Lindblad { .. } => "lindblad",
            Self::Linear { .. } => "linear",
            Self::Poly { .. } => "poly",
        }
    }

    pub fn lindblad(&self) -> Result<LindbladSpec<f64>> {
        match self {
            Self::Lindblad {
                d,
                hamiltonian,
                jumps,
            } => {
                let h = hamiltonian
                    .iter()
                    .enumerate()
                    .map(|(j, term)| {
                        Ok((term.c, to_matrix(&term.sigma, &format!("sigma_{}", j + 1))?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let l = jumps
                    .iter()
                    .enumerate()
                    .map(|(k, m)| to_matrix(m, &format!("jump {}", k + 1)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(LindbladSpec::new(*d, h, l)?)
            }
            _ => Err(BenchError::Config(format!(
                "expected a lindblad spec, got {}",
                self.kind()
            ))),
        }
    }

    pub fn linear(&self) -> Result<LinearSpec<f64>> {
        match self {
            Self::Linear { d, terms } => {
                let t = terms
                    .iter()
                    .enumerate()
                    .map(|(k, term)| Ok((term.c, to_matrix(&term.l, &format!("L_{}", k + 1))?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(LinearSpec::new(*d, t)?)
            }
            _ => Err(BenchError::Config(format!(
                "expected a linear spec, got {}",
                self.kind()
            ))),
        }
    }

    pub fn poly(&self) -> Result<PolySpec<f64>> {
        match self {
            Self::Poly {
                d,
                operators,
                strings,
            } => {
                let ops = operators
                    .iter()
                    .enumerate()
                    .map(|(k, m)| to_matrix(m, &format!("L_{}", k + 1)))
                    .collect::<Result<Vec<_>>>()?;
                let words = strings
                    .iter()
                    .map(|s| {
                        let word = s
                            .word
                            .iter()
                            .map(|&k| {
                                k.checked_sub(1).ok_or_else(|| {
                                    BenchError::Config("operator indices are one-based".into())
                                })
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok((word, s.c))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(PolySpec::new(*d, ops, words)?)
            }
            _ => Err(BenchError::Config(format!(
                "expected a poly spec, got {}",
                self.kind()
            ))),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let alg = self.algorithm()?;
        let expected = match alg {
            Algorithm::One | Algorithm::Two => "lindblad",
            Algorithm::Three => "linear",
            Algorithm::Four => "poly",
        };
        if self.spec.kind() != expected {
            return Err(BenchError::Config(format!(
                "algorithm {} needs a {expected} spec, got {}",
                self.algorithm,
                self.spec.kind()
            )));
        }
        if self.n_values.contains(&0) || self.n == Some(0) {
            return Err(BenchError::Config("step counts must be at least 1".into()));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BenchError::Config(
                "n_values must be strictly increasing".into(),
            ));
        }
        if !(self.t >= 0.0) || !self.t.is_finite() {
            return Err(BenchError::Config(format!(
                "t must be finite and nonnegative, got {}",
                self.t
            )));
        }
        if self.trajectories == 0 {
            return Err(BenchError::Config("trajectories must be at least 1".into()));
        }
        Ok(())
    }

    pub fn algorithm(&self) -> Result<Algorithm> {
        Algorithm::from_number(self.algorithm).map_err(|e| BenchError::Config(e.to_string()))
    }

    pub fn problem(&self) -> Result<Problem<f64>> {
        Ok(match self.algorithm()? {
            Algorithm::One | Algorithm::Two => Problem::Lindblad(self.spec.lindblad()?),
            Algorithm::Three => Problem::Linear(self.spec.linear()?),
            Algorithm::Four => Problem::Poly(self.spec.poly()?),
        })
    }

    pub fn initial_state(&self) -> Result<DensityMatrix<f64>> {
        let d = self.spec.dim();
        match &self.initial_state {
            Some(raw) => {
                let m = to_matrix(raw, "initial_state")?;
                if m.rows() != d {
                    return Err(BenchError::Config(format!(
                        "initial_state is {}x{} but the spec has d={d}",
                        m.rows(),
                        m.cols()
                    )));
                }
                DensityMatrix::new(m).map_err(|e| BenchError::Config(format!("initial_state: {e}")))
            }
            None => Ok(DensityMatrix::pure(&unit(d))?),
        }
    }
}

fn unit(d: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    if d > 0 {
        v[0] = Complex64::new(1.0, 0.0);
    }
    v
}
