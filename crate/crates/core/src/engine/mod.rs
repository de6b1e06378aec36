//! The four wave-matrix Lindbladization algorithms, their run configuration
//! and resource accounting.

mod algorithms;
mod interaction;
mod specs;

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use crate::channels::{DensityMatrix, SuperOperator};
use crate::error::{Result, WmlError};
use crate::scalar::{lit, Real};

pub use algorithms::{
    alg1_run, alg1_step_expectation, alg2_run, alg3_run, alg4_run, channel_of_algorithm,
    copies_for_spec, copies_needed, interleaved_to_canonical, linear_program_state,
    poly_program_state, run, Algorithm, CopyBudget, Problem,
};
pub(crate) use interaction::padding_weight;
pub use interaction::{build_m, build_m_poly, CycJump, DEFAULT_ORDER, DENSE_MAX_DIM};
pub use specs::{LinearSpec, PolySpec};

/// How expectations over the sampled program register are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Average over ω exactly; the run produces a channel.
    Expectation,
    /// Sample ω's classical register per step, averaging `trajectories` runs.
    MonteCarlo { seed: u64, trajectories: usize },
}

/// Term order within one sweep of the second algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ordering {
    /// Jumps K…1 then Hamiltonian terms J…1.
    Forward,
    /// The forward half followed by its mirror image, each at half duration.
    #[default]
    Palindromic,
}

/// How e^{𝓜Δ} is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelMode {
    /// Dense when the total dimension is at most [`DENSE_MAX_DIM`], action otherwise.
    #[default]
    Auto,
    /// Always exponentiate the full superoperator.
    Dense,
    /// Truncated series applied to operators; `None` picks the default substep count.
    Action {
        substeps: Option<usize>,
        order: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig<T: Real> {
    pub t: T,
    pub n: usize,
    pub mode: Mode,
    pub ordering: Ordering,
    pub channel_mode: ChannelMode,
    /// Accuracy passed to every matrix exponential.
    pub tol: T,
}

impl<T: Real> RunConfig<T> {
    pub fn new(t: T, n: usize) -> Self {
        Self {
            t,
            n,
            mode: Mode::Expectation,
            ordering: Ordering::default(),
            channel_mode: ChannelMode::default(),
            tol: lit(T::EXP_TOL),
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_ordering(mut self, ordering: Ordering) -> Self {
        self.ordering = ordering;
        self
    }

    pub fn with_channel_mode(mut self, channel_mode: ChannelMode) -> Self {
        self.channel_mode = channel_mode;
        self
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(WmlError::Argument("step count n must be at least 1".into()));
        }
        if !(self.t >= T::zero()) || !self.t.is_finite() {
            return Err(WmlError::Argument(format!(
                "evolution time must be finite and nonnegative, got {}",
                self.t
            )));
        }
        if !(self.tol > T::zero()) {
            return Err(WmlError::Argument(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if let Mode::MonteCarlo {
            trajectories: 0, ..
        } = self.mode
        {
            return Err(WmlError::Argument(
                "Monte-Carlo mode needs at least one trajectory".into(),
            ));
        }
        if let ChannelMode::Action { substeps, order } = self.channel_mode {
            if order == 0 || substeps == Some(0) {
                return Err(WmlError::Argument(
                    "action mode needs positive order and substeps".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Program state consumed by a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Resource {
    /// A copy of ω, whose branch is not resolved in expectation mode.
    Omega,
    /// σ_j, zero-based.
    Sigma(usize),
    /// ψ_k, zero-based.
    Psi(usize),
    /// The combined program state φ of the LCU-based algorithms.
    Phi,
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Omega => write!(f, "omega"),
            Self::Sigma(j) => write!(f, "sigma_{}", j + 1),
            Self::Psi(k) => write!(f, "psi_{}", k + 1),
            Self::Phi => write!(f, "phi"),
        }
    }
}

/// Output of one algorithm run.
#[derive(Debug, Clone)]
pub struct RunReport<T: Real> {
    /// Output state, averaged over trajectories in Monte-Carlo mode.
    pub final_state: DensityMatrix<T>,
    /// Assembled channel (expectation mode only).
    pub channel: Option<SuperOperator<T>>,
    /// Copies consumed per program state.
    pub consumed: BTreeMap<Resource, u64>,
    /// Expected copies per program state (|c_j|/c·n, ‖L_k‖₂²/c·n for ω).
    pub expected_consumption: BTreeMap<Resource, f64>,
    /// Choi-state trace distance to the exact channel (expectation mode only).
    pub error_vs_oracle: Option<T>,
    pub wall_time: Duration,
}

impl<T: Real> RunReport<T> {
    pub fn total_consumed(&self) -> u64 {
        self.consumed.values().sum()
    }
}
