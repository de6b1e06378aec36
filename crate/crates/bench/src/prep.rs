//! `prep-state`: coherent preparation of the combined program state.

use serde::Serialize;
use wml_core::engine::{linear_program_state, poly_program_state};
use wml_core::lcu::{lcu_prepare_linear, lcu_prepare_poly, LcuReport, QueryTally};
use wml_core::program::encode_operator;
use wml_core::tensor::vec_inner;

use crate::config::SpecConfig;
use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct QueryCounts {
    pub select: u64,
    pub select_adjoint: u64,
    pub ancilla: u64,
    pub ancilla_adjoint: u64,
    pub total: u64,
}

impl From<QueryTally> for QueryCounts {
    fn from(q: QueryTally) -> Self {
        Self {
            select: q.select,
            select_adjoint: q.select_adjoint,
            ancilla: q.ancilla,
            ancilla_adjoint: q.ancilla_adjoint,
            total: q.total(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PrepReport {
    pub kind: &'static str,
    /// |⟨prepared|direct⟩|² against the state built by summing vectors.
    pub fidelity: f64,
    pub success_prob: f64,
    /// c/λ² from the directly built state.
    pub success_prob_formula: f64,
    pub lambda: f64,
    pub c: f64,
    pub aa_rounds: u64,
    pub amplified_prob: f64,
    pub residual: f64,
    pub queries: QueryCounts,
}

fn report(
    kind: &'static str,
    rep: LcuReport<f64>,
    direct: &[num_complex::Complex64],
    c: f64,
) -> PrepReport {
    PrepReport {
        kind,
        fidelity: vec_inner(rep.prepared.amps(), direct).norm_sqr(),
        success_prob: rep.success_prob,
        success_prob_formula: c / (rep.lambda * rep.lambda),
        lambda: rep.lambda,
        c: rep.c,
        aa_rounds: rep.aa_rounds,
        amplified_prob: rep.amplified_prob,
        residual: rep.residual(),
        queries: rep.queries.into(),
    }
}

pub fn prep_state(spec: &SpecConfig) -> Result<PrepReport> {
    match spec {
        SpecConfig::Linear { .. } => {
            let lin = spec.linear()?;
            let terms = lin
                .terms()
                .iter()
                .map(|(c, l)| Ok((*c, encode_operator(l)?)))
                .collect::<wml_core::Result<Vec<_>>>()?;
            let rep = lcu_prepare_linear(&terms)?;
            let (direct, c) = linear_program_state(&lin)?;
            Ok(report("linear", rep, direct.amplitudes(), c))
        }
        SpecConfig::Poly { .. } => {
            let poly = spec.poly()?;
            let rep = lcu_prepare_poly(&poly)?;
            let (direct, c) = poly_program_state(&poly)?;
            Ok(report("poly", rep, &direct, c))
        }
        SpecConfig::Lindblad { .. } => Err(BenchError::Config(
            "prep-state needs a linear or poly spec".into(),
        )),
    }
}
