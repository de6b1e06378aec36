//! `simulate` and `sweep`.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use wml_core::engine::{run, Algorithm, Mode, RunConfig, RunReport};
use wml_core::fit::loglog_fit;

use crate::config::{from_matrix, ExperimentConfig, ModeName, OrderingName, RawMatrix};
use crate::error::{BenchError, Result};
use crate::Overrides;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SimulateReport {
    pub algorithm: u8,
    pub ordering: Option<OrderingName>,
    pub mode: ModeName,
    pub trajectories: Option<usize>,
    pub seed: Option<u64>,
    pub t: f64,
    pub n: usize,
    /// Choi-state trace distance to the exact channel; absent in Monte-Carlo mode.
    pub choi_proxy_error: Option<f64>,
    pub consumed: BTreeMap<String, u64>,
    pub consumed_total: u64,
    pub expected_consumption: BTreeMap<String, f64>,
    pub final_state: RawMatrix,
    pub wall_ms: Option<f64>,
}

fn ordering_for(cfg: &ExperimentConfig, ov: &Overrides) -> Option<OrderingName> {
    ov.ordering.or(cfg.ordering)
}

fn run_config(
    cfg: &ExperimentConfig,
    ov: &Overrides,
    n: usize,
    ordering: Option<OrderingName>,
) -> RunConfig<f64> {
    let mut rc = RunConfig::new(cfg.t, n);
    if let Some(o) = ordering {
        rc = rc.with_ordering(o.into());
    }
    if let Some(tol) = ov.tol {
        rc = rc.with_tol(tol);
    }
    if ov.mode.unwrap_or(cfg.mode) == ModeName::MonteCarlo {
        rc = rc.with_mode(Mode::MonteCarlo {
            seed: ov.seed.unwrap_or(cfg.seed),
            trajectories: cfg.trajectories,
        });
    }
    rc
}

fn by_name<V: Copy>(m: &BTreeMap<wml_core::engine::Resource, V>) -> BTreeMap<String, V> {
    m.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn millis(r: &RunReport<f64>) -> f64 {
    r.wall_time.as_secs_f64() * 1e3
}

pub fn simulate(cfg: &ExperimentConfig, ov: &Overrides) -> Result<SimulateReport> {
    let n = cfg
        .n
        .or_else(|| cfg.n_values.last().copied())
        .ok_or_else(|| BenchError::Config("simulate needs `n` or `n_values`".into()))?;
    let alg = cfg.algorithm()?;
    let ordering = match alg {
        Algorithm::Two => Some(ordering_for(cfg, ov).unwrap_or(OrderingName::Palindromic)),
        _ => None,
    };
    let rc = run_config(cfg, ov, n, ordering);
    let problem = cfg.problem()?;
    let rho = cfg.initial_state()?;
    let rep = run(alg, &problem, &rho, &rc)?;
    let (mode, trajectories, seed) = match rc.mode {
        Mode::Expectation => (ModeName::Expectation, None, None),
        Mode::MonteCarlo { seed, trajectories } => {
            (ModeName::MonteCarlo, Some(trajectories), Some(seed))
        }
    };
    Ok(SimulateReport {
        algorithm: alg.number(),
        ordering,
        mode,
        trajectories,
        seed,
        t: cfg.t,
        n,
        choi_proxy_error: rep.error_vs_oracle,
        consumed: by_name(&rep.consumed),
        consumed_total: rep.total_consumed(),
        expected_consumption: by_name(&rep.expected_consumption),
        final_state: from_matrix(rep.final_state.matrix()),
        wall_ms: ov.timing.then(|| millis(&rep)),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub algorithm: u8,
    pub ordering: Option<OrderingName>,
    pub t: f64,
    pub n: usize,
    pub choi_proxy_error: f64,
    pub wall_ms: Option<f64>,
    pub consumed: BTreeMap<String, u64>,
}

impl SweepRow {
    pub fn consumed_total(&self) -> u64 {
        self.consumed.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of ln(error) against ln(n) per ordering; `None`
    /// when some error is zero.
    pub slopes: Vec<(Option<OrderingName>, Option<f64>)>,
}

pub const SWEEP_HEADER: [&str; 8] = [
    "algorithm",
    "ordering",
    "t",
    "n",
    "choi_proxy_error",
    "wall_ms",
    "consumed_total",
    "consumed",
];

pub fn sweep(cfg: &ExperimentConfig, ov: &Overrides) -> Result<Sweep> {
    if cfg.n_values.len() < 4 {
        return Err(BenchError::Config(format!(
            "a sweep needs at least 4 n_values, got {}",
            cfg.n_values.len()
        )));
    }
    if ov.mode.unwrap_or(cfg.mode) != ModeName::Expectation {
        return Err(BenchError::Config(
            "sweeps measure channel error and need expectation mode".into(),
        ));
    }
    let alg = cfg.algorithm()?;
    let orderings: Vec<Option<OrderingName>> = match (alg, ordering_for(cfg, ov)) {
        (Algorithm::Two, Some(o)) => vec![Some(o)],
        (Algorithm::Two, None) => {
            vec![Some(OrderingName::Forward), Some(OrderingName::Palindromic)]
        }
        _ => vec![None],
    };
    let problem = cfg.problem()?;
    let rho = cfg.initial_state()?;
    let jobs: Vec<(Option<OrderingName>, usize)> = orderings
        .iter()
        .flat_map(|&o| cfg.n_values.iter().map(move |&n| (o, n)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(o, n)| {
            let rc = run_config(cfg, ov, n, o);
            let rep = run(alg, &problem, &rho, &rc)?;
            let err = rep.error_vs_oracle.ok_or_else(|| {
                BenchError::Config("expectation run produced no channel error".into())
            })?;
            Ok(SweepRow {
                algorithm: alg.number(),
                ordering: o,
                t: cfg.t,
                n,
                choi_proxy_error: err,
                wall_ms: ov.timing.then(|| millis(&rep)),
                consumed: by_name(&rep.consumed),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let slopes = orderings
        .iter()
        .map(|&o| {
            let pts: Vec<&SweepRow> = rows.iter().filter(|r| r.ordering == o).collect();
            let xs: Vec<f64> = pts.iter().map(|r| r.n as f64).collect();
            let ys: Vec<f64> = pts.iter().map(|r| r.choi_proxy_error).collect();
            (o, loglog_fit(&xs, &ys).ok().map(|f| f.slope))
        })
        .collect();
    Ok(Sweep { rows, slopes })
}

fn ordering_label(o: Option<OrderingName>) -> &'static str {
    o.map_or("none", OrderingName::as_str)
}

/// Writes the sweep as CSV followed by `# slope,<ordering>,<value>` lines.
pub fn write_sweep_csv(sweep: &Sweep, out: &mut impl Write) -> Result<()> {
    {
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(SWEEP_HEADER)?;
        for r in &sweep.rows {
            let consumed = r
                .consumed
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";");
            w.write_record([
                r.algorithm.to_string(),
                ordering_label(r.ordering).to_string(),
                r.t.to_string(),
                r.n.to_string(),
                format!("{:e}", r.choi_proxy_error),
                r.wall_ms.map(|v| format!("{v:.3}")).unwrap_or_default(),
                r.consumed_total().to_string(),
                consumed,
            ])?;
        }
        w.flush()?;
    }
    for (o, s) in &sweep.slopes {
        let v = s.map_or_else(|| "nan".to_string(), |s| format!("{s:.6}"));
        writeln!(out, "# slope,{},{v}", ordering_label(*o))?;
    }
    Ok(())
}

pub fn write_json(value: &impl Serialize, out: &mut impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}
