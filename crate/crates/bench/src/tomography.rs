//! Copies needed by tomography of the jump operator versus wave matrix
//! Lindbladization.

use std::io::Write;

use serde::Serialize;
use wml_core::engine::copies_needed;

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct TomographyRow {
    pub d: usize,
    pub delta: f64,
    pub tomography_bound: f64,
    pub wml_copies: u64,
    pub ratio: f64,
}

/// d²(1−δ)²/(δ² ln(d²/δ)), natural log and constant one.
pub fn tomography_bound(d: usize, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(BenchError::Config(format!(
            "δ = ε/t must lie in (0, 1), got {delta}"
        )));
    }
    if d < 2 {
        return Err(BenchError::Config(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    let d2 = (d * d) as f64;
    Ok(d2 * (1.0 - delta).powi(2) / (delta * delta * (d2 / delta).ln()))
}

/// One row per d with δ = ε/t and WML copies ⌈t²/ε⌉ for a unit-norm single jump.
pub fn compare_tomography(ds: &[usize], eps: f64, t: f64) -> Result<Vec<TomographyRow>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(BenchError::Config(format!(
            "ε must lie in (0, 1), got {eps}"
        )));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(BenchError::Config(format!("t must be positive, got {t}")));
    }
    if ds.is_empty() {
        return Err(BenchError::Config("no dimensions given".into()));
    }
    let delta = eps / t;
    let wml = copies_needed(1.0, t, eps)?;
    ds.iter()
        .map(|&d| {
            let bound = tomography_bound(d, delta)?;
            Ok(TomographyRow {
                d,
                delta,
                tomography_bound: bound,
                wml_copies: wml,
                ratio: bound / wml as f64,
            })
        })
        .collect()
}

pub fn write_tomography_csv(rows: &[TomographyRow], out: &mut impl Write) -> Result<()> {
    {
        let mut w = csv::Writer::from_writer(&mut *out);
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    writeln!(
        out,
        "# tomography_bound,d^2(1-delta)^2/(delta^2 ln(d^2/delta)),natural_log,constant=1"
    )?;
    writeln!(out, "# wml_copies,ceil(c^2 t^2/eps),c=1,constant=1")?;
    Ok(())
}
