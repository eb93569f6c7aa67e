//! CZZ gate-strength sweeps against a CZ baseline.

use serde::Serialize;

use crate::analysis::memory::{run_memory_xz, MemoryConfig};
use crate::circuit::Style;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub p_l: f64,
    pub stderr: f64,
    pub failures_x: usize,
    pub failures_z: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaSweep {
    pub rows: Vec<SweepRow>,
    pub baseline_p_l: f64,
    pub baseline_stderr: f64,
    /// Interpolated strength where CZZ first reaches the baseline.
    pub crossing: Option<f64>,
}

/// CZZ memory runs at each `lambda` and one CZ run with `cz_ordering`.
/// Every point reuses `base.seed`.
pub fn lambda_sweep(base: &MemoryConfig, lambdas: &[f64], cz_ordering: &str) -> Result<LambdaSweep> {
    if base.style != Style::Czz {
        return Err(Error::Analysis("a lambda sweep needs a CZZ configuration".into()));
    }
    if lambdas.is_empty() {
        return Err(Error::Analysis("no lambda values given".into()));
    }
    if let Some(l) = lambdas.iter().find(|l| !(1.0..=2.0).contains(*l)) {
        return Err(Error::Analysis(format!("lambda {l} outside [1, 2]")));
    }
    let cz = run_memory_xz(&MemoryConfig {
        style: Style::Cz,
        ordering: cz_ordering.to_string(),
        lambda_czz: 1.0,
        ..base.clone()
    })?;
    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let r = run_memory_xz(&MemoryConfig {
            lambda_czz: lambda,
            ..base.clone()
        })?;
        rows.push(SweepRow {
            lambda,
            p_l: r.p_l,
            stderr: r.stderr,
            failures_x: r.x.failures,
            failures_z: r.z.failures,
        });
    }
    rows.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(LambdaSweep {
        crossing: crossing(&rows, cz.p_l),
        rows,
        baseline_p_l: cz.p_l,
        baseline_stderr: cz.stderr,
    })
}

/// First strength at which the rows reach `baseline`, linear between rows.
pub fn crossing(rows: &[SweepRow], baseline: f64) -> Option<f64> {
    let first = rows.first()?;
    if first.p_l >= baseline {
        return Some(first.lambda);
    }
    rows.windows(2).find_map(|w| {
        let (a, b) = (w[0], w[1]);
        (b.p_l >= baseline).then(|| a.lambda + (baseline - a.p_l) / (b.p_l - a.p_l) * (b.lambda - a.lambda))
    })
}
