//! Logical error rate against qubit count, `p_L(n) = c0 (p / c1)^(c2 sqrt(n))`.
//!
//! At a single `p` only `c2 ln(p / c1)` is identifiable, so the fit is
//! taken jointly over a window of physical rates:
//! `ln p_L = a + b sqrt(n) ln p + c sqrt(n)` with `c0 = e^a`, `c2 = b`,
//! `c1 = exp(-c / b)`.

use serde::Serialize;

use crate::analysis::memory::{run_memory_xz, MemoryConfig};
use crate::analysis::stats::weighted_lstsq;
use crate::error::{Error, Result};
use crate::layout::{CodeKind, Layout};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResourcePoint {
    pub p: f64,
    pub d: usize,
    pub n: usize,
    pub p_l: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResourceFit {
    pub kind: CodeKind,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    /// Physical rates the fit was taken over.
    pub p_min: f64,
    pub p_max: f64,
    /// Covariance of `(a, b, c)`.
    pub covariance: Vec<Vec<f64>>,
    pub chi2: f64,
    pub points: usize,
}

impl ResourceFit {
    pub fn predict(&self, p: f64, n: usize) -> f64 {
        self.c0 * (p / self.c1).powf(self.c2 * (n as f64).sqrt())
    }
}

/// Joint fit over points at several physical rates. Zero-failure points
/// are dropped.
pub fn fit_resource_curve(kind: CodeKind, points: &[ResourcePoint]) -> Result<ResourceFit> {
    let mut ps: Vec<f64> = points.iter().map(|pt| pt.p).collect();
    ps.sort_by(f64::total_cmp);
    ps.dedup();
    for &p in &ps {
        let mut at: Vec<&ResourcePoint> = points.iter().filter(|pt| pt.p == p).collect();
        at.sort_by_key(|pt| pt.n);
        if at.len() < 3 {
            return Err(Error::Analysis(format!("p={p}: need at least 3 distances, got {}", at.len())));
        }
        if at.windows(2).any(|w| w[1].p_l >= w[0].p_l && w[1].p_l > 0.0) {
            return Err(Error::Analysis(format!(
                "p={p} is not below threshold: p_L does not decrease with n"
            )));
        }
    }
    if ps.len() < 2 {
        return Err(Error::Analysis(
            "a single physical rate only fixes c2 ln(p/c1); give at least two".into(),
        ));
    }
    let used: Vec<&ResourcePoint> = points.iter().filter(|pt| pt.p_l > 0.0).collect();
    let rows: Vec<Vec<f64>> = used
        .iter()
        .map(|pt| {
            let s = (pt.n as f64).sqrt();
            vec![1.0, s * pt.p.ln(), s]
        })
        .collect();
    let y: Vec<f64> = used.iter().map(|pt| pt.p_l.ln()).collect();
    // relative error is the error of the logarithm
    let w: Vec<f64> = used
        .iter()
        .map(|pt| {
            let rel = (pt.stderr / pt.p_l).max(1e-6);
            1.0 / (rel * rel)
        })
        .collect();
    let fit = weighted_lstsq(&rows, &y, &w)?;
    let (a, b, c) = (fit.beta[0], fit.beta[1], fit.beta[2]);
    if !(b > 0.0) {
        return Err(Error::Analysis(format!("fitted c2={b} is not positive")));
    }
    Ok(ResourceFit {
        kind,
        c0: a.exp(),
        c1: (-c / b).exp(),
        c2: b,
        p_min: ps[0],
        p_max: *ps.last().unwrap(),
        covariance: fit.covariance,
        chi2: fit.chi2,
        points: used.len(),
    })
}

/// Smallest odd distance (at least 3) whose qubit count reaches the `n`
/// the curve needs for `target` at rate `p`.
pub fn qubits_to_target(fit: &ResourceFit, p: f64, target: f64) -> Result<(usize, usize)> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::Analysis(format!("target {target} is not a rate")));
    }
    let per_root = fit.c2 * (p / fit.c1).ln();
    if !(per_root < 0.0) {
        return Err(Error::Analysis(format!("p={p} is at or above c1={:.5}", fit.c1)));
    }
    let root_n = ((target / fit.c0).ln() / per_root).max(0.0);
    let need = root_n * root_n;
    let mut d = 3;
    while (Layout::total_qubits(fit.kind, d) as f64) < need {
        d += 2;
    }
    Ok((d, Layout::total_qubits(fit.kind, d)))
}

/// Memory runs for every `(p, d)`, both bases combined.
pub fn resource_scan(base: &MemoryConfig, ds: &[usize], ps: &[f64]) -> Result<Vec<ResourcePoint>> {
    let mut out = Vec::new();
    for &p in ps {
        for &d in ds {
            let r = run_memory_xz(&MemoryConfig { d, p, ..base.clone() })?;
            out.push(ResourcePoint {
                p,
                d,
                n: Layout::total_qubits(base.kind, d),
                p_l: r.p_l,
                stderr: r.stderr,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixed_fit(kind: CodeKind, c0: f64, c1: f64, c2: f64) -> ResourceFit {
        ResourceFit {
            kind,
            c0,
            c1,
            c2,
            p_min: 0.0,
            p_max: 0.0,
            covariance: Vec::new(),
            chi2: 0.0,
            points: 0,
        }
    }

    fn synthetic(kind: CodeKind, c: (f64, f64, f64), ps: &[f64]) -> Vec<ResourcePoint> {
        let fit = fixed_fit(kind, c.0, c.1, c.2);
        let mut out = Vec::new();
        for &p in ps {
            for d in [3, 5, 7, 9] {
                let n = Layout::total_qubits(kind, d);
                let p_l = fit.predict(p, n);
                out.push(ResourcePoint { p, d, n, p_l, stderr: 0.01 * p_l });
            }
        }
        out
    }

    #[test]
    fn joint_fit_recovers_parameters() {
        let pts = synthetic(CodeKind::Rotated, (0.08, 0.009, 0.33), &[0.001, 0.002, 0.003]);
        let f = fit_resource_curve(CodeKind::Rotated, &pts).unwrap();
        assert!((f.c0 - 0.08).abs() < 1e-9 && (f.c1 - 0.009).abs() < 1e-9 && (f.c2 - 0.33).abs() < 1e-9);
    }

    #[test]
    fn single_rate_is_underdetermined() {
        let pts = synthetic(CodeKind::Rotated, (0.08, 0.009, 0.33), &[0.001]);
        assert!(fit_resource_curve(CodeKind::Rotated, &pts).is_err());
    }

    #[test]
    fn above_threshold_is_rejected() {
        let pts = synthetic(CodeKind::Rotated, (0.08, 0.009, 0.33), &[0.002, 0.012]);
        assert!(fit_resource_curve(CodeKind::Rotated, &pts).is_err());
    }

    #[test]
    fn inversion_rounds_up_to_odd_distance() {
        // parameters at p = 0.3%
        let r = fixed_fit(CodeKind::Rotated, 0.12, 0.0056, 0.51);
        let u = fixed_fit(CodeKind::Unrotated, 0.2, 0.0087, 0.35);
        assert_eq!(qubits_to_target(&r, 0.003, 1e-6).unwrap(), (27, 1457));
        assert_eq!(qubits_to_target(&u, 0.003, 1e-6).unwrap(), (17, 1089));
        // p = 0.2%: unrotated d = 13
        let u2 = fixed_fit(CodeKind::Unrotated, 0.2, 0.0074, 0.39);
        assert_eq!(qubits_to_target(&u2, 0.002, 1e-6).unwrap(), (13, 625));
        let (d, n) = qubits_to_target(&r, 0.003, 1e-6).unwrap();
        assert!(r.predict(0.003, n) <= 1e-6 && r.predict(0.003, Layout::total_qubits(CodeKind::Rotated, d - 2)) > 1e-6);
    }

    #[test]
    fn inversion_rejects_rates_above_c1() {
        let r = fixed_fit(CodeKind::Rotated, 0.12, 0.0056, 0.51);
        assert!(qubits_to_target(&r, 0.006, 1e-6).is_err());
    }
}
