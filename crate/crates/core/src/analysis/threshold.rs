//! Threshold estimation by finite-size-scaling data collapse.
//!
//! For a candidate `(p_th, nu)` every point is mapped to
//! `x = (p - p_th) d^(1/nu)` and a quadratic master curve is fitted by
//! weighted least squares; the collapse residual is its chi-square.

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::analysis::memory::{run_memory_xz, CombinedResult, MemoryConfig};
use crate::analysis::stats::weighted_lstsq;
use crate::error::{Error, Result};

/// Order of the master-curve polynomial.
pub const MASTER_ORDER: usize = 2;
pub const BOOTSTRAP_RESAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub p: f64,
    pub p_l: f64,
    pub stderr: f64,
    pub shots: usize,
}

/// Logical error rates of one distance over a range of physical rates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub d: usize,
    pub points: Vec<CurvePoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdFit {
    pub p_th: f64,
    pub nu: f64,
    /// Bootstrap standard deviations.
    pub p_th_err: f64,
    pub nu_err: f64,
    /// Collapse chi-square at the optimum and its degrees of freedom.
    pub residual: f64,
    pub dof: usize,
    pub master_order: usize,
    /// Master-curve coefficients in `x` scaled by `x_scale`, lowest order first.
    pub master: Vec<f64>,
    pub x_scale: f64,
    pub bootstrap: usize,
    pub converged: bool,
}

impl ThresholdFit {
    pub fn collapse_x(&self, p: f64, d: usize) -> f64 {
        (p - self.p_th) * (d as f64).powf(1.0 / self.nu)
    }
}

struct Flat {
    p: Vec<f64>,
    d: Vec<f64>,
    y: Vec<f64>,
    w: Vec<f64>,
    scale: f64,
}

impl Flat {
    fn new(curves: &[Curve]) -> Self {
        let mut f = Flat {
            p: Vec::new(),
            d: Vec::new(),
            y: Vec::new(),
            w: Vec::new(),
            scale: 0.0,
        };
        for c in curves {
            for pt in &c.points {
                // a zero-failure or all-failure point still has one shot's worth of resolution
                let floor = 1.0 / pt.shots.max(1) as f64;
                let sigma = pt.stderr.max(floor);
                f.p.push(pt.p);
                f.d.push(c.d as f64);
                f.y.push(pt.p_l);
                f.w.push(1.0 / (sigma * sigma));
            }
        }
        f.scale = f.p.iter().sum::<f64>() / f.p.len() as f64;
        f
    }

    /// `(chi2, coefficients)` of the master curve at `(p_th, nu)`.
    fn collapse(&self, p_th: f64, nu: f64, y: &[f64]) -> Option<(f64, Vec<f64>)> {
        let rows: Vec<Vec<f64>> = self
            .p
            .iter()
            .zip(&self.d)
            .map(|(&p, &d)| {
                let x = (p - p_th) / self.scale * d.powf(1.0 / nu);
                (0..=MASTER_ORDER).map(|k| x.powi(k as i32)).collect()
            })
            .collect();
        let fit = weighted_lstsq(&rows, y, &self.w).ok()?;
        fit.chi2.is_finite().then_some((fit.chi2, fit.beta))
    }
}

struct Objective<'a> {
    flat: &'a Flat,
    y: &'a [f64],
}

impl CostFunction for Objective<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    /// Parameters are `(p_th / scale, ln nu)`.
    fn cost(&self, q: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        let nu = q[1].exp();
        if !nu.is_finite() || nu <= 0.0 {
            return Ok(f64::MAX);
        }
        Ok(self
            .flat
            .collapse(q[0] * self.flat.scale, nu, self.y)
            .map_or(f64::MAX, |(chi2, _)| chi2))
    }
}

fn simplex(flat: &Flat, y: &[f64], start: [f64; 2]) -> Option<(Vec<f64>, f64, bool)> {
    let s = start.to_vec();
    let init = vec![s.clone(), vec![s[0] * 1.05, s[1]], vec![s[0], s[1] + 0.2]];
    let solver = NelderMead::new(init).with_sd_tolerance(1e-12).ok()?;
    let res = Executor::new(Objective { flat, y }, solver)
        .configure(|st| st.max_iters(400))
        .run()
        .ok()?;
    let state = res.state();
    let best = state.best_param.clone()?;
    let converged = state.iter < 400;
    Some((best, state.best_cost, converged))
}

fn check_input(curves: &[Curve]) -> Result<(f64, f64)> {
    if curves.len() < 3 {
        return Err(Error::Analysis(format!(
            "threshold fit needs at least 3 distances, got {}",
            curves.len()
        )));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for c in curves {
        if c.points.len() < 5 {
            return Err(Error::Analysis(format!(
                "distance {} has {} points, need at least 5",
                c.d,
                c.points.len()
            )));
        }
        for pt in &c.points {
            if !(pt.p > 0.0 && pt.p_l.is_finite()) {
                return Err(Error::Analysis(format!("invalid point at p={}", pt.p)));
            }
            lo = lo.min(pt.p);
            hi = hi.max(pt.p);
        }
    }
    Ok((lo, hi))
}

/// Best collapse over a grid of simplex starts.
fn best_collapse(flat: &Flat, y: &[f64], lo: f64, hi: f64) -> Result<(Vec<f64>, f64, bool)> {
    let mut best: Option<(Vec<f64>, f64, bool)> = None;
    for i in 0..5 {
        let p0 = lo + (hi - lo) * (i as f64 + 0.5) / 5.0;
        for nu0 in [0.8f64, 1.0, 1.5] {
            if let Some(r) = simplex(flat, y, [p0 / flat.scale, nu0.ln()]) {
                if best.as_ref().is_none_or(|b| r.1 < b.1) {
                    best = Some(r);
                }
            }
        }
    }
    best.ok_or_else(|| Error::Analysis("collapse minimization did not converge".into()))
}

/// Finite-size-scaling threshold with a parametric bootstrap over the
/// points' binomial errors.
pub fn fit_threshold(curves: &[Curve], seed: u64) -> Result<ThresholdFit> {
    let (lo, hi) = check_input(curves)?;
    let flat = Flat::new(curves);
    let (q, chi2, converged) = best_collapse(&flat, &flat.y, lo, hi)?;
    let p_th = q[0] * flat.scale;
    let nu = q[1].exp();
    if !(p_th > lo && p_th < hi) {
        return Err(Error::Analysis(format!(
            "collapse optimum p_th={p_th:.5} is pinned outside the scanned range [{lo}, {hi}]"
        )));
    }
    if !(nu.is_finite() && nu > 1e-3 && nu < 1e3) {
        return Err(Error::Analysis(format!("collapse exponent nu={nu} did not converge")));
    }
    let (_, master) = flat
        .collapse(p_th, nu, &flat.y)
        .ok_or_else(|| Error::Analysis("degenerate master curve".into()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let std_normal = Normal::new(0.0, 1.0).expect("unit normal");
    let mut samples = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    for _ in 0..BOOTSTRAP_RESAMPLES {
        let y: Vec<f64> = flat
            .y
            .iter()
            .zip(&flat.w)
            .map(|(&y, &w)| (y + std_normal.sample(&mut rng) / w.sqrt()).clamp(0.0, 1.0))
            .collect();
        if let Some((q, _, _)) = simplex(&flat, &y, [q[0], q[1]]) {
            samples.push((q[0] * flat.scale, q[1].exp()));
        }
    }
    let spread = |f: fn(&(f64, f64)) -> f64| {
        let n = samples.len() as f64;
        let mean = samples.iter().map(f).sum::<f64>() / n;
        (samples.iter().map(|s| (f(s) - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0)).sqrt()
    };
    Ok(ThresholdFit {
        p_th,
        nu,
        p_th_err: spread(|s| s.0),
        nu_err: spread(|s| s.1),
        residual: chi2,
        dof: flat.y.len().saturating_sub(MASTER_ORDER + 3),
        master_order: MASTER_ORDER,
        master,
        x_scale: flat.scale,
        bootstrap: samples.len(),
        converged,
    })
}

/// Memory runs over a `(d, p)` grid, both bases combined per point.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdScan {
    pub runs: Vec<CombinedResult>,
    pub curves: Vec<Curve>,
}

impl ThresholdScan {
    pub fn run(base: &MemoryConfig, ds: &[usize], ps: &[f64]) -> Result<Self> {
        let mut runs = Vec::new();
        let mut curves = Vec::new();
        for &d in ds {
            let mut points = Vec::new();
            for &p in ps {
                let cfg = MemoryConfig { d, p, ..base.clone() };
                let r = run_memory_xz(&cfg)?;
                points.push(CurvePoint {
                    p,
                    p_l: r.p_l,
                    stderr: r.stderr,
                    shots: cfg.shots,
                });
                runs.push(r);
            }
            curves.push(Curve { d, points });
        }
        Ok(Self { runs, curves })
    }

    pub fn fit(&self, seed: u64) -> Result<ThresholdFit> {
        fit_threshold(&self.curves, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(p_th: f64, nu: f64, noise: f64, ps: &[f64]) -> Vec<Curve> {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = Normal::new(0.0, 1.0).unwrap();
        [3usize, 5, 7]
            .iter()
            .map(|&d| Curve {
                d,
                points: ps
                    .iter()
                    .map(|&p| {
                        let x = (p - p_th) / 0.01 * (d as f64).powf(1.0 / nu);
                        let y = 0.1 + 0.08 * x + 0.02 * x * x;
                        CurvePoint {
                            p,
                            p_l: y + noise * n.sample(&mut rng),
                            stderr: noise.max(1e-9),
                            shots: 1 << 30,
                        }
                    })
                    .collect(),
            })
            .collect()
    }

    fn grid() -> Vec<f64> {
        (0..7).map(|i| 0.005 + 0.0015 * i as f64).collect()
    }

    #[test]
    fn recovers_exact_collapse() {
        let fit = fit_threshold(&synthetic(0.0093, 1.3, 0.0, &grid()), 1).unwrap();
        assert!((fit.p_th - 0.0093).abs() < 1e-6, "{fit:?}");
        assert!((fit.nu - 1.3).abs() < 1e-3, "{fit:?}");
        assert_eq!(fit.master_order, 2);
        assert!(fit.converged);
    }

    #[test]
    fn recovers_noisy_collapse_within_one_grid_step() {
        let fit = fit_threshold(&synthetic(0.0071, 1.0, 0.002, &grid()), 2).unwrap();
        assert!((fit.p_th - 0.0071).abs() < 0.0015, "{fit:?}");
        assert!(fit.p_th_err > 0.0 && fit.p_th_err < 0.0015);
        assert_eq!(fit.bootstrap, BOOTSTRAP_RESAMPLES);
    }

    #[test]
    fn rejects_too_few_distances_or_points() {
        let mut c = synthetic(0.009, 1.0, 0.0, &grid());
        c.pop();
        assert!(fit_threshold(&c, 0).is_err());
        let c = synthetic(0.009, 1.0, 0.0, &grid()[..4]);
        assert!(fit_threshold(&c, 0).is_err());
    }

    #[test]
    fn crossing_outside_range_is_reported() {
        let ps: Vec<f64> = (0..6).map(|i| 0.002 + 0.0005 * i as f64).collect();
        // every curve ordered the same way: no crossing inside the scan
        let curves: Vec<Curve> = [3usize, 5, 7]
            .iter()
            .map(|&d| Curve {
                d,
                points: ps
                    .iter()
                    .map(|&p| CurvePoint {
                        p,
                        p_l: (p / 0.01).powf((d as f64 + 1.0) / 2.0),
                        stderr: 1e-6,
                        shots: 1 << 30,
                    })
                    .collect(),
            })
            .collect();
        assert!(fit_threshold(&curves, 0).is_err());
    }
}
