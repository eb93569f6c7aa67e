//! Rate statistics and small least-squares fits.

use serde::Serialize;

use crate::error::{Error, Result};

/// Combined logical error rate of independent X and Z failures.
pub fn combine_xz(p_x: f64, p_z: f64) -> f64 {
    1.0 - (1.0 - p_x) * (1.0 - p_z)
}

/// Standard error of [`combine_xz`] from the per-basis standard errors.
pub fn combine_xz_stderr(p_x: f64, e_x: f64, p_z: f64, e_z: f64) -> f64 {
    (((1.0 - p_z) * e_x).powi(2) + ((1.0 - p_x) * e_z).powi(2)).sqrt()
}

pub fn rate(failures: usize, shots: usize) -> f64 {
    if shots == 0 {
        0.0
    } else {
        failures as f64 / shots as f64
    }
}

/// Binomial standard error `sqrt(p(1-p)/shots)`.
pub fn standard_error(failures: usize, shots: usize) -> f64 {
    if shots == 0 {
        return 0.0;
    }
    let p = rate(failures, shots);
    (p * (1.0 - p) / shots as f64).sqrt()
}

/// 95% upper bound on the rate; `3/shots` when no failure was seen.
pub fn upper_bound_95(failures: usize, shots: usize) -> f64 {
    if failures == 0 {
        3.0 / shots as f64
    } else {
        rate(failures, shots) + 1.96 * standard_error(failures, shots)
    }
}

/// Weighted linear least squares `y ≈ X β`.
#[derive(Clone, Debug)]
pub struct LinearFit {
    pub beta: Vec<f64>,
    /// `(Xᵀ W X)⁻¹`
    pub covariance: Vec<Vec<f64>>,
    /// Weighted sum of squared residuals.
    pub chi2: f64,
}

pub fn weighted_lstsq(rows: &[Vec<f64>], y: &[f64], w: &[f64]) -> Result<LinearFit> {
    let k = rows.first().map_or(0, |r| r.len());
    if rows.len() < k || k == 0 {
        return Err(Error::Analysis(format!("{} points cannot fit {k} parameters", rows.len())));
    }
    let mut a = vec![vec![0.0; k]; k];
    let mut b = vec![0.0; k];
    for ((r, &yi), &wi) in rows.iter().zip(y).zip(w) {
        for i in 0..k {
            b[i] += wi * r[i] * yi;
            for j in 0..k {
                a[i][j] += wi * r[i] * r[j];
            }
        }
    }
    let inv = invert(a).ok_or_else(|| Error::Analysis("singular normal equations".into()))?;
    let beta: Vec<f64> = (0..k).map(|i| (0..k).map(|j| inv[i][j] * b[j]).sum()).collect();
    let chi2 = rows
        .iter()
        .zip(y)
        .zip(w)
        .map(|((r, &yi), &wi)| {
            let f: f64 = r.iter().zip(&beta).map(|(x, c)| x * c).sum();
            wi * (yi - f).powi(2)
        })
        .sum();
    Ok(LinearFit {
        beta,
        covariance: inv,
        chi2,
    })
}

/// Gauss-Jordan inverse with partial pivoting.
fn invert(mut a: Vec<Vec<f64>>) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u8 as f64).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() <= scale * 1e-14 {
            return None;
        }
        a.swap(c, p);
        inv.swap(c, p);
        let d = a[c][c];
        for j in 0..n {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for i in 0..n {
            if i != c {
                let f = a[i][c];
                if f != 0.0 {
                    for j in 0..n {
                        a[i][j] -= f * a[c][j];
                        inv[i][j] -= f * inv[c][j];
                    }
                }
            }
        }
    }
    Some(inv)
}

#[derive(Clone, Debug, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub slope_err: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Least-squares slope of `ln p_L` against `ln p`.
pub fn fit_scaling_exponent(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 3 {
        return Err(Error::Analysis("a slope fit needs at least 3 points".into()));
    }
    if let Some(&(p, _)) = points.iter().find(|(p, pl)| *pl <= 0.0 || *p <= 0.0) {
        return Err(Error::Analysis(format!(
            "point at p = {p} has no failures; resample with more shots"
        )));
    }
    let rows: Vec<Vec<f64>> = points.iter().map(|(p, _)| vec![1.0, p.ln()]).collect();
    let y: Vec<f64> = points.iter().map(|(_, pl)| pl.ln()).collect();
    let fit = weighted_lstsq(&rows, &y, &vec![1.0; y.len()])?;
    let dof = (points.len() - 2).max(1) as f64;
    let sigma2 = fit.chi2 / dof;
    Ok(SlopeFit {
        slope: fit.beta[1],
        slope_err: (sigma2 * fit.covariance[1][1]).sqrt(),
        intercept: fit.beta[0],
        points: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_examples() {
        assert!((combine_xz(0.1, 0.2) - 0.28).abs() < 1e-15);
        assert_eq!(combine_xz(0.0, 0.37), 0.37);
        assert_eq!(combine_xz(0.3, 0.6), combine_xz(0.6, 0.3));
    }

    #[test]
    fn power_law_slope() {
        let pts: Vec<(f64, f64)> = [2e-3, 3e-3, 4e-3, 6e-3].iter().map(|&p| (p, 7.0 * p * p)).collect();
        let f = fit_scaling_exponent(&pts).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-9);
        assert!(f.slope_err < 1e-6);
    }

    #[test]
    fn zero_points_rejected() {
        let pts = [(1e-3, 1e-6), (2e-3, 0.0), (3e-3, 1e-5)];
        assert!(fit_scaling_exponent(&pts).is_err());
    }

    #[test]
    fn lstsq_recovers_quadratic() {
        let xs = [-2.0, -1.0, 0.0, 1.0, 2.5];
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![1.0, x, x * x]).collect();
        let y: Vec<f64> = xs.iter().map(|&x| 0.5 - 2.0 * x + 0.25 * x * x).collect();
        let f = weighted_lstsq(&rows, &y, &[1.0; 5]).unwrap();
        for (a, b) in f.beta.iter().zip([0.5, -2.0, 0.25]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn standard_error_formula() {
        assert!((standard_error(25, 100) - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        assert_eq!(upper_bound_95(0, 1000), 3e-3);
    }
}
