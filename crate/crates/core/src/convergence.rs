//! Sweeps of exact solutions against their asymptotic expansions and the
//! log-log slope fits used to read off remainder orders.

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{arc_series, gamma_series, linear_series};
use crate::error::{Error, Result};
use crate::exact::{gamma_of_log, normalize, sc_solve, solve_normalized, ArcCondenser};

/// `n` points from `a` to `b` inclusive, uniform in ln.
pub fn logspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if !(a > 0.0 && b > a && n >= 2) {
        return Err(Error::ArgOutOfRange(format!(
            "logspace needs 0 < a < b and n ≥ 2, got ({a}, {b}, {n})"
        )));
    }
    let (la, lb) = (a.ln(), b.ln());
    Ok((0..n)
        .map(|i| {
            if i == 0 {
                a
            } else if i + 1 == n {
                b
            } else {
                (la + (lb - la) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect())
}

/// Least-squares slope of ln y against ln x. Pairs with a non-positive or
/// non-finite y are skipped; fewer than two usable pairs give NaN.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub h: f64,
    pub cap_exact: f64,
    pub cap_series: f64,
    pub abs_err: f64,
    /// Slope fitted through this row and every row before it.
    pub slope_running: f64,
}

fn finish_rows(hs: &[f64], pairs: Vec<(f64, f64)>) -> Vec<SweepRow> {
    let errs: Vec<f64> = pairs.iter().map(|(e, s)| (e - s).abs()).collect();
    hs.iter()
        .zip(pairs)
        .enumerate()
        .map(|(i, (&h, (cap_exact, cap_series)))| SweepRow {
            h,
            cap_exact,
            cap_series,
            abs_err: errs[i],
            slope_running: loglog_slope(&hs[..=i], &errs[..=i]),
        })
        .collect()
}

/// Exact arc capacity against the arc expansion over log-spaced gaps.
pub fn arc_sweep(rho: f64, l: f64, h_min: f64, h_max: f64, points: usize) -> Result<Vec<SweepRow>> {
    let hs = logspace(h_min, h_max, points)?;
    let pairs = hs
        .par_iter()
        .map(|&h| {
            let g = normalize(ArcCondenser { rho, l, h })?;
            Ok((solve_normalized(&g)?.value, arc_series(rho, l, h)?.total))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish_rows(&hs, pairs))
}

/// Exact parallel-segment capacity against its expansion.
pub fn linear_sweep(l: f64, h_min: f64, h_max: f64, points: usize) -> Result<Vec<SweepRow>> {
    let hs = logspace(h_min, h_max, points)?;
    let pairs = hs
        .par_iter()
        .map(|&h| Ok((sc_solve(l, h)?.value, linear_series(l, h)?.total)))
        .collect::<Result<Vec<_>>>()?;
    Ok(finish_rows(&hs, pairs))
}

/// One point of the half-angle expansion check at fixed R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaRow {
    pub y: f64,
    pub x: f64,
    pub eta: f64,
    pub gamma_exact: f64,
    pub gamma_series: f64,
    pub residual: f64,
}

/// γ(y) against its expansion in x = 1/(πy) for log-spaced y at fixed R.
pub fn gamma_sweep(r: f64, y_min: f64, y_max: f64, points: usize) -> Result<Vec<GammaRow>> {
    let ln_r = r.ln();
    logspace(y_min, y_max, points)?
        .par_iter()
        .map(|&y| {
            let eta = 0.5 * y * ln_r;
            let x = 1.0 / (std::f64::consts::PI * y);
            let gamma_exact = gamma_of_log(ln_r, y)?;
            let gs = gamma_series(eta, x)?;
            Ok(GammaRow {
                y,
                x,
                eta,
                gamma_exact,
                gamma_series: gs,
                residual: (gamma_exact - gs).abs(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs = logspace(1e-3, 1.0, 9).unwrap();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(2.5)).collect();
        assert!((loglog_slope(&xs, &ys) - 2.5).abs() < 1e-12);
        assert!(loglog_slope(&xs[..1], &ys[..1]).is_nan());
    }

    #[test]
    fn logspace_endpoints() {
        let v = logspace(1e-4, 1e-2, 12).unwrap();
        assert_eq!(v.len(), 12);
        assert_eq!(v[0], 1e-4);
        assert_eq!(v[11], 1e-2);
        assert!(logspace(1.0, 1.0, 3).is_err());
    }
}
