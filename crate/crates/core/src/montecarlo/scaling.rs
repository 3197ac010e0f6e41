use serde::{Deserialize, Serialize};

use super::engine::CurvePoint;
use crate::error::{Error, Result};
use crate::feedback::Regime;

/// Asymptotic throughput growth in bps/Hz: `Nt·log₂log₂U` in the normal
/// and noise-limited regimes, `Nt/(Nt-1)·log₂U` when interference-limited.
pub fn reference_curve(regime: Regime, n_t: usize, user_grid: &[usize]) -> Result<Vec<f64>> {
    if n_t == 0 {
        return Err(Error::domain("n_t", "must be positive"));
    }
    let nt = n_t as f64;
    match regime {
        Regime::Normal | Regime::NoiseLimited => user_grid
            .iter()
            .map(|&u| {
                if u < 3 {
                    Err(Error::domain(
                        "users",
                        format!("log log U needs U >= 3, got {u}"),
                    ))
                } else {
                    Ok(nt * (u as f64).log2().log2())
                }
            })
            .collect(),
        Regime::InterferenceLimited => {
            if n_t < 2 {
                return Err(Error::domain(
                    "n_t",
                    "interference-limited law needs n_t >= 2",
                ));
            }
            user_grid
                .iter()
                .map(|&u| {
                    if u == 0 {
                        Err(Error::domain("users", "log U needs U >= 1"))
                    } else {
                        Ok(nt / (nt - 1.0) * (u as f64).log2())
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeAxis {
    /// `log₂ U`
    LogU,
    /// `log₂ log₂ U`
    LogLogU,
}

/// Least-squares slope of `mean` against the chosen axis over the
/// largest-`U` half of the points. Rates and axis share log base 2, which
/// makes the slope base-free.
pub fn estimate_slope(points: &[CurvePoint], axis: SlopeAxis) -> Result<f64> {
    let mut sorted: Vec<&CurvePoint> = points.iter().collect();
    sorted.sort_by_key(|p| p.users);
    let upper = &sorted[sorted.len() / 2..];
    if upper.len() < 5 {
        return Err(Error::domain(
            "points",
            format!(
                "need at least 5 points in the upper half, got {}",
                upper.len()
            ),
        ));
    }
    let xs: Vec<f64> = upper
        .iter()
        .map(|p| {
            let l = (p.users as f64).log2();
            match axis {
                SlopeAxis::LogU => l,
                SlopeAxis::LogLogU => l.log2(),
            }
        })
        .collect();
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain(
            "points",
            "axis undefined for some user counts",
        ));
    }
    let ys: Vec<f64> = upper.iter().map(|p| p.mean).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx < 1e-12 {
        return Err(Error::domain("points", "degenerate abscissa spread"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn points(users: &[usize], f: impl Fn(f64) -> f64) -> Vec<CurvePoint> {
        users
            .iter()
            .map(|&u| CurvePoint {
                users: u,
                mean: f(u as f64),
                stderr: 0.0,
                n_trials: 1,
                mean_scheduled: 0.0,
                unconverged: 0,
            })
            .collect()
    }

    const GRID: [usize; 10] = [4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048];

    #[test]
    fn exact_log_line() {
        let p = points(&GRID, |u| 3.0 * u.log2() + 1.0);
        assert!((estimate_slope(&p, SlopeAxis::LogU).unwrap() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn exact_loglog_line() {
        let p = points(&GRID, |u| 2.0 * u.log2().log2());
        assert!((estimate_slope(&p, SlopeAxis::LogLogU).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn slope_uses_upper_half_only() {
        let p = points(&GRID, |u| if u < 100.0 { 1000.0 } else { u.log2() });
        assert!((estimate_slope(&p, SlopeAxis::LogU).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn slope_errors() {
        assert!(estimate_slope(&points(&GRID[..6], |u| u), SlopeAxis::LogU).is_err());
        let flat = points(&[5; 10], |u| u);
        assert!(estimate_slope(&flat, SlopeAxis::LogU).is_err());
        let with_one = points(&[1, 1, 1, 1, 1, 1, 1, 1, 1, 1], |u| u);
        assert!(estimate_slope(&with_one, SlopeAxis::LogLogU).is_err());
    }

    #[test]
    fn reference_values() {
        let il = reference_curve(Regime::InterferenceLimited, 2, &[1, 8]).unwrap();
        assert_eq!(il, vec![0.0, 6.0]);
        let nl = reference_curve(Regime::Normal, 4, &[3, 10, 100, 1000]).unwrap();
        assert!(nl.windows(2).all(|w| w[1] > w[0]));
        assert!(nl[0] > 0.0);
        assert!((reference_curve(Regime::NoiseLimited, 2, &[16]).unwrap()[0] - 4.0).abs() < 1e-12);
        assert!(reference_curve(Regime::Normal, 2, &[2]).is_err());
        assert!(reference_curve(Regime::InterferenceLimited, 1, &[4]).is_err());
    }
}
