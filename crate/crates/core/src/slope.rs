//! DoF estimates from rate-versus-SNR traces.
//!
//! The DoF of a user is the slope of its rate against `log2 P`; it is
//! estimated by ordinary least squares over the highest SNR points of a
//! trace.

use core::fmt;

use num_traits::ToPrimitive;

use crate::region::DofRegion;
use crate::sim::{db_to_log2_power, RateTrace};

/// Number of top SNR points used by default.
pub const DEFAULT_WINDOW: usize = 4;
/// Default verdict tolerance in DoF.
pub const DEFAULT_TOL: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum FitError {
    #[error("slope fit needs at least 3 points, window has {0}")]
    InsufficientPoints(usize),
    #[error("SNR points are not strictly increasing")]
    NotIncreasing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeEstimate {
    pub d1: f64,
    pub d2: f64,
    /// Half-widths of the 95% confidence intervals of `d1` and `d2`.
    pub ci: [f64; 2],
    /// Lowest and highest SNR (dB) of the fitted points.
    pub snr_window: (f64, f64),
}

impl SlopeEstimate {
    pub fn point(&self) -> (f64, f64) {
        (self.d1, self.d2)
    }
}

/// Two-sided 97.5% Student-t quantiles for 1..=30 degrees of freedom.
const T_975: [f64; 30] = [
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179, 2.160,
    2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064, 2.060, 2.056,
    2.052, 2.048, 2.045, 2.042,
];
const Z_975: f64 = 1.96;

fn t_quantile(dof: usize) -> f64 {
    match dof {
        0 => f64::INFINITY,
        d if d <= T_975.len() => T_975[d - 1],
        _ => Z_975,
    }
}

/// OLS fit of one user's rates over `(log2 P, rate)` pairs.
///
/// The interval combines the residual scatter about the line (Student-t with
/// `k - 2` degrees of freedom) with the Monte Carlo standard errors of the
/// individual points propagated through the OLS weights.
fn fit_user(x: &[f64], y: &[f64], stderr: &[f64]) -> (f64, f64) {
    let k = x.len() as f64;
    let x_mean = x.iter().sum::<f64>() / k;
    let y_mean = y.iter().sum::<f64>() / k;
    let sxx: f64 = x.iter().map(|xi| (xi - x_mean) * (xi - x_mean)).sum();
    let sxy: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (xi - x_mean) * (yi - y_mean))
        .sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;

    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let r = yi - (intercept + slope * xi);
            r * r
        })
        .sum();
    let dof = x.len() - 2;
    let se_residual = libm::sqrt(ssr / dof as f64 / sxx);
    let var_mc: f64 = x
        .iter()
        .zip(stderr)
        .map(|(xi, s)| {
            let w = (xi - x_mean) / sxx;
            w * w * s * s
        })
        .sum();
    let residual_part = t_quantile(dof) * se_residual;
    let mc_part = Z_975 * libm::sqrt(var_mc);
    (slope, libm::sqrt(residual_part * residual_part + mc_part * mc_part))
}

/// Fits both users' DoF over the top `window` SNR points of `trace`.
pub fn fit_slope(trace: &RateTrace, window: usize) -> Result<SlopeEstimate, FitError> {
    let take = window.min(trace.len());
    if take < 3 {
        return Err(FitError::InsufficientPoints(take));
    }
    if !trace.snr_db.windows(2).all(|w| w[0] < w[1]) {
        return Err(FitError::NotIncreasing);
    }
    let start = trace.len() - take;
    let x: alloc::vec::Vec<f64> = trace.snr_db[start..].iter().map(|&db| db_to_log2_power(db)).collect();
    let (d1, ci1) = fit_user(&x, &trace.rate1[start..], &trace.stderr1[start..]);
    let (d2, ci2) = fit_user(&x, &trace.rate2[start..], &trace.stderr2[start..]);
    Ok(SlopeEstimate {
        d1,
        d2,
        ci: [ci1, ci2],
        snr_window: (trace.snr_db[start], trace.snr_db[trace.len() - 1]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Inside,
    Boundary,
    Outside,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Inside => "inside",
            Verdict::Boundary => "boundary",
            Verdict::Outside => "outside",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Euclidean signed distance (in DoF) of each facet and axis from `point`;
/// positive means violated.
fn facet_distances(point: (f64, f64), region: &DofRegion) -> alloc::vec::Vec<(f64, bool)> {
    let (d1, d2) = point;
    let mut out: alloc::vec::Vec<(f64, bool)> = region
        .halfspaces()
        .iter()
        .map(|h| {
            let a1 = h.a1().to_f64().unwrap_or(f64::NAN);
            let a2 = h.a2().to_f64().unwrap_or(f64::NAN);
            let b = h.b().to_f64().unwrap_or(f64::NAN);
            ((a1 * d1 + a2 * d2 - b) / libm::hypot(a1, a2), true)
        })
        .collect();
    out.push((-d1, false));
    out.push((-d2, false));
    out
}

/// Classifies an estimated DoF point against `region`.
///
/// `Outside` when it violates a facet or an axis by more than `tol`;
/// `Boundary` when it is within `tol` of some (non-axis) facet; otherwise
/// `Inside`.
pub fn verify_point(est: &SlopeEstimate, region: &DofRegion, tol: f64) -> Verdict {
    verify_coordinates(est.point(), region, tol)
}

pub fn verify_coordinates(point: (f64, f64), region: &DofRegion, tol: f64) -> Verdict {
    let distances = facet_distances(point, region);
    if distances.iter().any(|(d, _)| d.is_nan() || *d > tol) {
        Verdict::Outside
    } else if distances.iter().any(|(d, facet)| *facet && d.abs() <= tol) {
        Verdict::Boundary
    } else {
        Verdict::Inside
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{DofRegion, Halfspace};
    use alloc::vec;
    use alloc::vec::Vec;

    fn trace_from(f1: impl Fn(f64) -> f64, f2: impl Fn(f64) -> f64) -> RateTrace {
        let snr: Vec<f64> = vec![30.0, 40.0, 50.0, 60.0, 70.0];
        let x: Vec<f64> = snr.iter().map(|&d| db_to_log2_power(d)).collect();
        RateTrace {
            rate1: x.iter().map(|&v| f1(v)).collect(),
            rate2: x.iter().map(|&v| f2(v)).collect(),
            stderr1: vec![0.0; 5],
            stderr2: vec![0.0; 5],
            snr_db: snr,
            trials: 1,
            seed: 0,
        }
    }

    fn est(d1: f64, d2: f64) -> SlopeEstimate {
        SlopeEstimate {
            d1,
            d2,
            ci: [0.0, 0.0],
            snr_window: (40.0, 70.0),
        }
    }

    #[test]
    fn noiseless_line() {
        let t = trace_from(|x| 2.0 * x + 5.0, |_| 3.25);
        let e = fit_slope(&t, DEFAULT_WINDOW).unwrap();
        assert!((e.d1 - 2.0).abs() < 1e-12);
        assert!(e.ci[0] < 1e-9);
        assert!(e.d2.abs() < 1e-12);
        assert!(e.ci[1] < 1e-9);
        assert_eq!(e.snr_window, (40.0, 70.0));
    }

    #[test]
    fn window_errors() {
        let t = trace_from(|x| x, |x| x);
        assert_eq!(fit_slope(&t, 2), Err(FitError::InsufficientPoints(2)));
        let mut bad = t.clone();
        bad.snr_db.swap(0, 1);
        assert_eq!(fit_slope(&bad, 3), Err(FitError::NotIncreasing));
        // a window larger than the trace uses all of it
        assert_eq!(fit_slope(&t, 10).unwrap().snr_window, (30.0, 70.0));
    }

    #[test]
    fn stderr_widens_interval() {
        let mut t = trace_from(|x| x, |x| x);
        t.stderr1 = vec![0.5; 5];
        let e = fit_slope(&t, 4).unwrap();
        assert!(e.ci[0] > 0.0);
        assert!(e.ci[1] < 1e-9);
    }

    #[test]
    fn verdicts() {
        let tri = DofRegion::from_halfspaces(vec![Halfspace::weighted_sum(2, 3)]).unwrap();
        assert_eq!(verify_point(&est(1.0, 1.5), &tri, 0.05), Verdict::Boundary);
        assert_eq!(verify_point(&est(0.0, 0.0), &tri, 0.05), Verdict::Inside);
        assert_eq!(verify_point(&est(2.0, 2.0), &tri, 0.05), Verdict::Outside);
        assert_eq!(verify_point(&est(-0.5, 1.0), &tri, 0.05), Verdict::Outside);
        assert_eq!(verify_point(&est(-0.01, 1.0), &tri, 0.05), Verdict::Inside);
        assert_eq!(verify_point(&est(f64::NAN, 1.0), &tri, 0.05), Verdict::Outside);
    }
}
