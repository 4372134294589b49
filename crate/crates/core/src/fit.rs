//! Least-squares comparison of the exact sums against the analytic
//! main term M(x) = x^4 (c1 log x + c0), and empirical estimation of
//! the error exponent from the residuals.
//!
//! The fit runs in the transformed variable y = S(x)/x^4 so the design
//! matrix spans (log x, 1) at unit scale instead of 10^32-sized columns.

use crate::hybrid::SumSeries;
use crate::series::MainTermCoeffs;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum FitError {
    InsufficientPoints { have: usize, need: usize },
    /// All residuals vanish: nothing to regress.
    Degenerate,
    /// An exact sum cannot be converted to f64 with the required
    /// mantissa headroom relative to x^4.
    PrecisionLoss { x: u64 },
}

impl fmt::Display for FitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::InsufficientPoints { have, need } => {
                write!(f, "fit needs {need} grid points above x_min, got {have}")
            }
            FitError::Degenerate => write!(f, "all residuals vanish; slope undefined"),
            FitError::PrecisionLoss { x } => {
                write!(f, "S({x}) too large for lossless f64 transform")
            }
        }
    }
}

impl core::error::Error for FitError {}

const MIN_POINTS: usize = 8;

/// Ordinary-least-squares result for y = S/x^4 against (log x, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub c1_hat: f64,
    pub c0_hat: f64,
    pub c1_stderr: f64,
    pub c0_stderr: f64,
    /// Condition number of the 2x2 normal matrix.
    pub condition: f64,
    pub points_used: usize,
}

/// Slope regression of log|S - M| on log x.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualFit {
    pub slope: f64,
    pub stderr: f64,
    pub points_used: usize,
    pub zero_residuals_dropped: usize,
}

/// Simple-regression core: y against (t, 1). Returns
/// (slope, intercept, slope_se, intercept_se, condition).
fn ols(ts: &[f64], ys: &[f64]) -> (f64, f64, f64, f64, f64) {
    let n = ts.len() as f64;
    let st: f64 = ts.iter().sum();
    let stt: f64 = ts.iter().map(|t| t * t).sum();
    let sy: f64 = ys.iter().sum();
    let sty: f64 = ts.iter().zip(ys).map(|(t, y)| t * y).sum();
    let det = n * stt - st * st;
    let slope = (n * sty - st * sy) / det;
    let intercept = (stt * sy - st * sty) / det;
    // residual variance with 2 parameters
    let mut ss = 0.0;
    for (t, y) in ts.iter().zip(ys) {
        let r = y - (slope * t + intercept);
        ss += r * r;
    }
    let dof = (ts.len().saturating_sub(2)).max(1) as f64;
    let sigma2 = ss / dof;
    let slope_se = libm::sqrt(sigma2 * n / det);
    let intercept_se = libm::sqrt(sigma2 * stt / det);
    // eigenvalue ratio of [[stt, st], [st, n]]
    let tr = stt + n;
    let disc = libm::sqrt(tr * tr - 4.0 * det);
    let condition = (tr + disc) / (tr - disc).max(f64::MIN_POSITIVE);
    (slope, intercept, slope_se, intercept_se, condition)
}

/// Convert a sample to (log x, S/x^4) with the mantissa-headroom check:
/// the f64 rounding of S (absolute size 2^(bits(S)-53)) must stay at
/// least 40 bits below x^4.
fn transformed(x: u64, s: &crate::acc::U256) -> Result<(f64, f64), FitError> {
    let xf = x as f64;
    let x4_bits = 4.0 * libm::log2(xf);
    if s.bits() as f64 - 53.0 > x4_bits - 40.0 {
        return Err(FitError::PrecisionLoss { x });
    }
    let y = s.to_f64() / (xf * xf * xf * xf);
    Ok((libm::log(xf), y))
}

/// Fit S(x)/x^4 = c1 log x + c0 over the grid points with x >= x_min.
pub fn fit_main_term(series: &SumSeries, x_min: u64) -> Result<FitResult, FitError> {
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for sample in series.samples.iter().filter(|s| s.x >= x_min) {
        let (t, y) = transformed(sample.x, &sample.s)?;
        ts.push(t);
        ys.push(y);
    }
    if ts.len() < MIN_POINTS {
        return Err(FitError::InsufficientPoints { have: ts.len(), need: MIN_POINTS });
    }
    let (c1_hat, c0_hat, c1_stderr, c0_stderr, condition) = ols(&ts, &ys);
    Ok(FitResult {
        c1_hat,
        c0_hat,
        c1_stderr,
        c0_stderr,
        condition,
        points_used: ts.len(),
    })
}

/// Slope of log|S(x) - M(x)| against log x over points with x >= x_min.
/// Grid points with exactly zero residual are dropped and counted.
pub fn residual_exponent(
    series: &SumSeries,
    coeffs: &MainTermCoeffs,
    x_min: u64,
) -> Result<ResidualFit, FitError> {
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    let mut dropped = 0usize;
    for sample in series.samples.iter().filter(|s| s.x >= x_min) {
        let m = coeffs.main_term(sample.x as f64);
        let r = sample.s.to_f64() - m;
        if r == 0.0 {
            dropped += 1;
            continue;
        }
        ts.push(libm::log(sample.x as f64));
        ys.push(libm::log(libm::fabs(r)));
    }
    if ts.is_empty() && dropped > 0 {
        return Err(FitError::Degenerate);
    }
    if ts.len() < MIN_POINTS {
        return Err(FitError::InsufficientPoints { have: ts.len(), need: MIN_POINTS });
    }
    let (slope, _, stderr, _, _) = ols(&ts, &ys);
    Ok(ResidualFit {
        slope,
        stderr,
        points_used: ts.len(),
        zero_residuals_dropped: dropped,
    })
}
