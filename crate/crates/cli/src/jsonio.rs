//! JSON documents for `constants` and `fit`. Files end with the same
//! `#` metadata trailer as the CSVs; readers strip comment lines
//! before parsing.

use crate::{csvio, CliError};
use akr8_core::fit::{FitResult, ResidualFit};
use akr8_core::series::MainTermCoeffs;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputsDoc {
    pub zeta_4: f64,
    pub l_1_f: f64,
    pub l_1_sym2: f64,
    pub l_4_f: f64,
    pub l_4_sym2: f64,
    pub ratio_b2_a2: f64,
    pub b_product: f64,
    pub b_tail_estimate: f64,
    pub h_at_4: f64,
    pub euler_gamma: f64,
    pub diff_step: f64,
    pub prime_cutoff: u64,
    pub coeff_cutoff: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstantsDoc {
    pub poly: [i64; 3],
    pub c1: f64,
    pub c0: f64,
    pub inputs: InputsDoc,
}

impl ConstantsDoc {
    pub fn from_coeffs(poly: (i64, i64, i64), c: &MainTermCoeffs) -> ConstantsDoc {
        let i = &c.inputs;
        ConstantsDoc {
            poly: [poly.0, poly.1, poly.2],
            c1: c.c1,
            c0: c.c0,
            inputs: InputsDoc {
                zeta_4: i.zeta_4,
                l_1_f: i.l_1_f,
                l_1_sym2: i.l_1_sym2,
                l_4_f: i.l_4_f,
                l_4_sym2: i.l_4_sym2,
                ratio_b2_a2: i.ratio_b2_a2,
                b_product: i.b_product,
                b_tail_estimate: i.b_tail,
                h_at_4: i.h_at_4,
                euler_gamma: i.euler_gamma,
                diff_step: i.diff_step,
                prime_cutoff: i.prime_cutoff,
                coeff_cutoff: i.coeff_cutoff,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerances {
    pub c1_rel: f64,
    pub slope_min: f64,
    pub slope_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            c1_rel: 0.05,
            slope_min: 3.0,
            slope_max: 4.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PassDoc {
    pub c1_within_tolerance: bool,
    pub slope_in_window: bool,
    pub all: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitDoc {
    pub c1_hat: f64,
    pub c0_hat: f64,
    pub c1_stderr: f64,
    pub c0_stderr: f64,
    pub condition: f64,
    pub points_used: usize,
    pub residual_slope: f64,
    pub residual_slope_stderr: f64,
    pub residual_points: usize,
    pub zero_residuals_dropped: usize,
    pub analytic_c1: f64,
    pub analytic_c0: f64,
    pub x_min: u64,
    pub tolerances: Tolerances,
    pub pass: PassDoc,
}

impl FitDoc {
    pub fn build(
        fit: &FitResult,
        residual: &ResidualFit,
        constants: &ConstantsDoc,
        x_min: u64,
        tol: Tolerances,
    ) -> FitDoc {
        let c1_ok = (fit.c1_hat - constants.c1).abs() <= tol.c1_rel * constants.c1.abs();
        let slope_ok = residual.slope > tol.slope_min && residual.slope < tol.slope_max;
        FitDoc {
            c1_hat: fit.c1_hat,
            c0_hat: fit.c0_hat,
            c1_stderr: fit.c1_stderr,
            c0_stderr: fit.c0_stderr,
            condition: fit.condition,
            points_used: fit.points_used,
            residual_slope: residual.slope,
            residual_slope_stderr: residual.stderr,
            residual_points: residual.points_used,
            zero_residuals_dropped: residual.zero_residuals_dropped,
            analytic_c1: constants.c1,
            analytic_c0: constants.c0,
            x_min,
            tolerances: tol,
            pass: PassDoc {
                c1_within_tolerance: c1_ok,
                slope_in_window: slope_ok,
                all: c1_ok && slope_ok,
            },
        }
    }
}

pub fn render<T: Serialize>(
    doc: &T,
    poly: Option<(i64, i64, i64)>,
    workers: u32,
    deterministic: bool,
) -> String {
    let body = serde_json::to_string_pretty(doc).expect("serializable document");
    format!(
        "{body}\n{}\n",
        csvio::metadata_line(poly, workers, deterministic)
    )
}

/// Parse a JSON document, ignoring `#` comment lines.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<T, CliError> {
    let stripped: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    serde_json::from_str(&stripped).map_err(|e| CliError::Corruption {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}
