//! Versioned, self-describing checkpoints for sampled series.
//!
//! The format is the series CSV preceded by identifying comments:
//!
//! ```text
//! # akr8-checkpoint 1
//! # poly=0,-1,-1 version=0.1.0 workers=4
//! x,S
//! 1,16
//! ...
//! ```
//!
//! Loading re-validates every series invariant and, when the caller
//! names a field, the descriptor.

use crate::{csvio, CliError};
use akr8_core::hybrid::SumSeries;
use std::path::Path;

const FORMAT_VERSION: &str = "1";

pub fn save(series: &SumSeries, path: &Path) -> Result<(), CliError> {
    let mut out = format!("# akr8-checkpoint {FORMAT_VERSION}\n");
    out.push_str(&format!(
        "# poly={},{},{} version={} workers={}\n",
        series.poly.0, series.poly.1, series.poly.2, series.version, series.workers
    ));
    out.push_str("x,S\n");
    for sample in &series.samples {
        out.push_str(&format!("{},{}\n", sample.x, sample.s.to_decimal()));
    }
    csvio::write_file(path, &out)
}

pub fn load(path: &Path) -> Result<SumSeries, CliError> {
    let text = csvio::read_file(path)?;
    let first = text.lines().next().unwrap_or("");
    match first.strip_prefix("# akr8-checkpoint ") {
        Some(v) if v.trim() == FORMAT_VERSION => {}
        Some(v) => {
            return Err(CliError::VersionMismatch {
                path: path.display().to_string(),
                found: v.trim().to_string(),
                expected: FORMAT_VERSION.to_string(),
            })
        }
        None => {
            return Err(CliError::Corruption {
                path: path.display().to_string(),
                reason: "missing checkpoint header".to_string(),
            })
        }
    }
    csvio::read_series(&text, path)
}

/// Load and insist the checkpoint belongs to the given polynomial.
pub fn load_for(path: &Path, poly: (i64, i64, i64)) -> Result<SumSeries, CliError> {
    let series = load(path)?;
    if series.poly != poly {
        return Err(CliError::FieldMismatch {
            path: path.display().to_string(),
            found: series.poly,
            expected: poly,
        });
    }
    Ok(series)
}
