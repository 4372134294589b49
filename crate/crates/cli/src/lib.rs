//! IO, parallelism and orchestration around `akr8-core`: CSV/JSON
//! emission, checkpoints, the parallel sieve driver, and the
//! verification suites behind `akr8 verify`.

pub mod checkpoint;
pub mod csvio;
pub mod jsonio;
pub mod parallel;
pub mod verify;

use akr8_core::arith::ArithError;
use akr8_core::field::FieldError;
use akr8_core::fit::FitError;
use akr8_core::hybrid::HybridError;
use akr8_core::series::SeriesError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid field: {0}")]
    Field(#[from] FieldError),
    #[error("arithmetic failure: {0}")]
    Arith(#[from] ArithError),
    #[error("series evaluation failed: {0}")]
    Series(#[from] SeriesError),
    #[error("hybrid sum failed: {0}")]
    Hybrid(#[from] HybridError),
    #[error("fit failed: {0}")]
    Fit(#[from] FitError),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("corrupt input {path}: {reason}")]
    Corruption { path: String, reason: String },
    #[error("checkpoint version mismatch in {path}: found {found}, expected {expected}")]
    VersionMismatch {
        path: String,
        found: String,
        expected: String,
    },
    #[error("field mismatch: {path} was generated for poly={found:?}, requested poly={expected:?}")]
    FieldMismatch {
        path: String,
        found: (i64, i64, i64),
        expected: (i64, i64, i64),
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

/// Parse "a,b,c" into cubic coefficients.
pub fn parse_poly(s: &str) -> Result<(i64, i64, i64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated integers, got {s:?}"));
    }
    let mut v = [0i64; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| format!("bad coefficient {part:?}: {e}"))?;
    }
    Ok((v[0], v[1], v[2]))
}

/// Worker-count resolution: explicit flag, then AKR8_WORKERS, then 1.
pub fn resolve_workers(flag: Option<u32>) -> u32 {
    flag.or_else(|| {
        std::env::var("AKR8_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(1)
    .max(1)
}
