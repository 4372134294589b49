//! CSV emission and parsing. Schema: header `x,S`, decimal integer
//! rows, and a trailing `# poly=... version=... workers=...` metadata
//! comment that parsers may ignore.

use crate::CliError;
use akr8_core::hybrid::{SumSample, SumSeries};
use akr8_core::U256;
use std::io::Write;
use std::path::Path;

/// Render the standard metadata trailer. The timestamp is suppressed
/// under --deterministic so identical configurations give identical
/// bytes.
pub fn metadata_line(poly: Option<(i64, i64, i64)>, workers: u32, deterministic: bool) -> String {
    let poly = match poly {
        Some((a, b, c)) => format!("{a},{b},{c}"),
        None => "n/a".to_string(),
    };
    let mut line = format!("# poly={poly} version={} workers={workers}", crate::VERSION);
    if !deterministic {
        let ts = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        line.push_str(&format!(" timestamp={ts}"));
    }
    line
}

/// Serialize a series as `x,S` rows plus the metadata trailer.
pub fn write_series(series: &SumSeries, deterministic: bool) -> String {
    let mut out = String::from("x,S\n");
    for sample in &series.samples {
        out.push_str(&format!("{},{}\n", sample.x, sample.s.to_decimal()));
    }
    out.push_str(&metadata_line(Some(series.poly), series.workers, deterministic));
    out.push('\n');
    out
}

/// Parse a series CSV (as written by `write_series` or a checkpoint).
/// Comment lines are scanned for `poly=`; data rows must be sorted.
pub fn read_series(text: &str, path: &Path) -> Result<SumSeries, CliError> {
    let pathstr = path.display().to_string();
    let corrupt = |reason: &str| CliError::Corruption {
        path: pathstr.clone(),
        reason: reason.to_string(),
    };
    let mut poly: Option<(i64, i64, i64)> = None;
    let mut workers = 1u32;
    let mut version = crate::VERSION.to_string();
    let mut samples: Vec<SumSample> = Vec::new();
    let mut saw_header = false;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            for tokenised in comment.split_whitespace() {
                if let Some(v) = tokenised.strip_prefix("poly=") {
                    if v != "n/a" {
                        poly = crate::parse_poly(v).ok();
                    }
                } else if let Some(v) = tokenised.strip_prefix("workers=") {
                    workers = v.parse().unwrap_or(1);
                } else if let Some(v) = tokenised.strip_prefix("version=") {
                    version = v.to_string();
                }
            }
            continue;
        }
        if line == "x,S" {
            saw_header = true;
            continue;
        }
        let (xs, ss) = line
            .split_once(',')
            .ok_or_else(|| corrupt("row is not `x,S`"))?;
        let x: u64 = xs.parse().map_err(|_| corrupt("bad x value"))?;
        let s = U256::from_decimal(ss).ok_or_else(|| corrupt("bad S value"))?;
        samples.push(SumSample { x, s });
    }
    if !saw_header {
        return Err(corrupt("missing x,S header"));
    }
    if samples.is_empty() {
        return Err(corrupt("no data rows"));
    }
    let series = SumSeries {
        poly: poly.ok_or_else(|| corrupt("missing poly metadata"))?,
        limit: samples.last().unwrap().x,
        samples,
        workers,
        version,
    };
    series
        .validate()
        .map_err(|e| corrupt(&format!("invariant violation: {e}")))?;
    Ok(series)
}

/// Write a two-column integer table (`ak`, `r8` subcommands).
pub fn write_pairs_i128(
    header: &str,
    rows: impl Iterator<Item = (u64, i128)>,
    poly: Option<(i64, i64, i64)>,
    deterministic: bool,
) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for (n, v) in rows {
        out.push_str(&format!("{n},{v}\n"));
    }
    out.push_str(&metadata_line(poly, 1, deterministic));
    out.push('\n');
    out
}

pub fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(content.as_bytes())
        .map_err(|e| CliError::io(path, e))
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}
