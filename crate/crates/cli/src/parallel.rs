//! Parallel drivers. All parallelism is embarrassingly data-parallel
//! with results reduced in a fixed order, so output is bit-identical
//! for every worker count.

use crate::CliError;
use akr8_core::arith;
use akr8_core::field::{CubicField, SplittingCode};
use akr8_core::hybrid::{self, GridSpec, SegmentPartial, SumSeries};
use akr8_core::SplittingTable;
use rayon::prelude::*;

fn pool(workers: u32) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers as usize)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build worker pool: {e}")))
}

/// Splitting table with the per-prime classification fanned out over
/// workers. `codes[i]` is deterministic per prime, so assembly order
/// is fixed by the prime list.
pub fn build_table(field: &CubicField, limit: u64, workers: u32) -> Result<SplittingTable, CliError> {
    let primes = arith::primes_up_to(limit);
    let codes: Vec<SplittingCode> = pool(workers)?.install(|| {
        primes
            .par_iter()
            .map(|&p| field.splitting_code(p))
            .collect()
    });
    Ok(SplittingTable::from_parts(field, limit, primes, codes))
}

/// The hybrid sum with segments sieved in parallel and reduced in
/// fixed segment order.
pub fn hybrid_sum(
    table: &SplittingTable,
    limit: u64,
    grid_spec: &GridSpec,
    segment_size: u64,
    workers: u32,
) -> Result<SumSeries, CliError> {
    let grid = hybrid::grid_points(limit, grid_spec)?;
    let base_primes = arith::primes_up_to(arith::isqrt(limit));
    let segments = hybrid::plan_segments(limit, segment_size);
    let partials: Vec<Result<SegmentPartial, _>> = pool(workers)?.install(|| {
        segments
            .par_iter()
            .map(|&(lo, hi)| hybrid::compute_segment(table, &base_primes, lo, hi, &grid))
            .collect()
    });
    let partials = partials
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok(hybrid::assemble(table, limit, &partials, workers, crate::VERSION)?)
}
