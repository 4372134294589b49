//! The hybrid sum S(x) = sum_{n<=x} a_K^2(n) r_8(n), computed exactly
//! on a geometric sample grid.
//!
//! The sieve runs over n -> a_K^2(n) g(n) and the factor 16 is applied
//! once at emission, so accumulators stay 16x smaller. Segments are
//! independent; a parallel driver computes [`SegmentPartial`]s in any
//! order and [`assemble`] reduces them in fixed segment order, making
//! the output bit-identical across worker counts.

use crate::acc::U256;
use crate::arith::{self, sieve_segment, ArithError, MultiplicativeSpec};
use crate::field::SplittingTable;
use crate::squares::g_prime_power;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum HybridError {
    /// A term or partial sum exceeded its accumulator.
    Overflow { what: &'static str },
    /// Grid specification invalid for the requested limit.
    BadGrid { reason: &'static str },
    /// Assembly got segments that do not tile [1, X] in order.
    SegmentMismatch,
    /// A series invariant does not hold.
    Invalid { reason: &'static str },
}

impl fmt::Display for HybridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HybridError::Overflow { what } => write!(f, "accumulator overflow in {what}"),
            HybridError::BadGrid { reason } => write!(f, "invalid grid: {reason}"),
            HybridError::SegmentMismatch => write!(f, "segments do not tile the range in order"),
            HybridError::Invalid { reason } => write!(f, "series invariant violated: {reason}"),
        }
    }
}

impl core::error::Error for HybridError {}

impl From<ArithError> for HybridError {
    fn from(e: ArithError) -> Self {
        match e {
            ArithError::Overflow { what } => HybridError::Overflow { what },
        }
    }
}

/// One exact sample (x, S(x)).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumSample {
    pub x: u64,
    pub s: U256,
}

/// A sampled series with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SumSeries {
    /// Coefficients (a, b, c) of the defining cubic.
    pub poly: (i64, i64, i64),
    pub limit: u64,
    pub samples: Vec<SumSample>,
    pub workers: u32,
    pub version: String,
}

impl SumSeries {
    /// Check every invariant: strictly increasing x ending at the
    /// limit, nondecreasing S, and S = 0 mod 16.
    pub fn validate(&self) -> Result<(), HybridError> {
        if self.samples.is_empty() {
            return Err(HybridError::Invalid { reason: "empty grid" });
        }
        if self.samples.last().unwrap().x != self.limit {
            return Err(HybridError::Invalid { reason: "last grid point is not the limit" });
        }
        let mut prev: Option<&SumSample> = None;
        for sample in &self.samples {
            if sample.x < 1 {
                return Err(HybridError::Invalid { reason: "grid point below 1" });
            }
            if sample.s.low_bits(4) != 0 {
                return Err(HybridError::Invalid { reason: "S not divisible by 16" });
            }
            if let Some(p) = prev {
                if sample.x <= p.x {
                    return Err(HybridError::Invalid { reason: "grid x not strictly increasing" });
                }
                if sample.s < p.s {
                    return Err(HybridError::Invalid { reason: "S decreasing" });
                }
            }
            prev = Some(sample);
        }
        Ok(())
    }
}

/// Sample-grid specification.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    /// Points round(ratio^k), deduplicated, with the limit appended.
    Geometric { ratio: f64 },
    /// Explicit strictly increasing points in [1, limit].
    Explicit(Vec<u64>),
}

impl GridSpec {
    pub fn default_geometric() -> GridSpec {
        // 2^(1/4): ~93 points up to 1e7
        GridSpec::Geometric { ratio: 1.189207115002721 }
    }
}

/// Expand a grid spec into the sorted list of sample points, always
/// ending at `limit`.
pub fn grid_points(limit: u64, spec: &GridSpec) -> Result<Vec<u64>, HybridError> {
    if limit < 1 {
        return Err(HybridError::BadGrid { reason: "limit must be >= 1" });
    }
    let mut pts: Vec<u64> = match spec {
        GridSpec::Geometric { ratio } => {
            if !(*ratio > 1.0) || !ratio.is_finite() {
                return Err(HybridError::BadGrid { reason: "ratio must be > 1" });
            }
            let mut pts = Vec::new();
            let mut v = 1.0f64;
            loop {
                let x = libm::round(v) as u64;
                if x > limit {
                    break;
                }
                pts.push(x);
                v *= ratio;
                if v > 1.8e19 {
                    break;
                }
            }
            pts
        }
        GridSpec::Explicit(list) => {
            if list.is_empty() {
                return Err(HybridError::BadGrid { reason: "explicit grid is empty" });
            }
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(HybridError::BadGrid { reason: "explicit grid not strictly increasing" });
            }
            if list[0] < 1 || *list.last().unwrap() > limit {
                return Err(HybridError::BadGrid { reason: "explicit grid outside [1, limit]" });
            }
            list.clone()
        }
    };
    pts.dedup();
    if pts.last() != Some(&limit) {
        pts.push(limit);
    }
    Ok(pts)
}

/// The sieved multiplicative integrand n -> a_K^2(n) g(n).
pub fn spec_ak2_g<'a>(table: &'a SplittingTable) -> MultiplicativeSpec<'a> {
    MultiplicativeSpec::new("a_K^2 * g", move |p, k| {
        let a = table.code(p).ak_prime_power(k) as i128;
        let g = g_prime_power(p, k)?;
        a.checked_mul(a)
            .and_then(|sq| sq.checked_mul(g))
            .ok_or(ArithError::Overflow { what: "a_K^2(p^k) g(p^k)" })
    })
}

/// Exact partial data for one segment [lo, hi): the segment total and
/// the prefix sums at every grid point inside the segment. Grid prefix
/// sums cover n in [lo, x].
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentPartial {
    pub lo: u64,
    pub hi: u64,
    pub total: U256,
    pub grid_prefix: Vec<(u64, U256)>,
}

/// Split [1, limit] into sieve segments of at most `segment_size`.
pub fn plan_segments(limit: u64, segment_size: u64) -> Vec<(u64, u64)> {
    let step = segment_size.max(1);
    let mut out = Vec::new();
    let mut lo = 1u64;
    while lo <= limit {
        let hi = lo.saturating_add(step).min(limit + 1);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

/// Sieve one segment and accumulate its total and grid prefixes.
/// `base_primes` must cover sqrt(hi - 1); `grid` is the full sorted
/// grid (points outside [lo, hi) are ignored).
pub fn compute_segment(
    table: &SplittingTable,
    base_primes: &[u64],
    lo: u64,
    hi: u64,
    grid: &[u64],
) -> Result<SegmentPartial, HybridError> {
    let spec = spec_ak2_g(table);
    let values = sieve_segment(&spec, base_primes, lo, hi)?;
    let start = grid.partition_point(|&x| x < lo);
    let end = grid.partition_point(|&x| x < hi);
    let mut grid_iter = grid[start..end].iter().peekable();
    let mut acc = U256::ZERO;
    let mut grid_prefix = Vec::with_capacity(end - start);
    for (i, &v) in values.iter().enumerate() {
        let n = lo + i as u64;
        debug_assert!(v >= 0);
        acc = acc
            .checked_add_u128(v as u128)
            .ok_or(HybridError::Overflow { what: "segment partial sum" })?;
        while let Some(&&x) = grid_iter.peek() {
            if x == n {
                grid_prefix.push((x, acc));
                grid_iter.next();
            } else {
                break;
            }
        }
    }
    Ok(SegmentPartial { lo, hi, total: acc, grid_prefix })
}

/// Reduce segment partials (in segment order) into the final series.
/// Multiplies by 16 at emission.
pub fn assemble(
    table: &SplittingTable,
    limit: u64,
    partials: &[SegmentPartial],
    workers: u32,
    version: &str,
) -> Result<SumSeries, HybridError> {
    let mut samples = Vec::new();
    let mut offset = U256::ZERO;
    let mut expect_lo = 1u64;
    for part in partials {
        if part.lo != expect_lo {
            return Err(HybridError::SegmentMismatch);
        }
        for &(x, prefix) in &part.grid_prefix {
            let raw = offset
                .checked_add(prefix)
                .ok_or(HybridError::Overflow { what: "series prefix sum" })?;
            let s = raw
                .checked_mul_u64(16)
                .ok_or(HybridError::Overflow { what: "16 * partial sum" })?;
            samples.push(SumSample { x, s });
        }
        offset = offset
            .checked_add(part.total)
            .ok_or(HybridError::Overflow { what: "series total" })?;
        expect_lo = part.hi;
    }
    if expect_lo != limit + 1 {
        return Err(HybridError::SegmentMismatch);
    }
    let (a, b, c) = table.field().coefficients();
    let series = SumSeries {
        poly: (a, b, c),
        limit,
        samples,
        workers,
        version: String::from(version),
    };
    series.validate()?;
    Ok(series)
}

pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 20;

/// Serial end-to-end computation of the sampled series.
pub fn hybrid_sum(
    table: &SplittingTable,
    limit: u64,
    grid_spec: &GridSpec,
    segment_size: u64,
) -> Result<SumSeries, HybridError> {
    let grid = grid_points(limit, grid_spec)?;
    let base_primes = arith::primes_up_to(arith::isqrt(limit.saturating_sub(0)));
    let mut partials = Vec::new();
    for (lo, hi) in plan_segments(limit, segment_size) {
        partials.push(compute_segment(table, &base_primes, lo, hi, &grid)?);
    }
    assemble(table, limit, &partials, 1, env!("CARGO_PKG_VERSION"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CubicField;
    use crate::squares::r8;

    fn table() -> SplittingTable {
        let field = CubicField::new(0, -1, -1).unwrap();
        SplittingTable::build(&field, 10_000)
    }

    fn naive_s(table: &SplittingTable, x: u64) -> U256 {
        let f = table.field();
        let mut acc = U256::ZERO;
        for n in 1..=x {
            let a = f.a_k(n) as i128;
            let term = a * a * r8(n).unwrap();
            acc = acc.checked_add_u128(term as u128).unwrap();
        }
        acc
    }

    #[test]
    fn tiny_values() {
        let t = table();
        let spec = GridSpec::Explicit(alloc::vec![1, 2]);
        let series = hybrid_sum(&t, 2, &spec, 1 << 10).unwrap();
        assert_eq!(series.samples[0].s, U256::from_u128(16)); // a_K(1) r_8(1)
        assert_eq!(series.samples[1].s, U256::from_u128(16)); // a_K(2) = 0
    }

    #[test]
    fn matches_naive_oracle() {
        let t = table();
        let grid: Vec<u64> = (1..=60).map(|k| k * 17).collect();
        let series = hybrid_sum(&t, 1020, &GridSpec::Explicit(grid), 97).unwrap();
        for sample in &series.samples {
            assert_eq!(sample.s, naive_s(&t, sample.x), "x={}", sample.x);
        }
    }

    #[test]
    fn segment_size_irrelevant() {
        let t = table();
        let spec = GridSpec::default_geometric();
        let a = hybrid_sum(&t, 5000, &spec, 64).unwrap();
        let b = hybrid_sum(&t, 5000, &spec, 1 << 20).unwrap();
        assert_eq!(a.samples, b.samples);
    }

    #[test]
    fn geometric_grid_shape() {
        let pts = grid_points(10_000_000, &GridSpec::default_geometric()).unwrap();
        assert!(pts.len() >= 90 && pts.len() <= 100, "len={}", pts.len());
        assert_eq!(*pts.last().unwrap(), 10_000_000);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bad_grids_rejected() {
        assert!(matches!(
            grid_points(10, &GridSpec::Geometric { ratio: 1.0 }),
            Err(HybridError::BadGrid { .. })
        ));
        assert!(matches!(
            grid_points(10, &GridSpec::Explicit(alloc::vec![3, 3])),
            Err(HybridError::BadGrid { .. })
        ));
        assert!(matches!(
            grid_points(10, &GridSpec::Explicit(alloc::vec![11])),
            Err(HybridError::BadGrid { .. })
        ));
    }

    #[test]
    fn validation_catches_violations() {
        let t = table();
        let mut series = hybrid_sum(&t, 100, &GridSpec::default_geometric(), 1 << 10).unwrap();
        series.validate().unwrap();
        let last = series.samples.len() - 1;
        series.samples[last].s = U256::from_u128(16);
        assert!(matches!(
            series.validate(),
            Err(HybridError::Invalid { reason: "S decreasing" })
        ));
        series.samples[last].s = U256::from_u128(8);
        assert!(matches!(
            series.validate(),
            Err(HybridError::Invalid { reason: "S not divisible by 16" })
        ));
    }
}
