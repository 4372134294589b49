//! Randomized property checks across the arithmetic stack.

use akr8_core::arith::{self, factorize};
use akr8_core::field::CubicField;
use akr8_core::hybrid::{self, GridSpec};
use akr8_core::squares;
use akr8_core::{SplittingTable, U256};
use proptest::prelude::*;
use std::sync::OnceLock;

fn field() -> &'static CubicField {
    static FIELD: OnceLock<CubicField> = OnceLock::new();
    FIELD.get_or_init(|| CubicField::new(0, -1, -1).unwrap())
}

fn table() -> &'static SplittingTable {
    static TABLE: OnceLock<SplittingTable> = OnceLock::new();
    TABLE.get_or_init(|| SplittingTable::build(field(), 10_000))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn factorize_round_trips(n in 1u64..1_000_000_000_000) {
        let f = factorize(n);
        let mut prod = 1u64;
        let mut prev = 0u64;
        for &(p, e) in f.pairs() {
            prop_assert!(p > prev, "pairs not sorted");
            prop_assert!(arith::is_prime(p));
            prod *= p.pow(e);
            prev = p;
        }
        prop_assert_eq!(prod, n);
    }

    #[test]
    fn u256_add_sub_round_trip(a in any::<u128>(), b in any::<u128>()) {
        let ua = U256::from_u128(a);
        let ub = U256::from_u128(b);
        let sum = ua.checked_add(ub).unwrap();
        prop_assert_eq!(sum.checked_sub(ub), Some(ua));
        prop_assert_eq!(ub.checked_add(ua), Some(sum));
        prop_assert!(sum >= ua && sum >= ub);
    }

    #[test]
    fn ak_and_g_multiplicative(m in 1u64..5000, n in 1u64..5000) {
        if arith::gcd_u64(m, n) == 1 {
            let f = field();
            prop_assert_eq!(f.a_k(m * n), f.a_k(m) * f.a_k(n));
            prop_assert_eq!(f.lambda_f(m * n), f.lambda_f(m) * f.lambda_f(n));
            prop_assert_eq!(
                squares::g(m * n).unwrap(),
                squares::g(m).unwrap() * squares::g(n).unwrap()
            );
        }
    }

    #[test]
    fn coefficient_bounds(n in 1u64..200_000) {
        let f = field();
        let d = arith::divisor_count(&factorize(n));
        prop_assert!(f.a_k(n) <= d * d * d);
        prop_assert!(f.lambda_f(n).unsigned_abs() <= d);
    }

    #[test]
    fn sieve_segment_matches_direct(lo in 1u64..100_000, len in 1u64..500) {
        let spec = table().spec_ak(); // exercises the fallback beyond the table too
        let hi = lo + len;
        let base = arith::primes_up_to(arith::isqrt(hi - 1));
        let vals = arith::sieve_segment(&spec, &base, lo, hi).unwrap();
        for (i, &v) in vals.iter().enumerate() {
            let n = lo + i as u64;
            prop_assert_eq!(v, field().a_k(n) as i128, "n={}", n);
        }
    }

    #[test]
    fn hybrid_sum_segment_independent(limit in 10u64..2000, seg in 1u64..512) {
        let spec = GridSpec::default_geometric();
        let a = hybrid::hybrid_sum(table(), limit, &spec, seg).unwrap();
        let b = hybrid::hybrid_sum(table(), limit, &spec, 1 << 20).unwrap();
        prop_assert_eq!(a.samples, b.samples);
    }
}
