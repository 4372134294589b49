//! Representations of n as a sum of eight squares.
//!
//! Jacobi: r_8(n) = 16 (-1)^n Σ_{d|n} (-1)^d d^3 = 16 g(n) where g is
//! multiplicative with g(p^l) = 1 + p^3 + ... + p^{3l} for odd p and
//! g(2^l) = -1 + 2^3 + 2^6 + ... + 2^{3l}. The sieve consumes g and
//! carries the factor 16 symbolically.

use crate::arith::{factorize, ArithError, MultiplicativeSpec};
use alloc::vec;
use alloc::vec::Vec;

/// g(p^l): the odd-part kernel 1 + p^3 + ... + p^{3l}, with the sign
/// of the constant term flipped at p = 2.
pub fn g_prime_power(p: u64, l: u32) -> Result<i128, ArithError> {
    if l == 0 {
        return Ok(1);
    }
    let overflow = || ArithError::Overflow { what: "g(p^k)" };
    let p3 = (p as i128)
        .checked_mul(p as i128)
        .and_then(|q| q.checked_mul(p as i128))
        .ok_or_else(overflow)?;
    let mut term: i128 = 1;
    let mut sum: i128 = if p == 2 { -1 } else { 1 };
    for _ in 0..l {
        term = term.checked_mul(p3).ok_or_else(overflow)?;
        sum = sum.checked_add(term).ok_or_else(overflow)?;
    }
    Ok(sum)
}

/// g(n) by factorization; g(n) > 0 for all n >= 1.
pub fn g(n: u64) -> Result<i128, ArithError> {
    let mut acc: i128 = 1;
    for &(p, e) in factorize(n).pairs() {
        acc = acc
            .checked_mul(g_prime_power(p, e)?)
            .ok_or(ArithError::Overflow { what: "g(n)" })?;
    }
    Ok(acc)
}

/// r_8(n) = 16 g(n).
pub fn r8(n: u64) -> Result<i128, ArithError> {
    g(n)?
        .checked_mul(16)
        .ok_or(ArithError::Overflow { what: "r8(n)" })
}

/// g as a multiplicative spec for the segmented sieve.
pub fn spec_g() -> MultiplicativeSpec<'static> {
    MultiplicativeSpec::new("g", |p, k| g_prime_power(p, k))
}

/// Lattice-count oracle: r_8(m) for all m <= limit by convolving two
/// four-square counts, each itself a convolution square of r_2.
pub fn r8_bruteforce(limit: u64) -> Vec<u64> {
    let l = limit as usize;
    // r1[m] = #{w in Z : w^2 = m}
    let mut r1 = vec![0u64; l + 1];
    r1[0] = 1;
    let mut w = 1u64;
    while w * w <= limit {
        r1[(w * w) as usize] = 2;
        w += 1;
    }
    let conv = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; l + 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().take(l + 1 - i).enumerate() {
                out[i + j] += ai * bj;
            }
        }
        out
    };
    let r2 = conv(&r1, &r1);
    let r4 = conv(&r2, &r2);
    conv(&r4, &r4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_small_values() {
        let expect: [i128; 6] = [1, 7, 28, 71, 126, 196];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(g(i as u64 + 1).unwrap(), e, "n={}", i + 1);
        }
    }

    #[test]
    fn g_prime_power_is_divisor_sum() {
        // g(p^l) = (-1)^{p^l} sum_{d | p^l} (-1)^d d^3
        for p in [2u64, 3, 5, 7, 97] {
            for l in 0..=5u32 {
                let n = p.pow(l) as i128;
                let mut s: i128 = 0;
                for k in 0..=l {
                    let d = (p as i128).pow(k);
                    let sign = if d % 2 == 0 { 1 } else { -1 };
                    s += sign * d * d * d;
                }
                let sign_n = if n % 2 == 0 { 1 } else { -1 };
                assert_eq!(g_prime_power(p, l).unwrap(), sign_n * s, "p={p} l={l}");
            }
        }
    }

    #[test]
    fn r8_matches_lattice_count() {
        let brute = r8_bruteforce(512);
        for n in 1..=512u64 {
            assert_eq!(r8(n).unwrap(), brute[n as usize] as i128, "n={n}");
        }
    }

    #[test]
    fn g_overflow_reported() {
        assert!(matches!(
            g_prime_power(u64::MAX - 58, 3),
            Err(ArithError::Overflow { .. })
        ));
    }

    #[test]
    fn g_positive_and_at_most_sigma3() {
        for n in 1..=2000u64 {
            let gn = g(n).unwrap();
            assert!(gn > 0);
            let sigma3: i128 = crate::arith::divisors(&factorize(n))
                .iter()
                .map(|&d| (d as i128).pow(3))
                .sum();
            assert!(gn <= sigma3);
            if n % 2 == 1 {
                assert_eq!(gn, sigma3); // odd n: every divisor is odd, signs cancel
            }
        }
    }
}
