//! Exact integer factorization, divisor machinery, and a segmented
//! sieve for arbitrary multiplicative functions.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Errors from exact arithmetic. Overflow is always a hard error; a
/// wrong sum is worse than no sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithError {
    /// A value exceeded the fixed exact width (i128 for sieve values).
    Overflow { what: &'static str },
}

impl fmt::Display for ArithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithError::Overflow { what } => write!(f, "exact-width overflow in {what}"),
        }
    }
}

impl core::error::Error for ArithError {}

// ---------------------------------------------------------------------------
// primality and factorization
// ---------------------------------------------------------------------------

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full u64 range
/// (base set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard's rho (Brent variant) with deterministic polynomial offsets.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime(n) && n % 2 != 0);
    for c in 1..64u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!("pollard rho exhausted offsets")
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Prime factorization with strictly increasing primes and exponents >= 1.
/// The empty list encodes n = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    /// Multiply the factorization back out.
    pub fn value(&self) -> u64 {
        self.pairs
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * p.pow(e))
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, e)| e == 1)
    }
}

/// Total and deterministic on 1..=u64::MAX.
pub fn factorize(n: u64) -> Factorization {
    let mut pairs: Vec<(u64, u32)> = Vec::new();
    let mut rem = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if rem == 1 {
            break;
        }
        let mut e = 0;
        while rem % p == 0 {
            rem /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    }
    // trial division by a 2-3-5 wheel up to a fixed bound, then rho
    let mut d = 37u64;
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut wi = 0usize;
    while rem > 1 && d <= 100_000 && d * d <= rem {
        let mut e = 0;
        while rem % d == 0 {
            rem /= d;
            e += 1;
        }
        if e > 0 {
            pairs.push((d, e));
        }
        d += WHEEL[wi];
        wi = (wi + 1) & 7;
    }
    if rem > 1 {
        if rem < d * d || is_prime(rem) {
            merge_prime(&mut pairs, rem, 1);
        } else {
            let mut stack = alloc::vec![rem];
            while let Some(m) = stack.pop() {
                if is_prime(m) {
                    merge_prime(&mut pairs, m, 1);
                } else {
                    let f = pollard_rho(m);
                    stack.push(f);
                    stack.push(m / f);
                }
            }
        }
    }
    pairs.sort_unstable_by_key(|&(p, _)| p);
    // rho can split a square into equal prime parts; coalesce
    let mut merged: Vec<(u64, u32)> = Vec::with_capacity(pairs.len());
    for (p, e) in pairs {
        match merged.last_mut() {
            Some(last) if last.0 == p => last.1 += e,
            _ => merged.push((p, e)),
        }
    }
    Factorization { pairs: merged }
}

fn merge_prime(pairs: &mut Vec<(u64, u32)>, p: u64, e: u32) {
    if let Some(last) = pairs.iter_mut().find(|x| x.0 == p) {
        last.1 += e;
    } else {
        pairs.push((p, e));
    }
}

/// All divisors, each exactly once; count is the product of (e_i + 1).
pub fn divisors(f: &Factorization) -> Vec<u64> {
    let mut out = alloc::vec![1u64];
    for &(p, e) in f.pairs() {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Number of divisors d(n).
pub fn divisor_count(f: &Factorization) -> u64 {
    f.pairs().iter().map(|&(_, e)| (e + 1) as u64).product()
}

/// Moebius function: 0 on non-squarefree n, else (-1)^(number of prime factors).
pub fn mobius(n: u64) -> i8 {
    let f = factorize(n);
    if !f.is_squarefree() {
        0
    } else if f.pairs().len() % 2 == 0 {
        1
    } else {
        -1
    }
}

// ---------------------------------------------------------------------------
// multiplicative functions
// ---------------------------------------------------------------------------

/// A multiplicative arithmetic function given by its values on prime
/// powers. The rule must return f(p^k) exactly; f(1) = 1 is implied.
pub struct MultiplicativeSpec<'a> {
    name: String,
    rule: Box<dyn Fn(u64, u32) -> Result<i128, ArithError> + Sync + 'a>,
}

impl<'a> MultiplicativeSpec<'a> {
    pub fn new(
        name: &str,
        rule: impl Fn(u64, u32) -> Result<i128, ArithError> + Sync + 'a,
    ) -> Self {
        MultiplicativeSpec {
            name: String::from(name),
            rule: Box::new(rule),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn prime_power(&self, p: u64, k: u32) -> Result<i128, ArithError> {
        if k == 0 {
            return Ok(1);
        }
        (self.rule)(p, k)
    }
}

/// Product of the rule over the factorization; 1 on the empty factorization.
pub fn evaluate_multiplicative(
    spec: &MultiplicativeSpec,
    f: &Factorization,
) -> Result<i128, ArithError> {
    let mut acc: i128 = 1;
    for &(p, e) in f.pairs() {
        let v = spec.prime_power(p, e)?;
        acc = acc
            .checked_mul(v)
            .ok_or(ArithError::Overflow { what: "multiplicative product" })?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// prime generation and the segmented sieve
// ---------------------------------------------------------------------------

/// Primes up to and including `n`, by Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = alloc::vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Dense table of an exactly-evaluated multiplicative function on 1..=N.
pub struct SieveTable {
    limit: u64,
    values: Vec<i128>,
}

impl SieveTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Value at n (1-based).
    pub fn get(&self, n: u64) -> i128 {
        self.values[(n - 1) as usize]
    }

    pub fn values(&self) -> &[i128] {
        &self.values
    }
}

/// Sieve one segment [lo, hi) by smallest-prime-factor extraction.
/// `base_primes` must contain every prime p with p*p < hi.
/// Returns the values for n = lo, lo+1, ..., hi-1.
pub fn sieve_segment(
    spec: &MultiplicativeSpec,
    base_primes: &[u64],
    lo: u64,
    hi: u64,
) -> Result<Vec<i128>, ArithError> {
    debug_assert!(lo >= 1 && hi > lo);
    let len = (hi - lo) as usize;
    let mut rem: Vec<u64> = (lo..hi).collect();
    let mut vals: Vec<i128> = alloc::vec![1i128; len];
    for &p in base_primes {
        if p.saturating_mul(p) >= hi {
            break;
        }
        let mut m = lo.div_ceil(p) * p;
        while m < hi {
            let i = (m - lo) as usize;
            let mut k = 0u32;
            while rem[i] % p == 0 {
                rem[i] /= p;
                k += 1;
            }
            let v = spec.prime_power(p, k)?;
            vals[i] = vals[i]
                .checked_mul(v)
                .ok_or(ArithError::Overflow { what: "sieve value" })?;
            m += p;
        }
    }
    for i in 0..len {
        if rem[i] > 1 {
            let v = spec.prime_power(rem[i], 1)?;
            vals[i] = vals[i]
                .checked_mul(v)
                .ok_or(ArithError::Overflow { what: "sieve value" })?;
        }
    }
    Ok(vals)
}

/// Full table on 1..=N via segments. Output is identical for every
/// segment size (and, in the parallel driver, every worker count).
pub fn sieve_multiplicative(
    spec: &MultiplicativeSpec,
    n: u64,
    segment_size: u64,
) -> Result<SieveTable, ArithError> {
    assert!(n >= 1 && segment_size >= 1);
    let base_primes = primes_up_to(isqrt(n));
    let mut values = Vec::with_capacity(n as usize);
    let mut lo = 1u64;
    while lo <= n {
        let hi = (lo + segment_size).min(n + 1);
        values.extend(sieve_segment(spec, &base_primes, lo, hi)?);
        lo = hi;
    }
    Ok(SieveTable { limit: n, values })
}

/// Integer square root.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = libm::sqrt(n as f64) as u64;
    while x.checked_mul(x).is_none_or(|s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|s| s <= n) {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_basics() {
        assert_eq!(factorize(1).pairs(), &[]);
        assert_eq!(factorize(12).pairs(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(2u64.pow(32)).pairs(), &[(2, 32)]);
    }

    #[test]
    fn factorize_large_prime() {
        // primality confirmed by the deterministic Miller-Rabin oracle
        assert!(is_prime(9_999_999_967));
        assert_eq!(factorize(9_999_999_967).pairs(), &[(9_999_999_967, 1)]);
    }

    #[test]
    fn factorize_semiprime_and_square() {
        let n = 1_000_003u64 * 1_000_033;
        assert_eq!(factorize(n).pairs(), &[(1_000_003, 1), (1_000_033, 1)]);
        let sq = 1_000_003u64 * 1_000_003;
        assert_eq!(factorize(sq).pairs(), &[(1_000_003, 2)]);
    }

    #[test]
    fn divisors_examples() {
        assert_eq!(divisors(&factorize(1)), alloc::vec![1]);
        assert_eq!(divisors(&factorize(6)), alloc::vec![1, 2, 3, 6]);
        assert_eq!(divisors(&factorize(8)), alloc::vec![1, 2, 4, 8]);
        assert_eq!(divisors(&factorize(12)).len() as u64, divisor_count(&factorize(12)));
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn mobius_divisor_sum_is_unit_indicator() {
        for n in 1..=2000u64 {
            let s: i64 = divisors(&factorize(n))
                .iter()
                .map(|&d| mobius(d) as i64)
                .sum();
            assert_eq!(s, (n == 1) as i64, "n={n}");
        }
    }

    #[test]
    fn evaluate_identity_function() {
        let id = MultiplicativeSpec::new("id", |p, k| Ok((p as i128).pow(k)));
        assert_eq!(evaluate_multiplicative(&id, &factorize(12)), Ok(12));
        assert_eq!(evaluate_multiplicative(&id, &factorize(1)), Ok(1));
    }

    #[test]
    fn evaluate_overflow_is_reported() {
        let big = MultiplicativeSpec::new("big", |_, _| Ok(i128::MAX));
        assert!(matches!(
            evaluate_multiplicative(&big, &factorize(6)),
            Err(ArithError::Overflow { .. })
        ));
    }

    #[test]
    fn sieve_mobius_prefix() {
        let mu = MultiplicativeSpec::new("mu", |_, k| Ok(if k == 1 { -1 } else { 0 }));
        let t = sieve_multiplicative(&mu, 4, 3).unwrap();
        assert_eq!(t.values(), &[1, -1, -1, 0]);
    }

    #[test]
    fn sieve_matches_direct_evaluation() {
        let spec = MultiplicativeSpec::new("d", |_, k| Ok(k as i128 + 1));
        for seg in [1u64, 7, 64, 1000] {
            let t = sieve_multiplicative(&spec, 1000, seg).unwrap();
            for n in 1..=1000u64 {
                assert_eq!(
                    t.get(n),
                    evaluate_multiplicative(&spec, &factorize(n)).unwrap(),
                    "n={n} seg={seg}"
                );
            }
        }
    }

    #[test]
    fn sieve_limit_one() {
        let spec = MultiplicativeSpec::new("d", |_, k| Ok(k as i128 + 1));
        let t = sieve_multiplicative(&spec, 1, 16).unwrap();
        assert_eq!(t.values(), &[1]);
    }

    #[test]
    fn primes_small() {
        assert_eq!(primes_up_to(13), alloc::vec![2, 3, 5, 7, 11, 13]);
        assert_eq!(primes_up_to(1).len(), 0);
    }

    #[test]
    fn isqrt_edges() {
        for n in [0u64, 1, 2, 3, 4, 15, 16, 17, u32::MAX as u64, u64::MAX] {
            let r = isqrt(n);
            assert!(r.saturating_mul(r) <= n);
            assert!((r + 1).checked_mul(r + 1).map(|s| s > n).unwrap_or(true));
        }
    }
}
