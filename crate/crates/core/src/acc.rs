//! Fixed-width 256-bit unsigned accumulator.
//!
//! Partial sums of `a_K^2(n) r_8(n)` outgrow `u128` well before the
//! interesting range ends, and silent wraparound would poison every
//! downstream fit. All arithmetic here is checked; callers turn `None`
//! into a hard overflow error.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Little-endian 4x64-bit unsigned integer.
#[derive(Clone, Copy, PartialEq, Eq, Default)]
pub struct U256(pub [u64; 4]);

impl U256 {
    pub const ZERO: U256 = U256([0; 4]);

    pub fn from_u128(v: u128) -> U256 {
        U256([v as u64, (v >> 64) as u64, 0, 0])
    }

    pub fn checked_add(self, rhs: U256) -> Option<U256> {
        let mut out = [0u64; 4];
        let mut carry = 0u64;
        for i in 0..4 {
            let (s1, c1) = self.0[i].overflowing_add(rhs.0[i]);
            let (s2, c2) = s1.overflowing_add(carry);
            out[i] = s2;
            carry = (c1 as u64) + (c2 as u64);
        }
        if carry != 0 {
            None
        } else {
            Some(U256(out))
        }
    }

    pub fn checked_add_u128(self, rhs: u128) -> Option<U256> {
        self.checked_add(U256::from_u128(rhs))
    }

    pub fn checked_sub(self, rhs: U256) -> Option<U256> {
        if self < rhs {
            return None;
        }
        let mut out = [0u64; 4];
        let mut borrow = 0u64;
        for i in 0..4 {
            let (d1, b1) = self.0[i].overflowing_sub(rhs.0[i]);
            let (d2, b2) = d1.overflowing_sub(borrow);
            out[i] = d2;
            borrow = (b1 as u64) + (b2 as u64);
        }
        Some(U256(out))
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    /// Remainder modulo a small power of two (used for the mod-16 invariant).
    pub fn low_bits(&self, bits: u32) -> u64 {
        debug_assert!(bits <= 64);
        if bits == 64 {
            self.0[0]
        } else {
            self.0[0] & ((1u64 << bits) - 1)
        }
    }

    /// Position of the highest set bit plus one; 0 for zero.
    pub fn bits(&self) -> u32 {
        for i in (0..4).rev() {
            if self.0[i] != 0 {
                return 64 * i as u32 + 64 - self.0[i].leading_zeros();
            }
        }
        0
    }

    /// Nearest-representable `f64`; relative error below `2^-50`.
    pub fn to_f64(&self) -> f64 {
        let mut acc = 0.0f64;
        for i in (0..4).rev() {
            acc = acc * 18446744073709551616.0 + self.0[i] as f64;
        }
        acc
    }

    fn div_rem_u64(&self, d: u64) -> (U256, u64) {
        let mut q = [0u64; 4];
        let mut rem: u128 = 0;
        for i in (0..4).rev() {
            let cur = (rem << 64) | self.0[i] as u128;
            q[i] = (cur / d as u128) as u64;
            rem = cur % d as u128;
        }
        (U256(q), rem as u64)
    }

    pub fn checked_mul_u64(&self, m: u64) -> Option<U256> {
        let mut out = [0u64; 4];
        let mut carry: u128 = 0;
        for i in 0..4 {
            let cur = self.0[i] as u128 * m as u128 + carry;
            out[i] = cur as u64;
            carry = cur >> 64;
        }
        if carry != 0 {
            None
        } else {
            Some(U256(out))
        }
    }

    pub fn to_decimal(&self) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut digits = Vec::new();
        let mut cur = *self;
        while !cur.is_zero() {
            let (q, r) = cur.div_rem_u64(10);
            digits.push(b'0' + r as u8);
            cur = q;
        }
        digits.reverse();
        String::from_utf8(digits).expect("ascii digits")
    }

    pub fn from_decimal(s: &str) -> Option<U256> {
        if s.is_empty() {
            return None;
        }
        let mut acc = U256::ZERO;
        for b in s.bytes() {
            if !b.is_ascii_digit() {
                return None;
            }
            acc = acc
                .checked_mul_u64(10)?
                .checked_add_u128((b - b'0') as u128)?;
        }
        Some(acc)
    }
}

impl PartialOrd for U256 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for U256 {
    fn cmp(&self, other: &Self) -> Ordering {
        for i in (0..4).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Debug for U256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U256({})", self.to_decimal())
    }
}

impl fmt::Display for U256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

impl From<u128> for U256 {
    fn from(v: u128) -> Self {
        U256::from_u128(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn decimal_round_trip() {
        let a = U256::from_u128(u128::MAX);
        let b = a.checked_add(a).unwrap();
        let s = b.to_decimal();
        assert_eq!(U256::from_decimal(&s), Some(b));
        assert_eq!(U256::from_decimal("0"), Some(U256::ZERO));
        assert_eq!(U256::from_decimal("x"), None);
        assert_eq!(U256::from_decimal(""), None);
    }

    #[test]
    fn add_overflow_detected() {
        let max = U256([u64::MAX; 4]);
        assert_eq!(max.checked_add_u128(1), None);
        assert_eq!(max.checked_add(U256::ZERO), Some(max));
    }

    #[test]
    fn ordering_and_bits() {
        let one = U256::from_u128(1);
        let big = U256([0, 0, 1, 0]);
        assert!(one < big);
        assert_eq!(big.bits(), 129);
        assert_eq!(one.bits(), 1);
        assert_eq!(U256::ZERO.bits(), 0);
    }

    #[test]
    fn f64_conversion() {
        let v = U256::from_u128(1u128 << 100);
        let f = v.to_f64();
        assert!((f / 2f64.powi(100) - 1.0).abs() < 1e-12);
        assert_eq!("1267650600228229401496703205376", v.to_string());
    }

    #[test]
    fn low_bits_mod_16() {
        let v = U256::from_u128(16 * 12345 + 3);
        assert_eq!(v.low_bits(4), 3);
    }
}
