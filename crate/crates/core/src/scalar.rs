//! The unsigned integer abstraction every algorithm in this crate is written
//! against.
//!
//! Fixed-width types (`u32`, `u64`, `u128`) run fast and report overflow
//! through `None` from the checked helpers; [`BigUint`] never overflows.

use std::fmt;
use std::hash::Hash;

use num_bigint::{BigUint, ToBigUint};
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, ToPrimitive, Unsigned};

/// An unsigned integer usable as a trajectory value.
pub trait Natural:
    Clone
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Integer
    + Unsigned
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + ToBigUint
{
    /// Converts a machine word, `None` if it does not fit.
    fn lift(v: u64) -> Option<Self> {
        <Self as FromPrimitive>::from_u64(v)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn pow2(exp: u32) -> Option<Self> {
        num_traits::checked_pow(Self::two(), exp as usize)
    }

    fn pow3(exp: u32) -> Option<Self> {
        num_traits::checked_pow(Self::two() + Self::one(), exp as usize)
    }

    /// `self / 2`, rounding down.
    fn halve(&self) -> Self {
        self.clone() / Self::two()
    }

    /// `3 * self + 1`, `None` on overflow.
    fn triple_plus_one(&self) -> Option<Self> {
        let three = Self::two() + Self::one();
        self.checked_mul(&three)?.checked_add(&Self::one())
    }

    /// The low `bits` bits as a machine word (`bits <= 64`).
    fn low_bits(&self, bits: u32) -> u64 {
        debug_assert!(bits <= 64);
        let big = self.to_biguint().expect("unsigned value converts to BigUint");
        let word = big.iter_u64_digits().next().unwrap_or(0);
        if bits == 64 {
            word
        } else {
            word & ((1u64 << bits) - 1)
        }
    }

    /// Number of significant bits (0 for zero).
    fn bit_len(&self) -> u64 {
        self.to_biguint().expect("unsigned value converts to BigUint").bits()
    }

    fn to_big(&self) -> BigUint {
        self.to_biguint().expect("unsigned value converts to BigUint")
    }

    /// Parses a decimal string.
    fn parse_decimal(s: &str) -> Option<Self> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        <Self as num_traits::Num>::from_str_radix(s, 10).ok()
    }
}

impl Natural for u32 {}

impl Natural for u64 {
    fn low_bits(&self, bits: u32) -> u64 {
        if bits >= 64 {
            *self
        } else {
            *self & ((1u64 << bits) - 1)
        }
    }

    fn bit_len(&self) -> u64 {
        u64::from(64 - self.leading_zeros())
    }
}

impl Natural for u128 {
    fn low_bits(&self, bits: u32) -> u64 {
        let word = *self as u64;
        if bits >= 64 {
            word
        } else {
            word & ((1u64 << bits) - 1)
        }
    }

    fn bit_len(&self) -> u64 {
        u64::from(128 - self.leading_zeros())
    }
}

impl Natural for BigUint {
    fn halve(&self) -> Self {
        self >> 1u32
    }

    fn triple_plus_one(&self) -> Option<Self> {
        Some(self * 3u32 + 1u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_and_overflow() {
        assert_eq!(u64::pow2(63), Some(1u64 << 63));
        assert_eq!(u64::pow2(64), None);
        assert_eq!(u64::pow3(40), Some(12_157_665_459_056_928_801));
        assert_eq!(u64::pow3(41), None);
        assert_eq!(BigUint::pow2(100), Some(BigUint::from(1u8) << 100u32));
    }

    #[test]
    fn triple_plus_one_reports_overflow() {
        assert_eq!(27u64.triple_plus_one(), Some(82));
        assert_eq!((u64::MAX / 3 + 1).triple_plus_one(), None);
        assert_eq!(u32::MAX.triple_plus_one(), None);
    }

    #[test]
    fn low_bits_agree_across_types() {
        let v: u128 = (1u128 << 90) + 0b1011_0110;
        let big = BigUint::from(v);
        for bits in [0, 1, 3, 8, 24, 64] {
            assert_eq!(v.low_bits(bits), big.low_bits(bits));
        }
        assert_eq!(0xffu64.low_bits(4), 0xf);
        assert_eq!(BigUint::from(0u8).low_bits(5), 0);
    }

    #[test]
    fn parse_rejects_junk() {
        assert_eq!(u64::parse_decimal("576460752303423515"), Some(576_460_752_303_423_515));
        assert_eq!(u64::parse_decimal("-3"), None);
        assert_eq!(u64::parse_decimal(""), None);
        assert_eq!(u64::parse_decimal("1e5"), None);
        assert_eq!(u32::parse_decimal("99999999999"), None);
    }
}
