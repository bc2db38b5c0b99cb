//! Base-10 digit decomposition and digit products for arbitrary-precision
//! naturals.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Error;

/// Arbitrary-precision nonnegative integer. No magnitude cap; indices with
/// tens of thousands of decimal digits are routine inputs.
pub type Natural = BigUint;

/// Base-10 digits of a [`Natural`], least significant first.
///
/// Index 0 is the units digit, matching the subscripts of the closed
/// formulas (`a_0` is the units digit). The most significant entry is
/// nonzero except for the value 0, which is the single digit `[0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitVector {
    digits: Vec<u8>,
}

impl DigitVector {
    /// Digits, least significant first. Never empty.
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// Number of digits.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Σ digits[k]·10^k, recovering the source value exactly.
    pub fn reassemble(&self) -> Natural {
        BigUint::from_radix_le(&self.digits, 10).expect("digits are < 10")
    }

    /// Product of all digits; zero as soon as any digit is zero.
    pub fn product(&self) -> Natural {
        let mut acc = BigUint::one();
        for &d in &self.digits {
            if d == 0 {
                return BigUint::zero();
            }
            acc *= d as u32;
        }
        acc
    }
}

/// Decompose `n` into base-10 digits, least significant first.
pub fn digits_base10(n: &Natural) -> DigitVector {
    if n.is_zero() {
        return DigitVector { digits: vec![0] };
    }
    DigitVector {
        digits: n.to_radix_le(10),
    }
}

/// The contribution C(n): product of the base-10 digits of `n`.
///
/// Rejects `n = 0`; the sequences never evaluate it.
pub fn digit_product(n: &Natural) -> Result<Natural, Error> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(digits_base10(n).product())
}
