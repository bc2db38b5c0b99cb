//! Closed-form evaluation of a(n), b(n), c(n) and the block/range
//! contribution formulas.
//!
//! Cost is polynomial in the number of decimal digits of `n`, never in `n`
//! itself. Conventions: the sequences are defined for n ≥ 1 with
//! a(0) = b(0) = c(0) = 0 appended, and all empty sums/products in the
//! closed formulas are 0/1.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::digits::{digit_product, digits_base10, Natural};
use crate::error::Error;

/// Which of the three sequences an operation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceId {
    /// a(n), A061077: digit products of the first n even numbers.
    Even,
    /// b(n), A061078: digit products of the first n odd numbers.
    Odd,
    /// c(n), A061076: digit products of the first n naturals.
    All,
}

impl SequenceId {
    /// The conventional one-letter name: a, b, or c.
    pub fn letter(self) -> char {
        match self {
            SequenceId::Even => 'a',
            SequenceId::Odd => 'b',
            SequenceId::All => 'c',
        }
    }

    /// The OEIS identifier of the sequence.
    pub fn oeis_id(self) -> &'static str {
        match self {
            SequenceId::Even => "A061077",
            SequenceId::Odd => "A061078",
            SequenceId::All => "A061076",
        }
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for SequenceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "a" | "A" | "even" => Ok(SequenceId::Even),
            "b" | "B" | "odd" => Ok(SequenceId::Odd),
            "c" | "C" | "all" => Ok(SequenceId::All),
            other => Err(Error::BadDecimal(format!("unknown sequence {other:?} (expected a, b, or c)"))),
        }
    }
}

/// Parity of a range of integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// The total contribution of all numbers of one parity in [lo, hi].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeContribution {
    pub lo: Natural,
    pub hi: Natural,
    pub parity: Parity,
    pub total: Natural,
}

fn pow45(k: u32) -> BigUint {
    BigUint::from(45u8).pow(k)
}

/// Total contribution of the even numbers 11…12 → 99…98 with `k` leading
/// ones/nines: exactly 4·5^(k+1)·9^k.
pub fn even_block(k: u32) -> Natural {
    BigUint::from(4u8) * BigUint::from(5u8).pow(k + 1) * BigUint::from(9u8).pow(k)
}

/// Total contribution of the odd numbers 11…1 → 99…9 with `k` digits:
/// exactly 5^(k+1)·9^(k−1). Rejects k = 0; no zero-digit block exists.
pub fn odd_block(k: u32) -> Result<Natural, Error> {
    if k == 0 {
        return Err(Error::EmptyBlock);
    }
    Ok(BigUint::from(5u8).pow(k + 1) * BigUint::from(9u8).pow(k - 1))
}

/// C(2 → 99…98) with m+1 nines: (5·(45^(m+1) − 1))/11 by exact division.
pub fn even_prefix(m: u32) -> Natural {
    let num = BigUint::from(5u8) * (pow45(m + 1) - 1u8);
    let (q, r) = num.div_rem(&BigUint::from(11u8));
    // 45 ≡ 1 (mod 11), so 11 | 45^(m+1) − 1; a remainder is a bug.
    assert!(r.is_zero(), "even_prefix: 11 does not divide 5*(45^{}-1)", m + 1);
    q
}

/// C(1 → 99…9) with m+1 nines: (25·(45^(m+1) − 1))/44 by exact division.
pub fn odd_prefix(m: u32) -> Natural {
    let num = BigUint::from(25u8) * (pow45(m + 1) - 1u8);
    let (q, r) = num.div_rem(&BigUint::from(44u8));
    assert!(r.is_zero(), "odd_prefix: 44 does not divide 25*(45^{}-1)", m + 1);
    q
}

/// a(n): sum of the digit products of the first n even numbers, evaluated
/// through the closed formula over the digits of 2n.
pub fn even_sum(n: &Natural) -> Natural {
    if n.is_zero() {
        return BigUint::zero();
    }
    let two_n = n * 2u8;
    let d = digits_base10(&two_n);
    let digits = d.digits();
    let m = digits.len() - 1;

    let mut total = if m == 0 {
        BigUint::zero()
    } else {
        even_prefix(m as u32 - 1)
    };

    // Middle terms, walked from the most significant digit down so the
    // suffix product Π_{j>k} a_j grows one digit at a time. 2·5^k·9^(k-1)
    // = 10·45^(k-1), so a single descending power of 45 serves every term.
    let mut suffix = BigUint::one();
    if m >= 1 {
        let mut pow = pow45(m as u32 - 1);
        let forty_five = BigUint::from(45u8);
        for k in (1..=m).rev() {
            let ak = digits[k] as u32;
            if ak >= 2 {
                total += &suffix * &pow * BigUint::from(10 * ak * (ak - 1));
            }
            if ak == 0 {
                // Every remaining term carries this zero factor.
                return total;
            }
            suffix *= ak;
            if k > 1 {
                pow /= &forty_five;
            }
        }
    }

    let a0 = digits[0] as u32; // even by construction of 2n
    let half = a0 / 2;
    total + suffix * BigUint::from(half * (half + 1))
}

/// b(n): sum of the digit products of the first n odd numbers, evaluated
/// through the closed formula over the digits of 2n−1.
pub fn odd_sum(n: &Natural) -> Natural {
    if n.is_zero() {
        return BigUint::zero();
    }
    let arg = n * 2u8 - 1u8;
    let d = digits_base10(&arg);
    let digits = d.digits();
    let m = digits.len() - 1;

    let mut total = if m == 0 {
        BigUint::zero()
    } else {
        odd_prefix(m as u32 - 1)
    };

    // 5^(k+1)·9^(k-1) = 25·45^(k-1).
    let mut suffix = BigUint::one();
    if m >= 1 {
        let mut pow = pow45(m as u32 - 1);
        let forty_five = BigUint::from(45u8);
        for k in (1..=m).rev() {
            let ak = digits[k] as u32;
            if ak >= 2 {
                total += &suffix * &pow * BigUint::from(25 * ak * (ak - 1) / 2);
            }
            if ak == 0 {
                return total;
            }
            suffix *= ak;
            if k > 1 {
                pow /= &forty_five;
            }
        }
    }

    let a0 = digits[0] as u32; // odd by construction of 2n−1
    let root = (a0 + 1) / 2;
    total + suffix * BigUint::from(root * root)
}

/// c(n): sum of the digit products of the first n naturals.
///
/// c(2k) = a(k) + b(k); c(2k+1) adds the contribution of 2k+1 itself.
pub fn all_sum(n: &Natural) -> Natural {
    if n.is_zero() {
        return BigUint::zero();
    }
    let half = n / 2u8;
    let mut total = even_sum(&half) + odd_sum(&half);
    if n.is_odd() {
        total += digit_product(n).expect("n is odd, hence nonzero");
    }
    total
}

/// Dispatch to the closed form for `seq`.
pub fn sequence_value(seq: SequenceId, n: &Natural) -> Natural {
    match seq {
        SequenceId::Even => even_sum(n),
        SequenceId::Odd => odd_sum(n),
        SequenceId::All => all_sum(n),
    }
}

/// C(lo → hi) over even numbers: a(hi/2) − a(lo/2 − 1).
pub fn even_range(lo: &Natural, hi: &Natural) -> Result<RangeContribution, Error> {
    if lo.is_odd() {
        return Err(Error::Parity { value: lo.to_string(), expected: "even" });
    }
    if hi.is_odd() {
        return Err(Error::Parity { value: hi.to_string(), expected: "even" });
    }
    if lo < &BigUint::from(2u8) || lo > hi {
        return Err(Error::InvalidRange { lo: lo.to_string(), hi: hi.to_string() });
    }
    let total = even_sum(&(hi / 2u8)) - even_sum(&(lo / 2u8 - 1u8));
    Ok(RangeContribution { lo: lo.clone(), hi: hi.clone(), parity: Parity::Even, total })
}

/// C(lo → hi) over odd numbers: b(⌈hi/2⌉) − b(⌈lo/2⌉ − 1).
pub fn odd_range(lo: &Natural, hi: &Natural) -> Result<RangeContribution, Error> {
    if lo.is_even() {
        return Err(Error::Parity { value: lo.to_string(), expected: "odd" });
    }
    if hi.is_even() {
        return Err(Error::Parity { value: hi.to_string(), expected: "odd" });
    }
    if lo.is_zero() || lo > hi {
        return Err(Error::InvalidRange { lo: lo.to_string(), hi: hi.to_string() });
    }
    let total = odd_sum(&((hi + 1u8) / 2u8)) - odd_sum(&((lo + 1u8) / 2u8 - 1u8));
    Ok(RangeContribution { lo: lo.clone(), hi: hi.clone(), parity: Parity::Odd, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn even_block_table() {
        assert_eq!(even_block(0), nat(20));
        assert_eq!(even_block(1), nat(900));
        assert_eq!(even_block(3), nat(1_822_500));
    }

    #[test]
    fn odd_block_table() {
        assert_eq!(odd_block(1).unwrap(), nat(25));
        assert_eq!(odd_block(2).unwrap(), nat(1125));
        assert_eq!(odd_block(4).unwrap(), nat(2_278_125));
        assert!(matches!(odd_block(0), Err(Error::EmptyBlock)));
    }

    #[test]
    fn block_recursion_factor_45() {
        for k in 0..=20 {
            assert_eq!(even_block(k + 1), even_block(k) * 45u8);
        }
        for k in 1..=20 {
            assert_eq!(odd_block(k + 1).unwrap(), odd_block(k).unwrap() * 45u8);
        }
    }

    #[test]
    fn prefix_values() {
        assert_eq!(even_prefix(0), nat(20));
        assert_eq!(even_prefix(1), nat(920));
        assert_eq!(even_prefix(3), nat(1_863_920));
        assert_eq!(odd_prefix(0), nat(25));
        assert_eq!(odd_prefix(1), nat(1150));
        assert_eq!(odd_prefix(3), nat(2_329_900));
    }

    #[test]
    fn prefix_telescoping() {
        let mut even_acc = Natural::zero();
        let mut odd_acc = Natural::zero();
        for m in 0..=20u32 {
            even_acc += even_block(m);
            assert_eq!(even_prefix(m), even_acc);
            odd_acc += odd_block(m + 1).unwrap();
            assert_eq!(odd_prefix(m), odd_acc);
        }
    }

    #[test]
    fn even_sum_examples() {
        assert_eq!(even_sum(&nat(0)), nat(0));
        assert_eq!(even_sum(&nat(4)), nat(20));
        assert_eq!(even_sum(&nat(5)), nat(20));
        assert_eq!(even_sum(&nat(3567)), nat(892_466));
    }

    #[test]
    fn odd_sum_examples() {
        assert_eq!(odd_sum(&nat(0)), nat(0));
        assert_eq!(odd_sum(&nat(1)), nat(1));
        assert_eq!(odd_sum(&nat(5)), nat(25));
        assert_eq!(odd_sum(&nat(4637)), nat(1_894_354));
    }

    #[test]
    fn all_sum_examples() {
        assert_eq!(all_sum(&nat(0)), nat(0));
        assert_eq!(all_sum(&nat(9)), nat(45));
        assert_eq!(all_sum(&nat(10)), nat(45));
        assert_eq!(all_sum(&nat(11)), nat(46));
        assert_eq!(all_sum(&nat(999)), nat(93_195));
    }

    #[test]
    fn first_terms_match_listed_values() {
        let a: Vec<u64> = vec![0, 2, 6, 12, 20, 20, 22, 26, 32, 40, 40];
        let b: Vec<u64> = vec![0, 1, 4, 9, 16, 25, 26, 29, 34, 41, 50];
        let c: Vec<u64> = vec![0, 1, 3, 6, 10, 15, 21, 28, 36, 45, 45, 46];
        for (i, &v) in a.iter().enumerate() {
            assert_eq!(even_sum(&nat(i as u64)), nat(v), "a({i})");
        }
        for (i, &v) in b.iter().enumerate() {
            assert_eq!(odd_sum(&nat(i as u64)), nat(v), "b({i})");
        }
        for (i, &v) in c.iter().enumerate() {
            assert_eq!(all_sum(&nat(i as u64)), nat(v), "c({i})");
        }
    }

    #[test]
    fn plateau_identity() {
        // a(5·10^k − 1) = a(5·10^k), and both equal the exact prefix value.
        for k in 0..=12u32 {
            let five_pow = nat(5) * Natural::from(10u8).pow(k);
            let before = even_sum(&(&five_pow - 1u8));
            let at = even_sum(&five_pow);
            assert_eq!(before, at, "k = {k}");
            assert_eq!(at, even_prefix(k), "k = {k}");
        }
    }

    #[test]
    fn even_range_examples() {
        assert_eq!(even_range(&nat(14), &nat(22)).unwrap().total, nat(22));
        assert_eq!(even_range(&nat(2), &nat(8)).unwrap().total, nat(20));
        assert_eq!(even_range(&nat(112), &nat(998)).unwrap().total, nat(40_500));
    }

    #[test]
    fn odd_range_examples() {
        assert_eq!(odd_range(&nat(3), &nat(7)).unwrap().total, nat(15));
        assert_eq!(odd_range(&nat(111), &nat(999)).unwrap().total, nat(50_625));
        assert_eq!(odd_range(&nat(1), &nat(1)).unwrap().total, nat(1));
    }

    #[test]
    fn range_rejections() {
        assert!(matches!(even_range(&nat(3), &nat(8)), Err(Error::Parity { .. })));
        assert!(matches!(even_range(&nat(8), &nat(2)), Err(Error::InvalidRange { .. })));
        assert!(matches!(odd_range(&nat(2), &nat(7)), Err(Error::Parity { .. })));
        assert!(matches!(odd_range(&nat(7), &nat(3)), Err(Error::InvalidRange { .. })));
    }

    #[test]
    fn ranges_match_direct_summation() {
        // Definition cross-check against literal digit-product sums.
        let dp = |v: u64| crate::digits::digit_product(&nat(v)).unwrap();
        for (lo, hi) in [(2u64, 48), (14, 22), (100, 220), (2, 8)] {
            let direct: Natural = (lo..=hi).filter(|v| v % 2 == 0).map(dp).sum();
            assert_eq!(even_range(&nat(lo), &nat(hi)).unwrap().total, direct);
        }
        for (lo, hi) in [(1u64, 49), (3, 7), (101, 221), (1, 1)] {
            let direct: Natural = (lo..=hi).filter(|v| v % 2 == 1).map(dp).sum();
            assert_eq!(odd_range(&nat(lo), &nat(hi)).unwrap().total, direct);
        }
    }

    proptest! {
        #[test]
        fn decomposition_identity(n in 0u64..200_000) {
            let n = nat(n);
            prop_assert_eq!(all_sum(&(&n * 2u8)), even_sum(&n) + odd_sum(&n));
        }

        #[test]
        fn range_consistency(n in 1u64..50_000) {
            let n = nat(n);
            prop_assert_eq!(even_range(&nat(2), &(&n * 2u8)).unwrap().total, even_sum(&n));
            prop_assert_eq!(odd_range(&nat(1), &(&n * 2u8 - 1u8)).unwrap().total, odd_sum(&n));
        }

        #[test]
        fn monotone_nondecreasing(n in 1u64..100_000) {
            let n1 = nat(n);
            let n0 = nat(n - 1);
            prop_assert!(even_sum(&n0) <= even_sum(&n1));
            prop_assert!(odd_sum(&n0) <= odd_sum(&n1));
            prop_assert!(all_sum(&n0) <= all_sum(&n1));
        }

        #[test]
        fn closed_form_handles_many_digits(digits in proptest::collection::vec(0u8..10, 1..120)) {
            // Spot agreement between the two closed forms and the
            // decomposition identity at random large indices.
            let n = Natural::from_radix_le(&digits, 10).unwrap();
            prop_assert_eq!(all_sum(&(&n * 2u8)), even_sum(&n) + odd_sum(&n));
        }
    }
}
