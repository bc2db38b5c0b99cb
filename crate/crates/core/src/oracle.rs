//! Brute-force reference evaluation by direct accumulation of digit
//! products, independent of the closed forms in [`crate::kernels`].

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::digits::Natural;
use crate::error::Error;
use crate::kernels::{sequence_value, SequenceId};

/// Default cap on the number of terms a brute-force evaluation may touch.
pub const DEFAULT_LIMIT: u64 = 100_000_000;

/// One disagreement between the closed form and the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub n: u64,
    pub closed: Natural,
    pub oracle: Natural,
}

/// Outcome of a range verification sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub sequence: SequenceId,
    pub range_lo: u64,
    pub range_hi: u64,
    pub checked: u64,
    pub mismatches: Vec<Mismatch>,
}

impl OracleReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Decimal counter incremented in place, so a sweep over millions of
/// consecutive numbers never re-decomposes an integer from scratch.
struct DigitCounter {
    digits: Vec<u8>, // least significant first
}

impl DigitCounter {
    fn new(start: u64) -> Self {
        let digits = if start == 0 {
            vec![0]
        } else {
            let mut v = Vec::new();
            let mut s = start;
            while s > 0 {
                v.push((s % 10) as u8);
                s /= 10;
            }
            v
        };
        DigitCounter { digits }
    }

    fn add(&mut self, step: u8) {
        let mut carry = step;
        let mut i = 0;
        while carry > 0 {
            if i == self.digits.len() {
                self.digits.push(0);
            }
            let sum = self.digits[i] + carry;
            self.digits[i] = sum % 10;
            carry = sum / 10;
            i += 1;
        }
    }

    fn product(&self) -> u64 {
        let mut p: u64 = 1;
        for &d in &self.digits {
            if d == 0 {
                return 0;
            }
            p *= d as u64;
        }
        p
    }
}

fn first_member_and_step(seq: SequenceId) -> (u64, u8) {
    match seq {
        SequenceId::Even => (2, 2),
        SequenceId::Odd => (1, 2),
        SequenceId::All => (1, 1),
    }
}

fn sum_terms(seq: SequenceId, from: u64, to: u64) -> u128 {
    // Sum of the digit products of members `from..=to` (1-based term index).
    if from > to {
        return 0;
    }
    let (start, step) = first_member_and_step(seq);
    let mut counter = DigitCounter::new(start + (from - 1) * step as u64);
    let mut acc: u128 = 0;
    for _ in from..=to {
        acc += counter.product() as u128;
        counter.add(step);
    }
    acc
}

/// Sequence value by direct summation of the first `n` digit products.
pub fn oracle_sum(seq: SequenceId, n: &Natural) -> Result<Natural, Error> {
    oracle_sum_limited(seq, n, DEFAULT_LIMIT)
}

/// As [`oracle_sum`], with an explicit feasibility limit.
pub fn oracle_sum_limited(seq: SequenceId, n: &Natural, limit: u64) -> Result<Natural, Error> {
    let n = n.to_u64().filter(|&n| n <= limit).ok_or(Error::OracleLimit {
        requested: n.to_string(),
        limit,
    })?;
    Ok(BigUint::from(sum_terms(seq, 1, n)))
}

/// Compare closed-form values against a streaming oracle for every n in
/// [lo, hi], using `workers` parallel chunks.
pub fn verify_range(
    seq: SequenceId,
    lo: u64,
    hi: u64,
    workers: usize,
) -> Result<OracleReport, Error> {
    verify_range_limited(seq, lo, hi, workers, DEFAULT_LIMIT)
}

/// As [`verify_range`], with an explicit feasibility limit.
pub fn verify_range_limited(
    seq: SequenceId,
    lo: u64,
    hi: u64,
    workers: usize,
    limit: u64,
) -> Result<OracleReport, Error> {
    if lo > hi {
        return Err(Error::InvalidRange { lo: lo.to_string(), hi: hi.to_string() });
    }
    if hi > limit {
        return Err(Error::OracleLimit { requested: hi.to_string(), limit });
    }
    let workers = workers.max(1);
    let count = hi - lo + 1;
    let per = count / workers as u64;
    let extra = (count % workers as u64) as usize;

    // Contiguous chunks; each worker rebuilds its own prefix by direct
    // summation so no closed-form value ever seeds the reference side.
    let mut chunks = Vec::new();
    let mut start = lo;
    for i in 0..workers {
        let len = per + if i < extra { 1 } else { 0 };
        if len == 0 {
            continue;
        }
        chunks.push((start, start + len - 1));
        start += len;
    }

    let mut mismatches: Vec<Mismatch> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|&(chunk_lo, chunk_hi)| {
                scope.spawn(move || {
                    let mut found = Vec::new();
                    let mut acc = sum_terms(seq, 1, chunk_lo.saturating_sub(1));
                    let (start, step) = first_member_and_step(seq);
                    let mut counter = if chunk_lo >= 1 {
                        DigitCounter::new(start + (chunk_lo - 1) * step as u64)
                    } else {
                        DigitCounter::new(start)
                    };
                    for n in chunk_lo..=chunk_hi {
                        if n >= 1 {
                            acc += counter.product() as u128;
                            counter.add(step);
                        }
                        let oracle = BigUint::from(acc);
                        let closed = sequence_value(seq, &Natural::from(n));
                        if closed != oracle {
                            found.push(Mismatch { n, closed, oracle });
                        }
                    }
                    found
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    mismatches.sort_by_key(|m| m.n);

    Ok(OracleReport { sequence: seq, range_lo: lo, range_hi: hi, checked: count, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::digit_product;
    use proptest::prelude::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_sum(SequenceId::Even, &nat(3567)).unwrap(), nat(892_466));
        assert_eq!(oracle_sum(SequenceId::Odd, &nat(5)).unwrap(), nat(25));
        assert_eq!(oracle_sum(SequenceId::All, &nat(1)).unwrap(), nat(1));
    }

    #[test]
    fn limit_enforced() {
        let big: Natural = "100000000000000000000".parse().unwrap();
        assert!(matches!(
            oracle_sum(SequenceId::All, &big),
            Err(Error::OracleLimit { .. })
        ));
        assert!(matches!(
            oracle_sum_limited(SequenceId::All, &nat(1001), 1000),
            Err(Error::OracleLimit { .. })
        ));
    }

    #[test]
    fn verify_small_all_sequence() {
        let report = verify_range(SequenceId::All, 0, 11, 1).unwrap();
        assert_eq!(report.checked, 12);
        assert!(report.is_clean());
    }

    #[test]
    fn inverted_range_rejected() {
        assert!(matches!(
            verify_range(SequenceId::Odd, 5, 4, 1),
            Err(Error::InvalidRange { .. })
        ));
    }

    #[test]
    fn worker_count_independence() {
        for seq in [SequenceId::Even, SequenceId::Odd, SequenceId::All] {
            let one = verify_range(seq, 0, 2000, 1).unwrap();
            for workers in [2, 3, 7, 16] {
                assert_eq!(verify_range(seq, 0, 2000, workers).unwrap(), one);
            }
        }
    }

    proptest! {
        #[test]
        fn incremental_consistency(seq_pick in 0u8..3, n in 1u64..50_000) {
            let seq = [SequenceId::Even, SequenceId::Odd, SequenceId::All][seq_pick as usize];
            let (start, step) = first_member_and_step(seq);
            let member = nat(start + n * step as u64);
            let lhs = oracle_sum(seq, &nat(n + 1)).unwrap();
            let rhs = oracle_sum(seq, &nat(n)).unwrap() + digit_product(&member).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
