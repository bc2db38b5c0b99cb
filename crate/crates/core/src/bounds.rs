//! Certified evaluation of the upper bounds f(n), g(n), h(n), comparison
//! against exact sequence values, equality-family detection, ratio
//! analysis, and range scanners for the conjectured inequalities.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::digits::{digits_base10, Natural};
use crate::error::Error;
use crate::interval::{pow_log45, Dyadic, RealInterval};
use crate::kernels::{all_sum, even_prefix, even_sum, odd_prefix, odd_sum, sequence_value, SequenceId};

/// Which bound an operation targets: f ↔ a, g ↔ b, h ↔ c.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    F,
    G,
    H,
}

impl BoundKind {
    pub fn sequence(self) -> SequenceId {
        match self {
            BoundKind::F => SequenceId::Even,
            BoundKind::G => SequenceId::Odd,
            BoundKind::H => SequenceId::All,
        }
    }
}

/// Three-valued outcome of comparing an exact integer to a bound.
///
/// `Equal` is only produced through exact symbolic detection of the
/// equality families, never from interval overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonResult {
    Below,
    Equal,
    Above,
}

/// Precision escalation policy: start here, double until the cap.
pub const START_BITS: u32 = 128;
pub const MAX_BITS: u32 = 16_384;

/// If n = 5·10^k − 1, return k.
fn five_pow_family_minus_one(n: &Natural) -> Option<u32> {
    let d = digits_base10(n);
    let digits = d.digits();
    let (&msd, rest) = digits.split_last().unwrap();
    if msd == 4 && rest.iter().all(|&x| x == 9) {
        Some(rest.len() as u32)
    } else {
        None
    }
}

/// If n = 5·10^k, return k.
fn five_pow_family(n: &Natural) -> Option<u32> {
    let d = digits_base10(n);
    let digits = d.digits();
    let (&msd, rest) = digits.split_last().unwrap();
    if msd == 5 && rest.iter().all(|&x| x == 0) {
        Some(rest.len() as u32)
    } else {
        None
    }
}

/// Certified enclosure of f(n) = (5/11)·(45·((n+1)/5)^log₁₀45 − 1).
///
/// At the equality family n = 5·10^k − 1 the value is the exact integer
/// (5/11)(45^(k+1) − 1) and the enclosure degenerates to a point.
pub fn f_bound(n: &Natural, precision_bits: u32) -> RealInterval {
    if let Some(k) = five_pow_family_minus_one(n) {
        let exact = even_prefix(k);
        return RealInterval::point(Dyadic::from_natural(&exact), precision_bits);
    }
    let pow = pow_log45(&(n + 1u8), &BigUint::from(5u8), precision_bits);
    pow.mul_pos_int(45).sub_int(1).mul_pos_int(5).div_pos_int(11)
}

/// Certified enclosure of g(n) = (25/44)·(45·(n/5)^log₁₀45 − 1).
pub fn g_bound(n: &Natural, precision_bits: u32) -> RealInterval {
    if let Some(k) = five_pow_family(n) {
        let exact = odd_prefix(k);
        return RealInterval::point(Dyadic::from_natural(&exact), precision_bits);
    }
    let pow = pow_log45(n, &BigUint::from(5u8), precision_bits);
    pow.mul_pos_int(45).sub_int(1).mul_pos_int(25).div_pos_int(44)
}

/// Certified enclosure of h(n) = (25/44)(n^log₁₀45 − 1)
/// + (5/11)(45·((n+2)/10)^log₁₀45 − 1).
pub fn h_bound(n: &Natural, precision_bits: u32) -> RealInterval {
    let one = BigUint::one();
    let part1 = pow_log45(n, &one, precision_bits)
        .sub_int(1)
        .mul_pos_int(25)
        .div_pos_int(44);
    let part2 = pow_log45(&(n + 2u8), &BigUint::from(10u8), precision_bits)
        .mul_pos_int(45)
        .sub_int(1)
        .mul_pos_int(5)
        .div_pos_int(11);
    part1.add(&part2)
}

fn bound_interval(bound: BoundKind, n: &Natural, bits: u32) -> RealInterval {
    match bound {
        BoundKind::F => f_bound(n, bits),
        BoundKind::G => g_bound(n, bits),
        BoundKind::H => h_bound(n, bits),
    }
}

/// Compare a known exact sequence value against a bound by interval
/// separation with precision escalation. Never yields `Equal`.
fn compare_value_interval(
    bound: BoundKind,
    n: &Natural,
    value: &Natural,
    start_bits: u32,
) -> Result<ComparisonResult, Error> {
    let v = BigInt::from(value.clone());
    let mut bits = start_bits.clamp(32, MAX_BITS);
    loop {
        let iv = bound_interval(bound, n, bits);
        if iv.strictly_above(&v) {
            return Ok(ComparisonResult::Below);
        }
        if iv.strictly_below(&v) {
            return Ok(ComparisonResult::Above);
        }
        if bits >= MAX_BITS {
            return Err(Error::Indeterminate { n: n.to_string(), max_bits: MAX_BITS });
        }
        bits *= 2;
    }
}

/// Compare the sequence value at `n` against its bound.
///
/// The exact equality families (n = 5·10^k − 1 for f, n = 5·10^k for g)
/// are detected symbolically first; everything else is decided by
/// interval separation with precision escalation from 128 up to 16384
/// bits.
pub fn compare_to_bound(
    seq: SequenceId,
    n: &Natural,
    bound: BoundKind,
) -> Result<ComparisonResult, Error> {
    assert_eq!(seq, bound.sequence(), "bound {bound:?} does not apply to sequence {seq}");
    let value = sequence_value(seq, n);
    compare_known_value(bound, n, &value)
}

/// As [`compare_to_bound`] when the caller already holds the exact value.
pub fn compare_known_value(
    bound: BoundKind,
    n: &Natural,
    value: &Natural,
) -> Result<ComparisonResult, Error> {
    compare_known_value_at(bound, n, value, START_BITS)
}

/// As [`compare_known_value`] with an explicit starting precision for the
/// interval escalation.
pub fn compare_known_value_at(
    bound: BoundKind,
    n: &Natural,
    value: &Natural,
    start_bits: u32,
) -> Result<ComparisonResult, Error> {
    let exact = match bound {
        BoundKind::F => five_pow_family_minus_one(n).map(even_prefix),
        BoundKind::G => five_pow_family(n).map(odd_prefix),
        BoundKind::H => None,
    };
    if let Some(exact) = exact {
        return Ok(match value.cmp(&exact) {
            std::cmp::Ordering::Less => ComparisonResult::Below,
            std::cmp::Ordering::Equal => ComparisonResult::Equal,
            std::cmp::Ordering::Greater => ComparisonResult::Above,
        });
    }
    compare_value_interval(bound, n, value, start_bits)
}

/// Certified enclosure of a(n)/b(n) from the exact integers.
pub fn ratio(n: &Natural, precision_bits: u32) -> RealInterval {
    let a = BigInt::from(even_sum(n));
    let b = BigInt::from(odd_sum(n));
    assert!(b.is_positive(), "b(n) = 0; ratio defined for n >= 1");
    RealInterval::from_rational(&a, &b, precision_bits)
}

/// What a scanner swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanKind {
    BoundF,
    BoundG,
    BoundH,
    Ratio,
    Linear,
}

/// A certified violation at one index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub n: u64,
    pub detail: String,
}

/// Exact extremes of a(n)/b(n) over a scanned range.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioExtremes {
    pub argmin: u64,
    pub min: RealInterval,
    pub argmax: u64,
    pub max: RealInterval,
}

/// Result of a range scan. `violations` is sorted by n and every entry is
/// certified (exact integer arithmetic, or an interval strictly on the
/// violating side).
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub kind: ScanKind,
    pub range_hi: u64,
    pub violations: Vec<Violation>,
    /// Indices where the scanned relation holds with equality. Capped at
    /// [`EQUALITY_SAMPLE`] entries; `equality_count` has the true total.
    pub equalities: Vec<u64>,
    pub equality_count: u64,
    pub extremes: Option<RatioExtremes>,
}

/// Cap on the number of equality indices kept verbatim in a report.
pub const EQUALITY_SAMPLE: usize = 16;

impl ScanReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Reasonable worker count for scans.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn chunk_ranges(lo: u64, hi: u64, workers: usize) -> Vec<(u64, u64)> {
    let workers = workers.max(1) as u64;
    let count = hi - lo + 1;
    let per = count / workers;
    let extra = count % workers;
    let mut out = Vec::new();
    let mut start = lo;
    for i in 0..workers {
        let len = per + if i < extra { 1 } else { 0 };
        if len == 0 {
            continue;
        }
        out.push((start, start + len - 1));
        start += len;
    }
    out
}

/// Incremental a(n), b(n) walker over consecutive n.
struct PairWalker {
    n: u64,
    a: u128,
    b: u128,
}

impl PairWalker {
    fn seeded_at(n_start: u64) -> Self {
        let before = Natural::from(n_start - 1);
        PairWalker {
            n: n_start - 1,
            a: even_sum(&before).to_u128().expect("a(n) exceeds u128; range too large"),
            b: odd_sum(&before).to_u128().expect("b(n) exceeds u128; range too large"),
        }
    }

    fn step(&mut self) -> (u64, u128, u128) {
        self.n += 1;
        self.a += digit_product_u64(2 * self.n) as u128;
        self.b += digit_product_u64(2 * self.n - 1) as u128;
        (self.n, self.a, self.b)
    }
}

fn digit_product_u64(mut v: u64) -> u64 {
    debug_assert!(v > 0);
    let mut p: u64 = 1;
    while v > 0 {
        let d = v % 10;
        if d == 0 {
            return 0;
        }
        p *= d;
        v /= 10;
    }
    p
}

struct ChunkOutcome {
    violations: Vec<Violation>,
    equalities: Vec<u64>,
    equality_count: u64,
    min: Option<(u64, u128, u128)>, // (argmin, a, b)
    max: Option<(u64, u128, u128)>,
    error: Option<Error>,
}

fn run_chunked<F>(range_hi: u64, workers: usize, body: F) -> Vec<ChunkOutcome>
where
    F: Fn(u64, u64) -> ChunkOutcome + Sync,
{
    let chunks = chunk_ranges(1, range_hi, workers);
    let body = &body;
    std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|&(lo, hi)| scope.spawn(move || body(lo, hi)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
    })
}

fn merge_outcomes(
    kind: ScanKind,
    range_hi: u64,
    outcomes: Vec<ChunkOutcome>,
    want_extremes: bool,
) -> Result<ScanReport, Error> {
    let mut violations = Vec::new();
    let mut equalities = Vec::new();
    let mut equality_count = 0;
    let mut min: Option<(u64, u128, u128)> = None;
    let mut max: Option<(u64, u128, u128)> = None;
    for out in outcomes {
        if let Some(e) = out.error {
            return Err(e);
        }
        violations.extend(out.violations);
        equality_count += out.equality_count;
        for n in out.equalities {
            if equalities.len() < EQUALITY_SAMPLE {
                equalities.push(n);
            }
        }
        // a1/b1 < a2/b2  ⇔  a1·b2 < a2·b1
        if let Some((n, a, b)) = out.min {
            min = Some(match min {
                Some((n0, a0, b0)) if a0 * b <= a * b0 => (n0, a0, b0),
                _ => (n, a, b),
            });
        }
        if let Some((n, a, b)) = out.max {
            max = Some(match max {
                Some((n0, a0, b0)) if a0 * b >= a * b0 => (n0, a0, b0),
                _ => (n, a, b),
            });
        }
    }
    violations.sort_by_key(|v| v.n);
    equalities.sort_unstable();
    equalities.truncate(EQUALITY_SAMPLE);
    let extremes = if want_extremes {
        match (min, max) {
            (Some((nmin, _, _)), Some((nmax, _, _))) => Some(RatioExtremes {
                argmin: nmin,
                min: ratio(&Natural::from(nmin), START_BITS),
                argmax: nmax,
                max: ratio(&Natural::from(nmax), START_BITS),
            }),
            _ => None,
        }
    } else {
        None
    };
    Ok(ScanReport { kind, range_hi, violations, equalities, equality_count, extremes })
}

/// Scan the ratio inequalities in exact integer arithmetic: 4·b(n) ≤ 5·a(n),
/// a(n) ≤ 2·b(n) for all n, and a(n) < b(n) for n ≥ 5. Also records the
/// exact extremes of a(n)/b(n).
pub fn scan_ratio(range_hi: u64, workers: usize) -> Result<ScanReport, Error> {
    let outcomes = run_chunked(range_hi, workers, |lo, hi| {
        let mut out = ChunkOutcome {
            violations: Vec::new(),
            equalities: Vec::new(),
            equality_count: 0,
            min: None,
            max: None,
            error: None,
        };
        let mut walker = PairWalker::seeded_at(lo);
        for _ in lo..=hi {
            let (n, a, b) = walker.step();
            if 4 * b > 5 * a {
                out.violations.push(Violation { n, detail: format!("4*b(n)={} > 5*a(n)={}", 4 * b, 5 * a) });
            } else if 4 * b == 5 * a {
                out.equality_count += 1;
                if out.equalities.len() < EQUALITY_SAMPLE {
                    out.equalities.push(n);
                }
            }
            if a > 2 * b {
                out.violations.push(Violation { n, detail: format!("a(n)={a} > 2*b(n)={}", 2 * b) });
            }
            if n >= 5 && a >= b {
                out.violations.push(Violation { n, detail: format!("a(n)={a} >= b(n)={b} with n >= 5") });
            }
            match out.min {
                Some((_, a0, b0)) if a0 * b <= a * b0 => {}
                _ => out.min = Some((n, a, b)),
            }
            match out.max {
                Some((_, a0, b0)) if a0 * b >= a * b0 => {}
                _ => out.max = Some((n, a, b)),
            }
        }
        out
    });
    merge_outcomes(ScanKind::Ratio, range_hi, outcomes, true)
}

/// Scan 5·a(n) − 4·b(n) ≥ 0 in exact integer arithmetic.
pub fn scan_linear(range_hi: u64, workers: usize) -> Result<ScanReport, Error> {
    let outcomes = run_chunked(range_hi, workers, |lo, hi| {
        let mut out = ChunkOutcome {
            violations: Vec::new(),
            equalities: Vec::new(),
            equality_count: 0,
            min: None,
            max: None,
            error: None,
        };
        let mut walker = PairWalker::seeded_at(lo);
        for _ in lo..=hi {
            let (n, a, b) = walker.step();
            if 5 * a < 4 * b {
                out.violations.push(Violation {
                    n,
                    detail: format!("5*a(n) - 4*b(n) = -{}", 4 * b - 5 * a),
                });
            } else if 5 * a == 4 * b {
                out.equality_count += 1;
                if out.equalities.len() < EQUALITY_SAMPLE {
                    out.equalities.push(n);
                }
            }
        }
        out
    });
    merge_outcomes(ScanKind::Linear, range_hi, outcomes, false)
}

/// Scan a(n) ≤ f(n) (or b(n) ≤ g(n)) over [1, range_hi]. Equality indices
/// are verified against the exact family value; every strict comparison
/// is certified by interval separation.
pub fn scan_bound(
    bound: BoundKind,
    range_hi: u64,
    workers: usize,
    start_bits: u32,
) -> Result<ScanReport, Error> {
    assert!(matches!(bound, BoundKind::F | BoundKind::G), "use scan_h_exceptions for h");
    let kind = match bound {
        BoundKind::F => ScanKind::BoundF,
        _ => ScanKind::BoundG,
    };
    let outcomes = run_chunked(range_hi, workers, |lo, hi| {
        let mut out = ChunkOutcome {
            violations: Vec::new(),
            equalities: Vec::new(),
            equality_count: 0,
            min: None,
            max: None,
            error: None,
        };
        let mut walker = PairWalker::seeded_at(lo);
        for _ in lo..=hi {
            let (n, a, b) = walker.step();
            let value = Natural::from(if bound == BoundKind::F { a } else { b });
            let nn = Natural::from(n);
            match compare_known_value_at(bound, &nn, &value, start_bits) {
                Ok(ComparisonResult::Below) => {}
                Ok(ComparisonResult::Equal) => {
                    out.equality_count += 1;
                    if out.equalities.len() < EQUALITY_SAMPLE {
                        out.equalities.push(n);
                    }
                }
                Ok(ComparisonResult::Above) => {
                    out.violations.push(Violation {
                        n,
                        detail: format!("sequence value {value} exceeds the bound"),
                    });
                }
                Err(e) => {
                    out.error = Some(e);
                    break;
                }
            }
        }
        out
    });
    merge_outcomes(kind, range_hi, outcomes, false)
}

/// List every n in [1, range_hi] with c(n) > h(n), each certified by
/// interval separation with precision escalation.
pub fn scan_h_exceptions(
    range_hi: u64,
    workers: usize,
    start_bits: u32,
) -> Result<ScanReport, Error> {
    let outcomes = run_chunked(range_hi, workers, |lo, hi| {
        let mut out = ChunkOutcome {
            violations: Vec::new(),
            equalities: Vec::new(),
            equality_count: 0,
            min: None,
            max: None,
            error: None,
        };
        let before = Natural::from(lo - 1);
        let mut c = all_sum(&before).to_u128().expect("c(n) exceeds u128; range too large");
        for n in lo..=hi {
            c += digit_product_u64(n) as u128;
            let nn = Natural::from(n);
            match compare_value_interval(BoundKind::H, &nn, &Natural::from(c), start_bits) {
                Ok(ComparisonResult::Above) => {
                    out.violations.push(Violation { n, detail: format!("c(n) = {c} > h(n)") });
                }
                Ok(_) => {}
                Err(e) => {
                    out.error = Some(e);
                    break;
                }
            }
        }
        out
    });
    merge_outcomes(ScanKind::BoundH, range_hi, outcomes, false)
}

/// True if n is of the form 10^k − 1 (all nines), the expected exception
/// family of the h bound.
pub fn is_all_nines(n: u64) -> bool {
    let mut v = n;
    if v == 0 {
        return false;
    }
    while v > 0 {
        if v % 10 != 9 {
            return false;
        }
        v /= 10;
    }
    true
}

/// One decade of the limit probe.
#[derive(Debug, Clone, PartialEq)]
pub struct DecadeDeviation {
    pub decade: u32,
    /// max over the decade's sample grid of |a(n)/b(n) − 4/5|, exact.
    pub max_deviation: BigRational,
    /// Index attaining the maximum.
    pub argmax: u64,
}

/// Output of [`ratio_limit_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct RatioLimitProbe {
    /// Certified ratio enclosures at n = 10^k.
    pub anchors: Vec<(u32, RealInterval)>,
    /// Per-decade maximum deviation from 4/5 over a 1000-point
    /// logarithmic grid.
    pub decades: Vec<DecadeDeviation>,
}

/// Probe the limit a(n)/b(n) → 4/5: anchors at powers of ten plus
/// per-decade maximum deviations over a logarithmic sample grid.
pub fn ratio_limit_probe(k_max: u32) -> RatioLimitProbe {
    assert!(k_max >= 1, "k_max must be at least 1");
    assert!(k_max <= 15, "grid indices limited to f64-exact range");
    let mut anchors = Vec::new();
    let mut decades = Vec::new();
    let four_fifths = BigRational::new(BigInt::from(4), BigInt::from(5));
    for k in 1..=k_max {
        let n = Natural::from(10u64.pow(k));
        anchors.push((k, ratio(&n, START_BITS)));

        let mut best: Option<(BigRational, u64)> = None;
        let mut prev = 0u64;
        for i in 1..=1000u32 {
            let exact = 10f64.powf((k - 1) as f64 + i as f64 / 1000.0);
            let n = (exact.round() as u64).max(1);
            if n == prev {
                continue;
            }
            prev = n;
            let nn = Natural::from(n);
            let a = BigInt::from(even_sum(&nn));
            let b = BigInt::from(odd_sum(&nn));
            let dev = (BigRational::new(a, b) - &four_fifths).abs();
            match &best {
                Some((d, _)) if *d >= dev => {}
                _ => best = Some((dev, n)),
            }
        }
        let (max_deviation, argmax) = best.expect("grid is nonempty");
        decades.push(DecadeDeviation { decade: k, max_deviation, argmax });
    }
    RatioLimitProbe { anchors, decades }
}
