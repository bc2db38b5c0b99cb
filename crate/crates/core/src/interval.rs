//! Certified enclosures of real bound values.
//!
//! A [`Dyadic`] is an exact rational of the form m·2^e. A [`RealInterval`]
//! is a pair of dyadics guaranteed to bracket the true real value of an
//! expression. The transcendental pieces (ln, exp, and the constant
//! log₁₀45) are evaluated in fixed-point arithmetic with explicit error
//! accounting, so every enclosure is rigorous regardless of how many
//! operations fed it.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Guard bits appended to the requested precision before any
/// transcendental evaluation; accumulated series error stays far below
/// this margin.
const GUARD_BITS: u32 = 64;

/// Exact dyadic rational m·2^e.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_integer(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    pub fn from_natural(v: &BigUint) -> Self {
        Dyadic::new(BigInt::from(v.clone()), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let (a, b) = (self, other);
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let exp = a.exp.min(b.exp);
        let am = &a.mant << (a.exp - exp) as u64;
        let bm = &b.mant << (b.exp - exp) as u64;
        Dyadic::new(am + bm, exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_int(&self, c: i64) -> Dyadic {
        Dyadic::new(&self.mant * c, self.exp)
    }

    /// Round toward −∞, keeping at most `bits` significant bits.
    pub fn round_down(&self, bits: u32) -> Dyadic {
        self.round(bits, false)
    }

    /// Round toward +∞, keeping at most `bits` significant bits.
    pub fn round_up(&self, bits: u32) -> Dyadic {
        self.round(bits, true)
    }

    fn round(&self, bits: u32, up: bool) -> Dyadic {
        let nbits = self.mant.bits();
        if nbits <= bits as u64 {
            return self.clone();
        }
        let drop = (nbits - bits as u64) as i64;
        // BigInt >> rounds toward −∞.
        let mut m = &self.mant >> drop as u64;
        if up {
            let back = &m << drop as u64;
            if back != self.mant {
                m += 1;
            }
        }
        Dyadic::new(m, self.exp + drop)
    }

    /// Divide by a positive integer, rounding toward −∞ at roughly
    /// `bits` of working resolution.
    pub fn div_int_down(&self, c: u32, bits: u32) -> Dyadic {
        let s = bits as u64 + 32;
        let num = &self.mant << s;
        Dyadic::new(num.div_floor(&BigInt::from(c)), self.exp - s as i64)
    }

    /// Divide by a positive integer, rounding toward +∞.
    pub fn div_int_up(&self, c: u32, bits: u32) -> Dyadic {
        let s = bits as u64 + 32;
        let num = &self.mant << s;
        Dyadic::new(num.div_ceil(&BigInt::from(c)), self.exp - s as i64)
    }

    /// Compare to the rational p/q with q > 0, exactly.
    pub fn cmp_ratio(&self, p: &BigInt, q: &BigInt) -> Ordering {
        debug_assert!(q.is_positive());
        // m·2^e vs p/q  ⇔  m·2^e·q vs p
        let (lhs, rhs) = if self.exp >= 0 {
            ((&self.mant << self.exp as u64) * q, p.clone())
        } else {
            (&self.mant * q, p << (-self.exp) as u64)
        };
        lhs.cmp(&rhs)
    }

    /// Best-effort f64 approximation, for display only.
    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        if bits == 0 {
            return 0.0;
        }
        // Take the top 53 bits and scale.
        let shift = bits - 53;
        let (top, exp) = if shift > 0 {
            ((&self.mant >> shift as u64).to_f64().unwrap_or(f64::NAN), self.exp + shift)
        } else {
            (self.mant.to_f64().unwrap_or(f64::NAN), self.exp)
        };
        if exp.abs() > 30_000 {
            return if exp > 0 {
                top * f64::INFINITY
            } else {
                0.0f64.copysign(top)
            };
        }
        top * 2f64.powi(exp as i32)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let exp = self.exp.min(other.exp);
        let am = &self.mant << (self.exp - exp) as u64;
        let bm = &other.mant << (other.exp - exp) as u64;
        am.cmp(&bm)
    }
}

impl std::fmt::Display for Dyadic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Certified enclosure [lo, hi] of a real value at a stated precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub precision_bits: u32,
}

impl RealInterval {
    pub fn point(d: Dyadic, precision_bits: u32) -> Self {
        RealInterval { lo: d.clone(), hi: d, precision_bits }
    }

    /// Enclose the rational num/den (den > 0) with directed rounding.
    pub fn from_rational(num: &BigInt, den: &BigInt, precision_bits: u32) -> Self {
        assert!(den.is_positive(), "denominator must be positive");
        let shifted = num << precision_bits as u64;
        let lo = shifted.div_floor(den);
        let hi = shifted.div_ceil(den);
        RealInterval {
            lo: Dyadic::new(lo, -(precision_bits as i64)),
            hi: Dyadic::new(hi, -(precision_bits as i64)),
            precision_bits,
        }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn add(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: self.lo.add(&other.lo),
            hi: self.hi.add(&other.hi),
            precision_bits: self.precision_bits.min(other.precision_bits),
        }
    }

    /// Exact scaling by a positive integer.
    pub fn mul_pos_int(&self, c: i64) -> RealInterval {
        assert!(c > 0);
        RealInterval {
            lo: self.lo.mul_int(c),
            hi: self.hi.mul_int(c),
            precision_bits: self.precision_bits,
        }
    }

    /// Exact subtraction of an integer.
    pub fn sub_int(&self, c: i64) -> RealInterval {
        let d = Dyadic::from_integer(BigInt::from(-c));
        RealInterval {
            lo: self.lo.add(&d),
            hi: self.hi.add(&d),
            precision_bits: self.precision_bits,
        }
    }

    /// Outward division by a positive integer.
    pub fn div_pos_int(&self, c: u32) -> RealInterval {
        let bits = self.precision_bits + GUARD_BITS;
        RealInterval {
            lo: self.lo.div_int_down(c, bits),
            hi: self.hi.div_int_up(c, bits),
            precision_bits: self.precision_bits,
        }
    }

    /// True if the whole interval is strictly below the integer `v`.
    pub fn strictly_below(&self, v: &BigInt) -> bool {
        self.hi.cmp_ratio(v, &BigInt::one()) == Ordering::Less
    }

    /// True if the whole interval is strictly above the integer `v`.
    pub fn strictly_above(&self, v: &BigInt) -> bool {
        self.lo.cmp_ratio(v, &BigInt::one()) == Ordering::Greater
    }

    /// True if the rational p/q (q > 0) lies inside [lo, hi].
    pub fn contains_ratio(&self, p: &BigInt, q: &BigInt) -> bool {
        self.lo.cmp_ratio(p, q) != Ordering::Greater && self.hi.cmp_ratio(p, q) != Ordering::Less
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }
}

impl std::fmt::Display for RealInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

// ---------------------------------------------------------------------
// Fixed-point transcendental core.
//
// A `Fix` holds v and err, both at implicit scale 2^-w: the true value is
// within [v - err, v + err]·2^-w. All propagation rules below
// overestimate.
// ---------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Fix {
    v: BigInt,
    err: BigInt,
}

impl Fix {
    fn exact(v: BigInt) -> Self {
        Fix { v, err: BigInt::zero() }
    }
}

fn fix_add(a: &Fix, b: &Fix) -> Fix {
    Fix { v: &a.v + &b.v, err: &a.err + &b.err }
}

fn fix_mul(a: &Fix, b: &Fix, w: u32) -> Fix {
    let v = (&a.v * &b.v) >> w as u64;
    let err = ((a.v.abs() * &b.err + b.v.abs() * &a.err + &a.err * &b.err) >> w as u64)
        + BigInt::from(2);
    Fix { v, err }
}

fn fix_div_small(a: &Fix, d: u64) -> Fix {
    Fix {
        v: a.v.div_floor(&BigInt::from(d)),
        err: a.err.div_floor(&BigInt::from(d)) + 1,
    }
}

/// a / b with b certified positive (b.v > b.err).
fn fix_div(a: &Fix, b: &Fix, w: u32) -> Fix {
    assert!(b.v > b.err, "fix_div: denominator not certified positive");
    let v = (&a.v << w as u64).div_floor(&b.v);
    let babs = b.v.abs();
    let denom = &babs * (&babs - &b.err);
    let err = ((a.v.abs() * &b.err + &babs * &a.err) << w as u64).div_floor(&denom)
        + BigInt::from(2);
    Fix { v, err }
}

/// atanh-based logarithm series: 2·Σ z^(2i+1)/(2i+1), valid for |z| < 1.
/// `ratio_num/ratio_den` must upper-bound z²/(1−z²) for the truncation
/// remainder.
fn atanh_series(z: &Fix, w: u32, ratio_num: u32, ratio_den: u32) -> Fix {
    let zsq = fix_mul(z, z, w);
    let mut power = z.clone();
    let mut sum = z.clone();
    let mut i: u64 = 1;
    loop {
        power = fix_mul(&power, &zsq, w);
        let term = fix_div_small(&power, 2 * i + 1);
        sum = fix_add(&sum, &term);
        i += 1;
        if power.v.abs() <= &power.err + 16i32 || i > 4 * w as u64 {
            // Remaining true tail ≤ |z^(2i+1)|·z²/(1−z²); overestimate
            // z^(2i+1) by |power.v| + err.
            let tail = (power.v.abs() + &power.err) * ratio_num / ratio_den + 4i32;
            sum.err += tail;
            break;
        }
    }
    Fix { v: sum.v << 1u8, err: sum.err << 1u8 }
}

fn ln2_fix(w: u32) -> Fix {
    // ln 2 = 2·atanh(1/3); z² = 1/9, z²/(1−z²) = 1/8.
    let z = Fix {
        v: (BigInt::one() << w as u64).div_floor(&BigInt::from(3)),
        err: BigInt::one(),
    };
    atanh_series(&z, w, 1, 8)
}

/// ln of a positive fixed-point value (x.v > x.err).
fn ln_fix(x: &Fix, w: u32, ln2: &Fix) -> Fix {
    assert!(x.v > x.err, "ln_fix: argument not certified positive");
    let bits = x.v.bits() as i64;
    let mut k = bits - 1 - w as i64;
    // Scale to f ∈ [1, 2) at w fractional bits.
    let shift = bits - (w as i64 + 1);
    let (mut f, mut ferr) = if shift >= 0 {
        ((&x.v >> shift as u64), (&x.err >> shift as u64) + 1)
    } else {
        ((&x.v << (-shift) as u64), &x.err << (-shift) as u64)
    };
    // Pull f into [0.75, 1.5) so |z| ≤ 1/5 below.
    if &f << 1u8 >= BigInt::from(3) << w as u64 {
        f >>= 1u8;
        ferr = (ferr >> 1u8) + 1;
        k += 1;
    }
    let one = BigInt::one() << w as u64;
    let num = Fix { v: &f - &one, err: ferr.clone() };
    let den = Fix { v: &f + &one, err: ferr };
    // |dz/df| = 2/(f+1)² < 1 on [0.75, 1.5), so fix_div's propagation
    // already covers the input error.
    let z = fix_div(&num, &den, w);
    // z² ≤ 1/25 ⇒ z²/(1−z²) ≤ 1/24.
    let lnf = atanh_series(&z, w, 1, 24);
    let kb = BigInt::from(k);
    Fix {
        v: &lnf.v + &kb * &ln2.v,
        err: &lnf.err + kb.abs() * &ln2.err + 1i32,
    }
}

/// exp of a fixed-point value. Returns (lo, hi, k) with the true value in
/// [lo, hi]·2^(k−w).
fn exp_fix(x: &Fix, w: u32, ln2: &Fix) -> (BigInt, BigInt, i64) {
    // Nearest integer to x / ln2, computed exactly.
    let k_big = (&x.v * 2i32 + &ln2.v).div_floor(&(&ln2.v * 2i32));
    let k = k_big.to_i64().unwrap_or_else(|| {
        panic!("exp_fix: exponent {k_big} out of range")
    });
    let r = Fix {
        v: &x.v - &k_big * &ln2.v,
        err: &x.err + k_big.abs() * &ln2.err + 1i32,
    };
    debug_assert!(r.v.abs() <= (BigInt::from(3) << w as u64) >> 2u8, "reduction failed");

    // Halve the argument 16 more times; the series then gains ≥ 16 bits
    // per term.
    const J: u32 = 16;
    let s = Fix { v: &r.v >> J as u64, err: (&r.err >> J as u64) + 1i32 };

    let one = BigInt::one() << w as u64;
    let mut term = Fix::exact(one.clone());
    let mut sum = Fix::exact(one);
    let mut i: u64 = 1;
    loop {
        term = fix_div_small(&fix_mul(&term, &s, w), i);
        sum = fix_add(&sum, &term);
        i += 1;
        if term.v.abs() <= &term.err + 16i32 || i > 4 * w as u64 {
            sum.err += term.v.abs() + &term.err + 4i32;
            break;
        }
    }

    // Undo the halvings by repeated interval squaring with outward
    // rounding.
    let mut lo = &sum.v - &sum.err;
    let mut hi = &sum.v + &sum.err;
    assert!(lo.is_positive(), "exp_fix: enclosure collapsed to zero");
    for _ in 0..J {
        lo = (&lo * &lo) >> w as u64;
        hi = ((&hi * &hi) >> w as u64) + 1;
    }
    (lo, hi, k)
}

struct Constants {
    ln2: Fix,
    log10_45: Fix,
}

fn constants(w: u32) -> &'static Constants {
    static CACHE: OnceLock<Mutex<HashMap<u32, &'static Constants>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    if let Some(c) = map.get(&w) {
        return c;
    }
    let ln2 = ln2_fix(w);
    let ln45 = ln_fix(&Fix::exact(BigInt::from(45) << w as u64), w, &ln2);
    let ln10 = ln_fix(&Fix::exact(BigInt::from(10) << w as u64), w, &ln2);
    let log10_45 = fix_div(&ln45, &ln10, w);
    let leaked: &'static Constants = Box::leak(Box::new(Constants { ln2, log10_45 }));
    map.insert(w, leaked);
    leaked
}

/// Certified enclosure of (num/den)^log₁₀45 for a positive rational.
pub fn pow_log45(num: &BigUint, den: &BigUint, precision_bits: u32) -> RealInterval {
    assert!(!num.is_zero() && !den.is_zero());
    let w = precision_bits + GUARD_BITS;
    let consts = constants(w);
    let x = Fix {
        v: (BigInt::from(num.clone()) << w as u64).div_floor(&BigInt::from(den.clone())),
        err: BigInt::one(),
    };
    let lnx = ln_fix(&x, w, &consts.ln2);
    let arg = fix_mul(&lnx, &consts.log10_45, w);
    let (lo, hi, k) = exp_fix(&arg, w, &consts.ln2);
    let scale = k - w as i64;
    RealInterval {
        lo: Dyadic::new(lo, scale).round_down(precision_bits + GUARD_BITS),
        hi: Dyadic::new(hi, scale).round_up(precision_bits + GUARD_BITS),
        precision_bits,
    }
}

/// Certified enclosure of ln(num/den), used by tests as an independent
/// probe of the fixed-point core.
pub fn ln_rational(num: &BigUint, den: &BigUint, precision_bits: u32) -> RealInterval {
    let w = precision_bits + GUARD_BITS;
    let consts = constants(w);
    let x = Fix {
        v: (BigInt::from(num.clone()) << w as u64).div_floor(&BigInt::from(den.clone())),
        err: BigInt::one(),
    };
    let l = ln_fix(&x, w, &consts.ln2);
    RealInterval {
        lo: Dyadic::new(&l.v - &l.err, -(w as i64)),
        hi: Dyadic::new(&l.v + &l.err, -(w as i64)),
        precision_bits,
    }
}

/// Certified enclosure of the constant log₁₀45.
pub fn log10_45(precision_bits: u32) -> RealInterval {
    let w = precision_bits + GUARD_BITS;
    let c = &constants(w).log10_45;
    RealInterval {
        lo: Dyadic::new(&c.v - &c.err, -(w as i64)),
        hi: Dyadic::new(&c.v + &c.err, -(w as i64)),
        precision_bits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ratio(p: i64, q: i64) -> (BigInt, BigInt) {
        (BigInt::from(p), BigInt::from(q))
    }

    fn decimal(digits: &str, scale: u32) -> (BigInt, BigInt) {
        (digits.parse().unwrap(), BigInt::from(10u8).pow(scale))
    }

    #[test]
    fn dyadic_ordering_and_arith() {
        let a = Dyadic::new(BigInt::from(3), -1); // 1.5
        let b = Dyadic::new(BigInt::from(25), -4); // 1.5625
        assert!(a < b);
        assert_eq!(a.add(&b), Dyadic::new(BigInt::from(49), -4));
        assert_eq!(a.mul(&b), Dyadic::new(BigInt::from(75), -5));
        assert_eq!(b.sub(&a).to_f64(), 0.0625);
    }

    #[test]
    fn rounding_is_directed() {
        let x = Dyadic::new(BigInt::from(0b10110111), 0);
        let down = x.round_down(4);
        let up = x.round_up(4);
        assert!(down <= x && x <= up);
        assert!(down < up);
    }

    #[test]
    fn from_rational_brackets() {
        let i = RealInterval::from_rational(&BigInt::from(1), &BigInt::from(3), 64);
        assert!(i.contains_ratio(&BigInt::from(1), &BigInt::from(3)));
        assert!(i.width() <= Dyadic::new(BigInt::from(2), -64));
    }

    /// The interval must sit inside [ref − 2 ulp, ref + 2 ulp] of a
    /// truncated decimal reference: tighter than the reference itself.
    fn agrees_with_reference(i: &RealInterval, p: &BigInt, q: &BigInt) -> bool {
        let two = BigInt::from(2);
        i.lo.cmp_ratio(&(p - &two), q) == Ordering::Greater
            && i.hi.cmp_ratio(&(p + &two), q) == Ordering::Less
    }

    #[test]
    fn ln2_reference_digits() {
        // ln 2 = 0.693147180559945309417232121458176568…
        let (p, q) = decimal("693147180559945309417232121458176568", 36);
        let i = ln_rational(&BigUint::from(2u8), &BigUint::from(1u8), 160);
        assert!(agrees_with_reference(&i, &p, &q), "interval {i} disagrees with ln 2");
        assert!(i.width() < Dyadic::new(BigInt::one(), -150));
    }

    #[test]
    fn log10_45_reference_digits() {
        // log₁₀45 = 1.65321251377534367937631691178573759…
        let (p, q) = decimal("165321251377534367937631691178573759", 35);
        let i = log10_45(160);
        assert!(agrees_with_reference(&i, &p, &q), "interval {i} disagrees with log10(45)");
        assert!(i.width() < Dyadic::new(BigInt::one(), -150));
    }

    #[test]
    fn pow_of_one_is_one() {
        let i = pow_log45(&BigUint::from(1u8), &BigUint::from(1u8), 128);
        assert!(i.contains_ratio(&BigInt::one(), &BigInt::one()));
        assert!(i.width() < Dyadic::new(BigInt::one(), -120));
    }

    #[test]
    fn pow_of_ten_is_45() {
        // 10^log₁₀45 = 45 exactly.
        let i = pow_log45(&BigUint::from(10u8), &BigUint::from(1u8), 128);
        assert!(i.contains_ratio(&BigInt::from(45), &BigInt::one()));
        assert!(i.width() < Dyadic::new(BigInt::one(), -110));
    }

    #[test]
    fn pow_of_hundred_is_2025() {
        // 100^log₁₀45 = 45² = 2025.
        let i = pow_log45(&BigUint::from(100u8), &BigUint::from(1u8), 192);
        assert!(i.contains_ratio(&BigInt::from(2025), &BigInt::one()));
    }

    #[test]
    fn pow_below_one() {
        // (1/10)^log₁₀45 = 1/45.
        let i = pow_log45(&BigUint::from(1u8), &BigUint::from(10u8), 128);
        assert!(i.contains_ratio(&BigInt::one(), &BigInt::from(45)));
    }

    proptest! {
        #[test]
        fn pow_precision_never_widens(num in 1u64..10_000, den in 1u64..10_000) {
            let n = BigUint::from(num);
            let d = BigUint::from(den);
            let coarse = pow_log45(&n, &d, 128);
            let fine = pow_log45(&n, &d, 256);
            prop_assert!(fine.width() <= coarse.width());
            // The fine interval must stay inside the coarse one.
            prop_assert!(coarse.lo <= fine.lo && fine.hi <= coarse.hi);
        }

        #[test]
        fn pow_multiplicativity_overlap(x in 2u64..500) {
            // (x²)^t must agree with squaring an enclosure of x^t.
            let base = pow_log45(&BigUint::from(x), &BigUint::from(1u8), 160);
            let direct = pow_log45(&BigUint::from(x * x), &BigUint::from(1u8), 160);
            let sq_lo = base.lo.mul(&base.lo);
            let sq_hi = base.hi.mul(&base.hi);
            prop_assert!(sq_lo <= direct.hi && direct.lo <= sq_hi);
        }

        #[test]
        fn interval_from_rational_sound(p in 0i64..1_000_000, q in 1i64..1_000_000) {
            let (p, q) = ratio(p, q);
            let i = RealInterval::from_rational(&p, &q, 96);
            prop_assert!(i.contains_ratio(&p, &q));
            prop_assert!(i.lo <= i.hi);
        }
    }
}
