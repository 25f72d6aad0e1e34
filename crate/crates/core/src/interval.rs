//! Arbitrary precision interval arithmetic over dyadic rationals.
//!
//! An [`Interval`] is a pair of dyadic endpoints `m·2^e` together with a
//! working precision in bits. Results of arithmetic are rounded outward to the
//! larger precision of the operands, so every interval encloses the exact
//! real value it stands for. A precision of `0` marks an exact interval whose
//! endpoints are never rounded (small integers and dyadic constants).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Precision used when an operation needs rounding but neither operand
/// carries one.
pub const DEFAULT_PREC: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Round {
    Down,
    Up,
}

/// A dyadic rational `mant · 2^exp`, kept with an odd mantissa (or zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn floor_shift(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    if !m.is_negative() {
        m >> s
    } else {
        let one = BigInt::one() << s;
        let t: BigInt = -m + one - 1;
        -(t >> s)
    }
}

fn ceil_shift(m: &BigInt, s: u64) -> BigInt {
    -floor_shift(&-m, s)
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }.normalized()
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Dyadic::new(n, 0)
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.mant.is_zero() {
            0
        } else if self.mant.is_negative() {
            -1
        } else {
            1
        }
    }

    fn align(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &other.mant << ((other.exp - e) as u64);
        (a, b, e)
    }

    fn add_exact(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.align(other);
        Dyadic::new(a + b, e)
    }

    fn mul_exact(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    fn round(&self, prec: u32, dir: Round) -> Dyadic {
        if prec == 0 {
            return self.clone();
        }
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        let m = match dir {
            Round::Down => floor_shift(&self.mant, s),
            Round::Up => ceil_shift(&self.mant, s),
        };
        Dyadic::new(m, self.exp + s as i64)
    }

    fn from_rational(q: &BigRational, prec: u32, dir: Round) -> Dyadic {
        if q.is_zero() {
            return Dyadic::zero();
        }
        let num = q.numer();
        let den = q.denom();
        let k = prec as i64 + den.bits() as i64 - num.abs().bits() as i64 + 2;
        let (n, d) = if k >= 0 {
            (num << (k as u64), den.clone())
        } else {
            (num.clone(), den << ((-k) as u64))
        };
        let (quot, rem) = n.div_mod_floor(&d);
        let m = match dir {
            Round::Down => quot,
            Round::Up if rem.is_zero() => quot,
            Round::Up => quot + 1,
        };
        Dyadic::new(m, -k).round(prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as u64))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.mant.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let prec = if prec == 0 { DEFAULT_PREC } else { prec };
        let bits = self.mant.bits() as i64;
        let mut s = (2 * prec as i64 + 4 - bits).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let m = &self.mant << (s as u64);
        let e = self.exp - s;
        let mut r = m.sqrt();
        if dir == Round::Up && &r * &r != m {
            r += 1;
        }
        Dyadic::new(r, e / 2).round(prec, dir)
    }

    /// Nearest `f64` (not directed).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = floor_shift(&self.mant, shift as u64).to_f64().unwrap_or(0.0);
        let e = self.exp + shift;
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        let half = (e / 2) as i32;
        top * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }

    fn to_f64_dir(&self, dir: Round) -> f64 {
        let x = self.to_f64();
        match dir {
            Round::Down => x.next_down().next_down(),
            Round::Up => x.next_up().next_up(),
        }
    }

    fn to_decimal(&self, digits: u32, dir: Round) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = if self.exp >= 0 {
            (&self.mant << (self.exp as u64)) * &scale
        } else {
            let num = &self.mant * &scale;
            let s = (-self.exp) as u64;
            match dir {
                Round::Down => floor_shift(&num, s),
                Round::Up => ceil_shift(&num, s),
            }
        };
        format_scaled(&scaled, digits)
    }
}

fn format_scaled(scaled: &BigInt, digits: u32) -> String {
    let neg = scaled.is_negative();
    let mut s = scaled.abs().to_string();
    let d = digits as usize;
    if s.len() <= d {
        s = format!("{}{}", "0".repeat(d + 1 - s.len()), s);
    }
    let (int, frac) = s.split_at(s.len() - d);
    let body = if d == 0 {
        int.to_string()
    } else {
        format!("{int}.{frac}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let ma = self.mant.bits() as i64 + self.exp;
        let mb = other.mant.bits() as i64 + other.exp;
        if ma != mb {
            let mag = ma.cmp(&mb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let (a, b, _) = self.align(other);
        a.cmp(&b)
    }
}

/// A closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi, prec }
    }

    pub fn point(d: Dyadic) -> Self {
        Interval {
            lo: d.clone(),
            hi: d,
            prec: 0,
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Interval::point(Dyadic::from_bigint(BigInt::from(v)))
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Interval::point(Dyadic::from_bigint(v.clone()))
    }

    /// Encloses a rational; exact when the denominator is a power of two.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let den = q.denom();
        if den.is_one() || den.magnitude().count_ones() == 1 {
            let e = den.trailing_zeros().unwrap_or(0) as i64;
            return Interval::point(Dyadic::new(q.numer().clone(), -e));
        }
        let prec = if prec == 0 { DEFAULT_PREC } else { prec };
        Interval {
            lo: Dyadic::from_rational(q, prec, Round::Down),
            hi: Dyadic::from_rational(q, prec, Round::Up),
            prec,
        }
    }

    /// Encloses `center ± radius`.
    pub fn from_center_radius(center: &BigRational, radius: &BigRational, prec: u32) -> Self {
        let prec = if prec == 0 { DEFAULT_PREC } else { prec };
        let lo = center - radius;
        let hi = center + radius;
        Interval {
            lo: Dyadic::from_rational(&lo, prec, Round::Down),
            hi: Dyadic::from_rational(&hi, prec, Round::Up),
            prec,
        }
    }

    /// Encloses an `f64` together with a relative error `rel` and absolute
    /// error `abs`.
    pub fn from_f64_bounds(lo: f64, hi: f64) -> Self {
        let l = BigRational::from_float(lo).expect("finite lower bound");
        let h = BigRational::from_float(hi).expect("finite upper bound");
        Interval::new(
            Dyadic::from_rational(&l, 64, Round::Down),
            Dyadic::from_rational(&h, 64, Round::Up),
            64,
        )
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    fn round_with(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        Interval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    /// Outward rounding to a (usually coarser) precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Interval::round_with(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.add_exact(&self.lo.neg())
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64()
    }

    pub fn mid_f64(&self) -> f64 {
        self.lo.add_exact(&self.hi).to_f64() / 2.0
    }

    pub fn mid_rational(&self) -> BigRational {
        (self.lo.to_rational() + self.hi.to_rational()) / BigRational::from_integer(2.into())
    }

    /// Outward enclosure as a pair of `f64`.
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        (self.lo.to_f64_dir(Round::Down), self.hi.to_f64_dir(Round::Up))
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    /// The sign, when the interval decides it. `Some(Equal)` only for the
    /// exact zero interval.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_positive() {
            Some(Ordering::Greater)
        } else if self.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// `true` when `other ⊆ self`.
    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        &self.lo.to_rational() <= q && q <= &self.hi.to_rational()
    }

    /// `true` when every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn abs(&self) -> Interval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            -self
        } else {
            let m = self.hi.clone().max(self.lo.neg());
            Interval {
                lo: Dyadic::zero(),
                hi: m,
                prec: self.prec,
            }
        }
    }

    /// `max(0, x)` taken pointwise.
    pub fn positive_part(&self) -> Interval {
        let z = Dyadic::zero();
        Interval {
            lo: self.lo.clone().max(z.clone()),
            hi: self.hi.clone().max(z),
            prec: self.prec,
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then(|| Interval {
            lo,
            hi,
            prec: self.prec.max(other.prec),
        })
    }

    /// Square root of the non-negative part of the interval.
    pub fn sqrt(&self) -> Interval {
        assert!(self.hi.signum() >= 0, "square root of a negative interval");
        let prec = if self.prec == 0 { DEFAULT_PREC } else { self.prec };
        let lo = if self.lo.signum() <= 0 {
            Dyadic::zero()
        } else {
            self.lo.sqrt(prec, Round::Down)
        };
        Interval {
            lo,
            hi: self.hi.sqrt(prec, Round::Up),
            prec,
        }
    }

    pub fn checked_div(&self, other: &Interval) -> Option<Interval> {
        if other.contains_zero() {
            return None;
        }
        let prec = match self.prec.max(other.prec) {
            0 => DEFAULT_PREC,
            p => p,
        };
        let ends = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let quots: Vec<BigRational> = ends
            .iter()
            .map(|(a, b)| a.to_rational() / b.to_rational())
            .collect();
        let min = quots.iter().min().unwrap();
        let max = quots.iter().max().unwrap();
        Some(Interval {
            lo: Dyadic::from_rational(min, prec, Round::Down),
            hi: Dyadic::from_rational(max, prec, Round::Up),
            prec,
        })
    }

    pub fn pow(&self, n: u32) -> Interval {
        let mut acc = Interval::from_i64(1);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Lower endpoint as a decimal string rounded down.
    pub fn lower_decimal(&self, digits: u32) -> String {
        self.lo.to_decimal(digits, Round::Down)
    }

    /// Upper endpoint as a decimal string rounded up.
    pub fn upper_decimal(&self, digits: u32) -> String {
        self.hi.to_decimal(digits, Round::Up)
    }

    /// Midpoint as a decimal string (truncated).
    pub fn mid_decimal(&self, digits: u32) -> String {
        let mid = Dyadic::new(
            self.lo.add_exact(&self.hi).mant.clone(),
            self.lo.add_exact(&self.hi).exp - 1,
        );
        mid.to_decimal(digits, Round::Down)
    }

    /// Natural logarithm of a positive rational, rounded outward to `bits`.
    pub fn ln_rational(q: &BigRational, bits: u32) -> Interval {
        assert!(q.is_positive(), "logarithm of a non-positive rational");
        let bits = if bits == 0 { DEFAULT_PREC } else { bits };
        let key = (q.clone(), bits);
        if let Some(hit) = log_cache().read().unwrap().get(&key) {
            return hit.clone();
        }
        let value = ln_uncached(q, bits);
        log_cache().write().unwrap().insert(key, value.clone());
        value
    }
}

type LogCache = RwLock<HashMap<(BigRational, u32), Interval>>;

fn log_cache() -> &'static LogCache {
    static CACHE: OnceLock<LogCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

// Bounds for 2^w·atanh(a/b), valid for 0 <= a/b <= 1/3.
fn atanh_scaled(a: &BigInt, b: &BigInt, w: u64) -> (BigInt, BigInt) {
    if a.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let a2 = a * a;
    let b2 = b * b;
    let mut num = a.clone();
    let mut den = b.clone();
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    let mut j = 0u64;
    loop {
        let t = (&num << w) / (&den * BigInt::from(2 * j + 1));
        if t.is_zero() {
            break;
        }
        sum += t;
        terms += 1;
        num *= &a2;
        den *= &b2;
        j += 1;
    }
    // each truncated term lost less than one unit; the tail is below 9/8 unit
    let hi = &sum + BigInt::from(terms + 2);
    (sum, hi)
}

fn ln_uncached(q: &BigRational, bits: u32) -> Interval {
    let num = q.numer();
    let den = q.denom();
    let mut k = num.bits() as i64 - den.bits() as i64;
    let split = |k: i64| -> (BigInt, BigInt) {
        if k >= 0 {
            (num.clone(), den << (k as u64))
        } else {
            (num << ((-k) as u64), den.clone())
        }
    };
    let (mut mn, mut md) = split(k);
    if mn < md {
        k -= 1;
        (mn, md) = split(k);
    } else if mn >= (&md << 1u32) {
        k += 1;
        (mn, md) = split(k);
    }
    let w = bits as u64 + 64 + (64 - k.unsigned_abs().leading_zeros()) as u64;
    let (s_lo, s_hi) = atanh_scaled(&(&mn - &md), &(&mn + &md), w);
    let (t_lo, t_hi) = atanh_scaled(&BigInt::one(), &BigInt::from(3), w);
    let kb = BigInt::from(k);
    let (lo, hi) = if k >= 0 {
        (&kb * &t_lo + &s_lo, &kb * &t_hi + &s_hi)
    } else {
        (&kb * &t_hi + &s_lo, &kb * &t_lo + &s_hi)
    };
    let e = -(w as i64) + 1;
    Interval::round_with(Dyadic::new(lo, e), Dyadic::new(hi, e), bits)
}

fn working_prec(a: &Interval, b: &Interval) -> u32 {
    a.prec.max(b.prec)
}

impl<'a> Add<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval::round_with(
            self.lo.add_exact(&rhs.lo),
            self.hi.add_exact(&rhs.hi),
            working_prec(self, rhs),
        )
    }
}

impl<'a> Sub<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval::round_with(
            self.lo.add_exact(&rhs.hi.neg()),
            self.hi.add_exact(&rhs.lo.neg()),
            working_prec(self, rhs),
        )
    }
}

impl<'a> Mul<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let prec = working_prec(self, rhs);
        if self.lo.signum() >= 0 && rhs.lo.signum() >= 0 {
            return Interval::round_with(
                self.lo.mul_exact(&rhs.lo),
                self.hi.mul_exact(&rhs.hi),
                prec,
            );
        }
        let p = [
            self.lo.mul_exact(&rhs.lo),
            self.lo.mul_exact(&rhs.hi),
            self.hi.mul_exact(&rhs.lo),
            self.hi.mul_exact(&rhs.hi),
        ];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Interval::round_with(lo, hi, prec)
    }
}

impl<'a> Div<&'a Interval> for &'a Interval {
    type Output = Interval;
    /// Panics when the divisor contains zero; use [`Interval::checked_div`]
    /// when that can happen.
    fn div(self, rhs: &Interval) -> Interval {
        self.checked_div(rhs)
            .expect("interval division by an interval containing zero")
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Interval> for Interval {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Interval> for Interval {
            type Output = Interval;
            fn $m(self, rhs: &Interval) -> Interval {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

impl Zero for Interval {
    fn zero() -> Self {
        Interval::from_i64(0)
    }
    fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

impl One for Interval {
    fn one() -> Self {
        Interval::from_i64(1)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower_decimal(20), self.upper_decimal(20))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn floor_and_ceil_shift_negative() {
        assert_eq!(floor_shift(&BigInt::from(-5), 1), BigInt::from(-3));
        assert_eq!(ceil_shift(&BigInt::from(-5), 1), BigInt::from(-2));
        assert_eq!(floor_shift(&BigInt::from(5), 1), BigInt::from(2));
        assert_eq!(ceil_shift(&BigInt::from(5), 1), BigInt::from(3));
    }

    #[test]
    fn rational_enclosure_is_tight() {
        let third = Interval::from_rational(&q(1, 3), 128);
        assert!(third.contains_rational(&q(1, 3)));
        assert!(third.width_f64() < 1e-37);
        let half = Interval::from_rational(&q(-1, 2), 128);
        assert!(half.is_exact());
    }

    #[test]
    fn logarithms_match_f64() {
        for (n, d) in [(2, 1), (3, 1), (3, 2), (1, 7), (12, 5), (1_000_003, 1)] {
            let iv = Interval::ln_rational(&q(n, d), 256);
            let f = (n as f64 / d as f64).ln();
            assert!((iv.mid_f64() - f).abs() < 1e-12, "{n}/{d}");
            assert!(iv.width_f64() < 1e-70);
        }
        assert!(Interval::ln_rational(&q(1, 1), 64).is_zero());
    }

    #[test]
    fn log_sum_rule_holds_in_enclosures() {
        let l2 = Interval::ln_rational(&q(2, 1), 300);
        let l3 = Interval::ln_rational(&q(3, 1), 300);
        let l6 = Interval::ln_rational(&q(6, 1), 300);
        let d = &(&l2 + &l3) - &l6;
        assert!(d.contains_zero());
        assert!(d.width_f64() < 1e-85);
    }

    #[test]
    fn higher_precision_nests() {
        for p in [2i64, 3, 5, 7, 11, 13] {
            let a = Interval::ln_rational(&q(p, 1), 256);
            let b = Interval::ln_rational(&q(p, 1), 512);
            assert!(a.contains(&b), "log {p}");
        }
    }

    #[test]
    fn sqrt_and_division() {
        let two = Interval::from_i64(2);
        let r = two.with_prec(200).sqrt();
        let sq = &r * &r;
        assert!(sq.contains(&two));
        let x = &Interval::from_i64(1) / &Interval::from_i64(3);
        assert!(x.contains_rational(&q(1, 3)));
        assert!(Interval::from_i64(1).checked_div(&Interval::zero()).is_none());
    }

    #[test]
    fn decimals_are_directed() {
        let third = Interval::from_rational(&q(1, 3), 128);
        assert_eq!(third.lower_decimal(5), "0.33333");
        assert_eq!(third.upper_decimal(5), "0.33334");
        let neg = -&third;
        assert_eq!(neg.lower_decimal(3), "-0.334");
        assert_eq!(neg.upper_decimal(3), "-0.333");
    }
}
