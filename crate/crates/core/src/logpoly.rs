//! Exact polynomials in logarithms of primes, and the [`Real`] scalar.
//!
//! Log-values of rationals are rational combinations of `log p`; products of
//! such values (determinants) are polynomials in the `log p`. Keeping them
//! symbolic makes cancellations such as the product formula exact. Signs are
//! decided exactly for linear forms and by interval evaluation otherwise.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::factor_rational;
use crate::error::{Error, Result};
use crate::interval::{Interval, DEFAULT_PREC};
use crate::precision::PrecisionContext;
use crate::scalar::Scalar;

/// A product `Π (log p)^k` over distinct primes, sorted by prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(u64, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn log(p: u64) -> Self {
        Monomial(vec![(p, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, k)| k).sum()
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    fn eval(&self, bits: u32) -> Interval {
        let mut acc = Interval::from_i64(1);
        for &(p, k) in &self.0 {
            let l = Interval::ln_rational(&BigRational::from_integer(p.into()), bits);
            acc = &acc * &l.pow(k);
        }
        acc
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(p, k)| {
                if k == 1 {
                    format!("log({p})")
                } else {
                    format!("log({p})^{k}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A polynomial with rational coefficients in the logarithms of primes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LogPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl LogPoly {
    pub fn constant(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Monomial::one(), q);
        }
        LogPoly { terms }
    }

    pub fn from_i64(v: i64) -> Self {
        LogPoly::constant(BigRational::from_integer(v.into()))
    }

    /// `c · log p`.
    pub fn log_prime(p: u64, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::log(p), c);
        }
        LogPoly { terms }
    }

    /// `log q` for a positive rational, expanded over primes.
    pub fn log_of_rational(q: &BigRational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::invalid(format!("logarithm of non-positive {q}")));
        }
        let mut out = LogPoly::zero();
        for (p, e) in factor_rational(q)? {
            out = out + LogPoly::log_prime(p, BigRational::from_integer(e.into()));
        }
        Ok(out)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// The value when the polynomial is a rational constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self
                .terms
                .get(&Monomial::one())
                .cloned(),
            _ => None,
        }
    }

    /// Coefficients of a homogeneous linear form `Σ c_p log p`, if it is one.
    pub fn as_linear(&self) -> Option<BTreeMap<u64, BigRational>> {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            match m.0.as_slice() {
                [(p, 1)] => {
                    out.insert(*p, c.clone());
                }
                _ => return None,
            }
        }
        Some(out)
    }

    pub fn scale(&self, c: &BigRational) -> LogPoly {
        if c.is_zero() {
            return LogPoly::zero();
        }
        LogPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Interval enclosure at the given precision.
    pub fn eval(&self, bits: u32) -> Interval {
        let bits = if bits == 0 { DEFAULT_PREC } else { bits };
        let mut acc = Interval::from_i64(0);
        for (m, c) in &self.terms {
            let coeff = Interval::from_rational(c, bits);
            acc = &acc + &(&coeff * &m.eval(bits));
        }
        acc.with_prec(bits)
    }

    /// Exact sign of a homogeneous linear form, by comparing prime powers.
    fn linear_sign(&self) -> Option<Ordering> {
        let lin = self.as_linear()?;
        let l = lin
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut pos = BigInt::one();
        let mut neg = BigInt::one();
        let mut budget: u64 = 0;
        for (p, c) in &lin {
            let e = (c * BigRational::from_integer(l.clone())).to_integer();
            let k: u32 = e.magnitude().try_into().ok()?;
            budget += k as u64 * (64 - p.leading_zeros()) as u64;
            if budget > 1 << 22 {
                return None;
            }
            let pk = BigInt::from(*p).pow(k);
            if e.is_positive() {
                pos *= pk;
            } else {
                neg *= pk;
            }
        }
        Some(pos.cmp(&neg))
    }

    /// Sign of the value; exact zero is recognised symbolically.
    pub fn sign(&self, ctx: &PrecisionContext) -> Result<Ordering> {
        if self.terms.is_empty() {
            return Ok(Ordering::Equal);
        }
        if let Some(q) = self.as_rational() {
            return Ok(q.cmp(&BigRational::zero()));
        }
        if let Some(s) = self.linear_sign() {
            return Ok(s);
        }
        for bits in ctx.levels() {
            if let Some(s) = self.eval(bits).sign() {
                return Ok(s);
            }
        }
        Err(Error::exhausted(ctx.max_bits, format!("sign of {self}")))
    }
}

impl Zero for LogPoly {
    fn zero() -> Self {
        LogPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LogPoly {
    fn one() -> Self {
        LogPoly::from_i64(1)
    }
}

impl Add for &LogPoly {
    type Output = LogPoly;
    fn add(self, rhs: &LogPoly) -> LogPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LogPoly {
    type Output = LogPoly;
    fn sub(self, rhs: &LogPoly) -> LogPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &LogPoly {
    type Output = LogPoly;
    fn mul(self, rhs: &LogPoly) -> LogPoly {
        let mut out = LogPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &LogPoly {
    type Output = LogPoly;
    fn neg(self) -> LogPoly {
        LogPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_ops {
    ($t:ty; $($tr:ident $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_ops!(LogPoly; Add add, Sub sub, Mul mul);

impl Neg for LogPoly {
    type Output = LogPoly;
    fn neg(self) -> LogPoly {
        -&self
    }
}

impl fmt::Display for LogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if m.0.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// A real number known either exactly (as a [`LogPoly`]) or by an enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Real {
    Exact(LogPoly),
    Approx(Interval),
}

impl Real {
    pub fn from_rational(q: BigRational) -> Self {
        Real::Exact(LogPoly::constant(q))
    }

    pub fn from_i64(v: i64) -> Self {
        Real::Exact(LogPoly::from_i64(v))
    }

    /// `log q` for a positive rational.
    pub fn log(q: &BigRational) -> Result<Self> {
        LogPoly::log_of_rational(q).map(Real::Exact)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn as_logpoly(&self) -> Option<&LogPoly> {
        match self {
            Real::Exact(p) => Some(p),
            Real::Approx(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_logpoly().and_then(LogPoly::as_rational)
    }

    /// Interval enclosure; exact values are evaluated at `bits`.
    pub fn to_interval(&self, bits: u32) -> Interval {
        match self {
            Real::Exact(p) => p.eval(bits),
            Real::Approx(iv) => iv.clone(),
        }
    }

    pub fn mid_f64(&self) -> f64 {
        self.to_interval(128).mid_f64()
    }

    /// Sign of the value. Exact values escalate precision as needed; an
    /// enclosure that straddles zero cannot be refined and is reported.
    pub fn sign(&self, ctx: &PrecisionContext) -> Result<Ordering> {
        match self {
            Real::Exact(p) => p.sign(ctx),
            Real::Approx(iv) => iv.sign().ok_or_else(|| {
                Error::exhausted(iv.prec(), format!("sign of enclosure {iv}"))
            }),
        }
    }

    pub fn compare(&self, other: &Real, ctx: &PrecisionContext) -> Result<Ordering> {
        (self - other).sign(ctx)
    }

    pub fn abs(&self, ctx: &PrecisionContext) -> Result<Real> {
        match self {
            Real::Exact(_) => Ok(match self.sign(ctx)? {
                Ordering::Less => -self,
                _ => self.clone(),
            }),
            Real::Approx(iv) => Ok(Real::Approx(iv.abs())),
        }
    }

    /// `max(0, x)`.
    pub fn positive_part(&self, ctx: &PrecisionContext) -> Result<Real> {
        match self {
            Real::Exact(_) => Ok(match self.sign(ctx)? {
                Ordering::Greater => self.clone(),
                _ => Real::zero(),
            }),
            Real::Approx(iv) => Ok(Real::Approx(iv.positive_part())),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Real {
        match self {
            Real::Exact(p) => Real::Exact(p.scale(c)),
            Real::Approx(iv) => {
                Real::Approx(iv * &Interval::from_rational(c, iv.prec().max(DEFAULT_PREC)))
            }
        }
    }

    /// Division; exact when the divisor is a nonzero rational constant.
    pub fn checked_div(&self, other: &Real, bits: u32) -> Option<Real> {
        if let Some(q) = other.as_rational() {
            if q.is_zero() {
                return None;
            }
            return Some(self.scale(&q.recip()));
        }
        let bits = self.working_bits(other, bits);
        self.to_interval(bits)
            .checked_div(&other.to_interval(bits))
            .map(Real::Approx)
    }

    /// Square root; exact only for squares of rationals.
    pub fn sqrt(&self, bits: u32) -> Real {
        if let Some(q) = self.as_rational() {
            if !q.is_negative() {
                let (n, d) = (q.numer(), q.denom());
                let (rn, rd) = (n.sqrt(), d.sqrt());
                if &(&rn * &rn) == n && &(&rd * &rd) == d {
                    return Real::from_rational(BigRational::new(rn, rd));
                }
            }
        }
        Real::Approx(self.to_interval(bits.max(self.prec_hint())).sqrt())
    }

    fn prec_hint(&self) -> u32 {
        match self {
            Real::Exact(_) => 0,
            Real::Approx(iv) => iv.prec(),
        }
    }

    fn working_bits(&self, other: &Real, fallback: u32) -> u32 {
        match self.prec_hint().max(other.prec_hint()) {
            0 if fallback == 0 => DEFAULT_PREC,
            0 => fallback,
            p => p,
        }
    }
}

impl From<LogPoly> for Real {
    fn from(p: LogPoly) -> Self {
        Real::Exact(p)
    }
}

impl From<Interval> for Real {
    fn from(iv: Interval) -> Self {
        Real::Approx(iv)
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        match (self, rhs) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a + b),
            _ => {
                let bits = self.working_bits(rhs, 0);
                Real::Approx(&self.to_interval(bits) + &rhs.to_interval(bits))
            }
        }
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        match (self, rhs) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a - b),
            _ => {
                let bits = self.working_bits(rhs, 0);
                Real::Approx(&self.to_interval(bits) - &rhs.to_interval(bits))
            }
        }
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        match (self, rhs) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a * b),
            _ => {
                let bits = self.working_bits(rhs, 0);
                Real::Approx(&self.to_interval(bits) * &rhs.to_interval(bits))
            }
        }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        match self {
            Real::Exact(p) => Real::Exact(-p),
            Real::Approx(iv) => Real::Approx(-iv),
        }
    }
}

forward_ops!(Real; Add add, Sub sub, Mul mul);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

impl Zero for Real {
    fn zero() -> Self {
        Real::Exact(LogPoly::zero())
    }
    fn is_zero(&self) -> bool {
        match self {
            Real::Exact(p) => p.is_zero(),
            Real::Approx(iv) => iv.is_zero(),
        }
    }
}

impl One for Real {
    fn one() -> Self {
        Real::from_i64(1)
    }
}

impl Scalar for Real {
    fn from_i64(v: i64) -> Self {
        Real::from_i64(v)
    }
}

impl Scalar for LogPoly {
    fn from_i64(v: i64) -> Self {
        LogPoly::from_i64(v)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(p) => write!(f, "{p}"),
            Real::Approx(iv) => write!(f, "{iv}"),
        }
    }
}
