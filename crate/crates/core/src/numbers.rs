//! Elements of the multiplicative group modulo torsion, their place values
//! and the Weil height.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::factor_rational;
use crate::error::{Error, Result};
use crate::interval::{Interval, DEFAULT_PREC};
use crate::logpoly::{LogPoly, Real};
use crate::precision::PrecisionContext;

/// A log-value `log‖α‖_v`, exact or enclosed.
pub type LogValue = Real;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceKind {
    Archimedean,
    Finite(u64),
    /// A place known only by its label (user-declared tables).
    Labeled,
}

/// A place `v` of a number field `k`, with `d_v = [k_v:Q_v]` and `d = [k:Q]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Place {
    label: String,
    kind: PlaceKind,
    local_degree: u32,
    field_degree: u32,
}

impl Place {
    /// Builds a place from its label. Labels `inf…` denote archimedean
    /// places and `p:N…` places above the prime `N`.
    pub fn new(label: &str, local_degree: u32, field_degree: u32) -> Result<Self> {
        let kind = if label.starts_with("inf") {
            PlaceKind::Archimedean
        } else if let Some(rest) = label.strip_prefix("p:") {
            let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
            let p: u64 = digits
                .parse()
                .map_err(|_| Error::invalid(format!("place label {label:?} has no prime")))?;
            if !crate::arith::is_prime_u64(p) {
                return Err(Error::invalid(format!("place label {label:?}: {p} is not prime")));
            }
            PlaceKind::Finite(p)
        } else {
            PlaceKind::Labeled
        };
        if local_degree == 0 || field_degree == 0 || local_degree > field_degree {
            return Err(Error::invalid(format!(
                "place {label:?}: local degree {local_degree} must lie in 1..={field_degree}"
            )));
        }
        if kind == PlaceKind::Archimedean && local_degree > 2 {
            return Err(Error::invalid(format!(
                "archimedean place {label:?} has local degree {local_degree} > 2"
            )));
        }
        Ok(Place {
            label: label.to_string(),
            kind,
            local_degree,
            field_degree,
        })
    }

    /// The archimedean place of Q.
    pub fn infinite() -> Self {
        Place {
            label: "inf".into(),
            kind: PlaceKind::Archimedean,
            local_degree: 1,
            field_degree: 1,
        }
    }

    /// The `p`-adic place of Q.
    pub fn prime(p: u64) -> Self {
        Place {
            label: format!("p:{p}"),
            kind: PlaceKind::Finite(p),
            local_degree: 1,
            field_degree: 1,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &PlaceKind {
        &self.kind
    }

    pub fn local_degree(&self) -> u32 {
        self.local_degree
    }

    pub fn field_degree(&self) -> u32 {
        self.field_degree
    }

    /// The mass `d_v / d` of the fibre of places above `v`.
    pub fn mass(&self) -> PlaceMass {
        PlaceMass(BigRational::new(
            self.local_degree.into(),
            self.field_degree.into(),
        ))
    }

    fn sort_key(&self) -> (u8, u64, &str) {
        match self.kind {
            PlaceKind::Archimedean => (0, 0, &self.label),
            PlaceKind::Finite(p) => (1, p, &self.label),
            PlaceKind::Labeled => (2, 0, &self.label),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then(self.local_degree.cmp(&other.local_degree))
            .then(self.field_degree.cmp(&other.field_degree))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaceMass(pub BigRational);

impl PlaceMass {
    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

/// A coset of torsion in the multiplicative group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupElement {
    /// Rational prime exponents; no zero exponents are stored.
    Factored(BTreeMap<u64, BigRational>),
    /// Log-values at the places of a declared field.
    Tabulated {
        field_degree: u32,
        entries: Vec<(Place, LogValue)>,
    },
}

/// One row of [`element_log_table`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogEntry {
    pub place: Place,
    pub mass: PlaceMass,
    pub value: LogValue,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement::Factored(BTreeMap::new())
    }

    pub fn from_rational(q: &BigRational) -> Result<Self> {
        let f = factor_rational(q)?;
        Ok(GroupElement::Factored(
            f.into_iter()
                .map(|(p, e)| (p, BigRational::from_integer(e.into())))
                .collect(),
        ))
    }

    pub fn from_i64(v: i64) -> Result<Self> {
        GroupElement::from_rational(&BigRational::from_integer(v.into()))
    }

    /// Builds a factored element; keys must be primes.
    pub fn factored(exponents: BTreeMap<u64, BigRational>) -> Result<Self> {
        for p in exponents.keys() {
            if !crate::arith::is_prime_u64(*p) {
                return Err(Error::invalid(format!("exponent key {p} is not a prime")));
            }
        }
        Ok(GroupElement::Factored(
            exponents.into_iter().filter(|(_, e)| !e.is_zero()).collect(),
        ))
    }

    /// Builds a place table and checks the product formula.
    pub fn tabulated(field_degree: u32, entries: Vec<(Place, LogValue)>) -> Result<Self> {
        let e = GroupElement::tabulated_unchecked(field_degree, entries)?;
        let residual = product_formula_residual(&e, &PrecisionContext::default());
        let holds = match &residual {
            Real::Exact(p) => p.is_zero(),
            Real::Approx(iv) => iv.contains_zero(),
        };
        if !holds {
            return Err(Error::invalid(format!(
                "place table violates the product formula: residual {}",
                residual.to_interval(DEFAULT_PREC)
            )));
        }
        Ok(e)
    }

    /// Builds a place table without checking the product formula.
    pub fn tabulated_unchecked(field_degree: u32, entries: Vec<(Place, LogValue)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (place, _) in &entries {
            if place.field_degree != field_degree {
                return Err(Error::invalid(format!(
                    "place {} declares field degree {} instead of {field_degree}",
                    place.label, place.field_degree
                )));
            }
            if !seen.insert(place.label.clone()) {
                return Err(Error::invalid(format!("place {} listed twice", place.label)));
            }
        }
        let mut entries = entries;
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(GroupElement::Tabulated {
            field_degree,
            entries,
        })
    }

    pub fn is_factored(&self) -> bool {
        matches!(self, GroupElement::Factored(_))
    }

    pub fn exponents(&self) -> Option<&BTreeMap<u64, BigRational>> {
        match self {
            GroupElement::Factored(m) => Some(m),
            GroupElement::Tabulated { .. } => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Factored(m) => m.is_empty(),
            GroupElement::Tabulated { entries, .. } => entries.iter().all(|(_, v)| v.is_zero()),
        }
    }

    pub fn inverse(&self) -> Self {
        group_op(&GroupElement::identity_like(self), self, &-BigRational::one())
            .expect("an element is compatible with its own identity")
    }

    /// `self^r`.
    pub fn pow(&self, r: &BigRational) -> Self {
        group_op(&GroupElement::identity_like(self), self, r)
            .expect("an element is compatible with its own identity")
    }

    fn identity_like(e: &GroupElement) -> GroupElement {
        match e {
            GroupElement::Factored(_) => GroupElement::identity(),
            GroupElement::Tabulated {
                field_degree,
                entries,
            } => GroupElement::Tabulated {
                field_degree: *field_degree,
                entries: entries.iter().map(|(p, _)| (p.clone(), Real::zero())).collect(),
            },
        }
    }

    /// The value `Π p^e` when the element is a rational with integer exponents.
    pub fn to_rational(&self) -> Option<BigRational> {
        let m = self.exponents()?;
        let mut q = BigRational::one();
        for (p, e) in m {
            if !e.is_integer() {
                return None;
            }
            let k: i64 = e.to_integer().try_into().ok()?;
            q *= crate::arith::prime_power(*p, k);
        }
        Some(q)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Factored(m) if m.is_empty() => write!(f, "1"),
            GroupElement::Factored(m) => {
                let parts: Vec<String> = m
                    .iter()
                    .map(|(p, e)| {
                        if e.is_one() {
                            format!("{p}")
                        } else {
                            format!("{p}^({e})")
                        }
                    })
                    .collect();
                write!(f, "{}", parts.join("*"))
            }
            GroupElement::Tabulated { entries, .. } => {
                let parts: Vec<String> =
                    entries.iter().map(|(p, v)| format!("{p}: {v}")).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

/// Parses a rational literal: an integer, a fraction `a/b` or a decimal.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::invalid(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::invalid(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (q, _) = parse_decimal(t).ok_or_else(bad)?;
    Ok(q)
}

// Returns the value and the number of fractional digits.
fn parse_decimal(t: &str) -> Option<(BigRational, u32)> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let d = BigInt::from(10u32).pow(frac.len() as u32);
    let q = BigRational::new(if neg { -n } else { n }, d);
    Some((q, frac.len() as u32))
}

/// Parses a log-value.
///
/// Accepted forms: a rational (`"1/2"`, exact), `log:q` or `c*log:q` with an
/// optional leading sign (exact), and decimals (`"0.3465"`, optionally
/// followed by `...`) which denote the enclosure `x ± 10^-k` for `k`
/// fractional digits.
pub fn parse_log_value(text: &str) -> Result<LogValue> {
    let t = text.trim();
    if t.contains("log:") {
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, t.strip_prefix('+').unwrap_or(t).trim()),
        };
        let (coeff, arg) = match body.split_once("log:") {
            Some((c, a)) => (c.trim().trim_end_matches('*').trim(), a.trim()),
            None => unreachable!(),
        };
        let c = if coeff.is_empty() { BigRational::one() } else { parse_rational(coeff)? };
        let c = if neg { -c } else { c };
        let q = parse_rational(arg)?;
        if !q.is_positive() {
            return Err(Error::invalid(format!("log of non-positive value in {text:?}")));
        }
        return Ok(Real::Exact(LogPoly::log_of_rational(&q)?.scale(&c)));
    }
    let stripped = t.trim_end_matches("...");
    if stripped.contains('.') {
        let (q, k) = parse_decimal(stripped)
            .ok_or_else(|| Error::invalid(format!("not a log-value: {text:?}")))?;
        let radius = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(k));
        return Ok(Real::Approx(Interval::from_center_radius(&q, &radius, DEFAULT_PREC)));
    }
    Ok(Real::from_rational(parse_rational(t)?))
}

/// Parses a rational literal into a group element (signs are dropped).
pub fn parse_element(text: &str) -> Result<GroupElement> {
    let q = parse_rational(text)?;
    GroupElement::from_rational(&q)
}

/// Places where the element has a nonzero log-value, with masses and values.
pub fn element_log_table(e: &GroupElement, _ctx: &PrecisionContext) -> Vec<LogEntry> {
    match e {
        GroupElement::Factored(m) => {
            if m.is_empty() {
                return Vec::new();
            }
            let arch = m
                .iter()
                .fold(LogPoly::zero(), |acc, (p, x)| acc + LogPoly::log_prime(*p, x.clone()));
            let mut out = vec![LogEntry {
                place: Place::infinite(),
                mass: Place::infinite().mass(),
                value: Real::Exact(arch),
            }];
            for (p, x) in m {
                let place = Place::prime(*p);
                out.push(LogEntry {
                    mass: place.mass(),
                    place,
                    value: Real::Exact(LogPoly::log_prime(*p, -x)),
                });
            }
            out
        }
        GroupElement::Tabulated { entries, .. } => entries
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(place, v)| LogEntry {
                place: place.clone(),
                mass: place.mass(),
                value: v.clone(),
            })
            .collect(),
    }
}

/// `h(α) = Σ_v mass(v)·max(0, log‖α‖_v)`.
pub fn weil_height(e: &GroupElement, ctx: &PrecisionContext) -> Result<Real> {
    let mut h = Real::zero();
    for entry in element_log_table(e, ctx) {
        h = h + entry.value.positive_part(ctx)?.scale(entry.mass.value());
    }
    Ok(h)
}

/// `Σ_v mass(v)·|log‖α‖_v|`, which equals `2h(α)`.
pub fn total_variation(e: &GroupElement, ctx: &PrecisionContext) -> Result<Real> {
    let mut s = Real::zero();
    for entry in element_log_table(e, ctx) {
        s = s + entry.value.abs(ctx)?.scale(entry.mass.value());
    }
    Ok(s)
}

/// `a · b^r`.
pub fn group_op(a: &GroupElement, b: &GroupElement, r: &BigRational) -> Result<GroupElement> {
    match (a, b) {
        (GroupElement::Factored(x), GroupElement::Factored(y)) => {
            let mut out = x.clone();
            for (p, e) in y {
                let slot = out.entry(*p).or_insert_with(BigRational::zero);
                *slot += e * r;
            }
            out.retain(|_, e| !e.is_zero());
            Ok(GroupElement::Factored(out))
        }
        (
            GroupElement::Tabulated {
                field_degree: da,
                entries: ea,
            },
            GroupElement::Tabulated {
                field_degree: db,
                entries: eb,
            },
        ) => {
            let la: Vec<&Place> = ea.iter().map(|(p, _)| p).collect();
            let lb: Vec<&Place> = eb.iter().map(|(p, _)| p).collect();
            if da != db || la != lb {
                return Err(Error::Incompatible(
                    "place tables over different place lists".into(),
                ));
            }
            let entries = ea
                .iter()
                .zip(eb)
                .map(|((p, va), (_, vb))| (p.clone(), va + &vb.scale(r)))
                .collect();
            Ok(GroupElement::Tabulated {
                field_degree: *da,
                entries,
            })
        }
        _ => Err(Error::Incompatible(
            "cannot combine a factored element with a place table".into(),
        )),
    }
}

/// `Σ_v mass(v)·log‖α‖_v`; exactly zero for factored elements.
pub fn product_formula_residual(e: &GroupElement, ctx: &PrecisionContext) -> Real {
    element_log_table(e, ctx)
        .into_iter()
        .fold(Real::zero(), |acc, entry| acc + entry.value.scale(entry.mass.value()))
}
