//! Certified comparisons and self-contained inequality records.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Result;
use crate::interval::Interval;
use crate::logpoly::Real;
use crate::precision::PrecisionContext;

/// Outcome of checking `lhs ≤ rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `lhs < rhs`, decided exactly or by disjoint enclosures.
    Strict,
    /// `lhs = rhs`, decided exactly.
    Equal,
    /// Enclosures overlap within the tightness tolerance; only reachable
    /// when one side is known by an enclosure alone.
    Tight,
    /// `lhs > rhs`.
    Fails,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self != Verdict::Fails
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Strict => "strict",
            Verdict::Equal => "equal",
            Verdict::Tight => "tight",
            Verdict::Fails => "fails",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Relative width below which overlapping enclosures count as [`Verdict::Tight`].
pub const TIGHT_TOLERANCE: f64 = 1e-20;

/// Decides `lhs ≤ rhs`.
///
/// Exact operands are compared exactly (with precision escalation for the
/// sign). When an enclosure is involved and the difference straddles zero,
/// the verdict is `Tight` if the enclosure is narrower than
/// [`TIGHT_TOLERANCE`] relative to `max(1, |rhs|)`, and a precision error
/// otherwise.
pub fn certify_le(lhs: &Real, rhs: &Real, ctx: &PrecisionContext) -> Result<Verdict> {
    let diff = rhs - lhs;
    if diff.is_exact() {
        return Ok(match diff.sign(ctx)? {
            Ordering::Greater => Verdict::Strict,
            Ordering::Equal => Verdict::Equal,
            Ordering::Less => Verdict::Fails,
        });
    }
    let iv = diff.to_interval(ctx.bits);
    match iv.sign() {
        Some(Ordering::Greater) => Ok(Verdict::Strict),
        Some(Ordering::Less) => Ok(Verdict::Fails),
        _ => {
            let scale = rhs.to_interval(ctx.bits).abs().hi().to_f64().max(1.0);
            if iv.width_f64() <= TIGHT_TOLERANCE * scale {
                Ok(Verdict::Tight)
            } else {
                Err(crate::error::Error::exhausted(
                    ctx.bits,
                    format!("cannot order {} and {}", lhs.to_interval(ctx.bits), rhs.to_interval(ctx.bits)),
                ))
            }
        }
    }
}

/// Whether two values agree: exactly when both are exact, by overlap otherwise.
pub fn agree(a: &Real, b: &Real, bits: u32) -> bool {
    match (a, b) {
        (Real::Exact(x), Real::Exact(y)) => x == y,
        _ => a.to_interval(bits).overlaps(&b.to_interval(bits)),
    }
}

/// A checked inequality `lhs ≤ rhs` with its witnesses.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub name: String,
    pub lhs_label: String,
    pub rhs_label: String,
    pub lhs: Interval,
    pub rhs: Interval,
    pub verdict: Verdict,
    pub bits: u32,
    /// Named witness data (exact integers, vectors, auxiliary values).
    pub witnesses: Vec<(String, String)>,
}

impl Certificate {
    pub fn check(
        name: &str,
        lhs_label: &str,
        lhs: &Real,
        rhs_label: &str,
        rhs: &Real,
        ctx: &PrecisionContext,
    ) -> Result<Certificate> {
        let verdict = certify_le(lhs, rhs, ctx)?;
        Ok(Certificate {
            name: name.to_string(),
            lhs_label: lhs_label.to_string(),
            rhs_label: rhs_label.to_string(),
            lhs: lhs.to_interval(ctx.bits),
            rhs: rhs.to_interval(ctx.bits),
            verdict,
            bits: ctx.bits,
            witnesses: Vec::new(),
        })
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.witnesses.push((key.to_string(), value.to_string()));
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} {}: {} = {} <= {} = {} ({})",
            self.verdict,
            self.name,
            self.lhs_label,
            self.lhs.mid_decimal(12),
            self.rhs_label,
            self.rhs.mid_decimal(12),
            self.verdict.label()
        )?;
        for (k, v) in &self.witnesses {
            writeln!(f, "  {k}: {v}")?;
        }
        Ok(())
    }
}
