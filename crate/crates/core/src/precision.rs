//! Working precision and the escalation policy.

use crate::error::{Error, Result};

/// Working precision for interval evaluation.
///
/// Computations run at `bits`; when a sign or comparison cannot be decided
/// they are retried at doubled precision until `max_bits` is exceeded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    pub bits: u32,
    pub max_bits: u32,
    /// Upper bound on lattice points visited by exhaustive enumerations.
    pub enumeration_limit: u64,
    /// Largest atom count accepted by determinant subset sums.
    pub max_atoms: usize,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            bits: 256,
            max_bits: 4096,
            enumeration_limit: 2_000_000,
            max_atoms: 16,
        }
    }
}

impl PrecisionContext {
    pub fn new(bits: u32, max_bits: u32) -> Result<Self> {
        if bits == 0 || bits > max_bits {
            return Err(Error::invalid(format!(
                "precision {bits} must be positive and at most max precision {max_bits}"
            )));
        }
        Ok(PrecisionContext {
            bits,
            max_bits,
            ..PrecisionContext::default()
        })
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        PrecisionContext { bits, ..*self }
    }

    /// Precision levels visited by escalation: `bits, 2·bits, …, ≤ max_bits`.
    pub fn levels(&self) -> impl Iterator<Item = u32> {
        let max = self.max_bits;
        std::iter::successors(Some(self.bits), move |&b| b.checked_mul(2).filter(|&n| n <= max))
    }

    /// Runs `f` at increasing precision while it reports exhausted precision.
    pub fn escalate<T>(&self, mut f: impl FnMut(&PrecisionContext) -> Result<T>) -> Result<T> {
        let mut last = None;
        for bits in self.levels() {
            match f(&self.with_bits(bits)) {
                Err(Error::PrecisionExhausted { what, .. }) => last = Some(what),
                other => return other,
            }
        }
        Err(Error::exhausted(
            self.max_bits,
            last.unwrap_or_else(|| "no precision level available".into()),
        ))
    }
}
