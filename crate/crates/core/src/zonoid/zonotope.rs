use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::{rat, ExactMatrix, RatMatrix};
use crate::error::{Error, Result};
use crate::logpoly::Real;
use crate::precision::PrecisionContext;

/// The zonotope `Σ_m [−v_m, v_m]` in `R^N`; segments are the columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZonotopeSpec {
    segments: ExactMatrix,
}

impl ZonotopeSpec {
    pub fn new(segments: ExactMatrix) -> Result<Self> {
        if segments.rows() == 0 {
            return Err(Error::invalid("zonotope dimension must be at least 1"));
        }
        Ok(ZonotopeSpec { segments })
    }

    pub fn from_rational(segments: &RatMatrix) -> Result<Self> {
        ZonotopeSpec::new(super::real_matrix(segments))
    }

    pub fn dim(&self) -> usize {
        self.segments.rows()
    }

    pub fn segments(&self) -> &ExactMatrix {
        &self.segments
    }

    /// Segment endpoints as `f64` (enclosure midpoints).
    pub fn segments_f64(&self) -> crate::matrix::Matrix<f64> {
        self.segments.map(|x| x.mid_f64())
    }
}

/// McMullen's formula `Vol = 2^N·Σ_{|I|=N} |det V_I|`.
pub fn mcmullen_volume(z: &ZonotopeSpec, ctx: &PrecisionContext) -> Result<Real> {
    let v = &z.segments;
    let (n, m) = (v.rows(), v.cols());
    if m > ctx.max_atoms {
        return Err(Error::DimensionTooLarge { dim: m, limit: ctx.max_atoms });
    }
    let subsets: Vec<Vec<usize>> = (0..m).combinations(n).collect();
    let terms: Vec<Real> = subsets
        .par_iter()
        .map(|cols| v.select_cols(cols).det_subsets()?.abs(ctx))
        .collect::<Result<_>>()?;
    let sum = terms.into_iter().fold(Real::zero(), |acc, t| acc + t);
    Ok(sum.scale(&rat(BigInt::from(2).pow(n as u32))))
}

/// `δ(ξ) = Σ_m w_m·|⟨ξ, u_m⟩|` for the rows `u_m` of `U` (`M×N`).
pub fn l1_pullback_norm(
    u: &ExactMatrix,
    weights: Option<&[BigRational]>,
    xi: &[BigRational],
    ctx: &PrecisionContext,
) -> Result<Real> {
    if xi.len() != u.cols() {
        return Err(Error::invalid(format!(
            "vector of length {} for a norm on R^{}",
            xi.len(),
            u.cols()
        )));
    }
    if let Some(w) = weights {
        if w.len() != u.rows() {
            return Err(Error::invalid("one weight per row is required"));
        }
    }
    let mut total = Real::zero();
    for m in 0..u.rows() {
        let mut dot = Real::zero();
        for (l, x) in xi.iter().enumerate() {
            if !x.is_zero() {
                dot = dot + u.get(m, l).scale(x);
            }
        }
        let term = dot.abs(ctx)?;
        total = total
            + match weights {
                Some(w) => term.scale(&w[m]),
                None => term,
            };
    }
    Ok(total)
}
