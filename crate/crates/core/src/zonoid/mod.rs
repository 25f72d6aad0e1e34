//! Finite atomic systems of step functions, the determinant integral and
//! zonotope volumes.

mod monte_carlo;
mod primal;
mod zonotope;

pub use monte_carlo::{monte_carlo_primal_ball, monte_carlo_zonotope, VolumeEstimate};
pub use primal::primal_ball_volume_exact;
pub use zonotope::{l1_pullback_norm, mcmullen_volume, ZonotopeSpec};

use std::cmp::Ordering;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::certificate::{certify_le, Verdict};
use crate::error::{Error, Result};
use crate::intlinalg::IntMatrix;
use crate::logpoly::Real;
use crate::matrix::Matrix;
use crate::precision::PrecisionContext;

pub type RatMatrix = Matrix<BigRational>;
pub type ExactMatrix = Matrix<Real>;

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub(crate) fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Lifts a rational matrix to exact reals.
pub fn real_matrix(m: &RatMatrix) -> ExactMatrix {
    m.map(|q| Real::from_rational(q.clone()))
}

/// `N` step functions `F_l = Σ_m a_{lm}·1_{E_m}` on atoms of mass `ν(E_m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleSystem {
    masses: Vec<BigRational>,
    coeffs: ExactMatrix,
}

impl SimpleSystem {
    /// Canonical form: zero-mass atoms and all-zero columns are removed
    /// (duplicates are kept) and rank `N` is certified by a nonzero minor.
    pub fn build(masses: Vec<BigRational>, coeffs: ExactMatrix, ctx: &PrecisionContext) -> Result<Self> {
        let s = SimpleSystem::cleaned(masses, coeffs)?;
        let n = s.n_funcs();
        let found = certified_rank(&s.coeffs, ctx)?;
        if found < n {
            return Err(Error::RankDeficient { expected: n, found });
        }
        Ok(s)
    }

    /// Builds a system with rational coefficients.
    pub fn from_rational(masses: Vec<BigRational>, coeffs: &RatMatrix, ctx: &PrecisionContext) -> Result<Self> {
        SimpleSystem::build(masses, real_matrix(coeffs), ctx)
    }

    /// Keeps atoms exactly as given and skips the rank check. Used for
    /// perturbation pairs, which must share their atoms.
    pub fn raw(masses: Vec<BigRational>, coeffs: ExactMatrix) -> Result<Self> {
        if masses.len() != coeffs.cols() {
            return Err(Error::invalid(format!(
                "{} masses for {} atoms",
                masses.len(),
                coeffs.cols()
            )));
        }
        if let Some(m) = masses.iter().find(|m| !m.is_positive()) {
            return Err(Error::invalid(format!("atom mass {m} is not positive")));
        }
        if coeffs.rows() == 0 {
            return Err(Error::invalid("a system needs at least one function"));
        }
        Ok(SimpleSystem { masses, coeffs })
    }

    fn cleaned(masses: Vec<BigRational>, coeffs: ExactMatrix) -> Result<Self> {
        if masses.len() != coeffs.cols() {
            return Err(Error::invalid(format!(
                "{} masses for {} atoms",
                masses.len(),
                coeffs.cols()
            )));
        }
        if let Some(m) = masses.iter().find(|m| m.is_negative()) {
            return Err(Error::invalid(format!("atom mass {m} is negative")));
        }
        if coeffs.rows() == 0 {
            return Err(Error::invalid("a system needs at least one function"));
        }
        let keep: Vec<usize> = (0..coeffs.cols())
            .filter(|&m| !masses[m].is_zero() && coeffs.col(m).iter().any(|x| !x.is_zero()))
            .collect();
        Ok(SimpleSystem {
            masses: keep.iter().map(|&m| masses[m].clone()).collect(),
            coeffs: coeffs.select_cols(&keep),
        })
    }

    pub fn n_funcs(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn n_atoms(&self) -> usize {
        self.coeffs.cols()
    }

    pub fn masses(&self) -> &[BigRational] {
        &self.masses
    }

    pub fn coeffs(&self) -> &ExactMatrix {
        &self.coeffs
    }

    /// Rational coefficients, when every entry is a rational constant.
    pub fn rational_coeffs(&self) -> Option<RatMatrix> {
        self.coeffs
            .try_map(|x| x.as_rational().ok_or_else(|| Error::invalid("not rational")))
            .ok()
    }

    /// `D = (a_{lm}·ν(E_m))`, the segments of the dual zonotope.
    pub fn weighted(&self) -> ExactMatrix {
        Matrix::from_fn(self.n_funcs(), self.n_atoms(), |l, m| {
            self.coeffs.get(l, m).scale(&self.masses[m])
        })
    }

    /// The system of functions `H_k = Σ_l g_{kl} F_l`.
    pub fn transform(&self, g: &IntMatrix, ctx: &PrecisionContext) -> Result<SimpleSystem> {
        let gr = g.map(|x| Real::from_rational(rat(x.clone())));
        SimpleSystem::build(self.masses.clone(), gr.mul(&self.coeffs)?, ctx)
    }

    /// `‖F_l‖₁ = Σ_m ν(E_m)·|a_{lm}|` for each function.
    pub fn l1_norms(&self, ctx: &PrecisionContext) -> Result<Vec<Real>> {
        (0..self.n_funcs())
            .map(|l| {
                let mut s = Real::zero();
                for m in 0..self.n_atoms() {
                    s = s + self.coeffs.get(l, m).abs(ctx)?.scale(&self.masses[m]);
                }
                Ok(s)
            })
            .collect()
    }

    /// `δ(ξ) = Σ_m ν(E_m)·|Σ_l ξ_l a_{lm}|` for an integer vector.
    pub fn norm(&self, xi: &[BigInt], ctx: &PrecisionContext) -> Result<Real> {
        let q: Vec<BigRational> = xi.iter().map(|x| rat(x.clone())).collect();
        l1_pullback_norm(&self.coeffs.transpose(), Some(&self.masses), &q, ctx)
    }

    /// Whether every atom carries at most one nonzero coefficient.
    pub fn has_disjoint_support(&self) -> bool {
        (0..self.n_atoms()).all(|m| self.coeffs.col(m).iter().filter(|x| !x.is_zero()).count() <= 1)
    }
}

/// Largest `k ≤ rows` with a certified nonzero `k×k` minor.
pub fn certified_rank(a: &ExactMatrix, ctx: &PrecisionContext) -> Result<usize> {
    let (n, m) = (a.rows(), a.cols());
    if let Ok(r) = a.try_map(|x| x.as_rational().ok_or_else(|| Error::invalid("not rational"))) {
        return Ok(r.rank_exact().0);
    }
    for k in (1..=n.min(m)).rev() {
        let mut undecided = false;
        for rows in (0..n).combinations(k) {
            let sub = a.select_rows(&rows);
            for cols in (0..m).combinations(k) {
                let d = sub.select_cols(&cols).det_subsets()?;
                match d.sign(ctx) {
                    Ok(Ordering::Equal) => {}
                    Ok(_) => return Ok(k),
                    Err(Error::PrecisionExhausted { .. }) => undecided = true,
                    Err(e) => return Err(e),
                }
            }
        }
        if undecided {
            return Err(Error::exhausted(ctx.max_bits, "rank certification"));
        }
    }
    Ok(0)
}

fn abs_det(m: &ExactMatrix, ctx: &PrecisionContext) -> Result<Real> {
    m.det_subsets()?.abs(ctx)
}

/// `∫|Δ(F_1,…,F_N)| = N!·Σ_{|I|=N} |det A_I|·Π_{m∈I} ν(E_m)`.
pub fn delta_integral(s: &SimpleSystem, ctx: &PrecisionContext) -> Result<Real> {
    delta_integral_raw(&s.masses, &s.coeffs, ctx)
}

fn delta_integral_raw(masses: &[BigRational], a: &ExactMatrix, ctx: &PrecisionContext) -> Result<Real> {
    let (n, m) = (a.rows(), a.cols());
    if m > ctx.max_atoms {
        return Err(Error::DimensionTooLarge { dim: m, limit: ctx.max_atoms });
    }
    let subsets: Vec<Vec<usize>> = (0..m).combinations(n).collect();
    let rational = a
        .try_map(|x| x.as_rational().ok_or_else(|| Error::invalid("not rational")))
        .ok();
    let terms: Vec<Real> = match rational {
        Some(r) => {
            let sum: BigRational = subsets
                .par_iter()
                .map(|cols| {
                    let d = r.select_cols(cols).det_gauss().expect("square");
                    let w = cols.iter().fold(BigRational::one(), |acc, &c| acc * &masses[c]);
                    d.abs() * w
                })
                .reduce(BigRational::zero, |x, y| x + y);
            vec![Real::from_rational(sum)]
        }
        None => subsets
            .par_iter()
            .map(|cols| {
                let w = cols.iter().fold(BigRational::one(), |acc, &c| acc * &masses[c]);
                Ok(abs_det(&a.select_cols(cols), ctx)?.scale(&w))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let total = terms.into_iter().fold(Real::zero(), |acc, t| acc + t);
    Ok(total.scale(&rat(factorial(n))))
}

/// Volume of the zonoid `B*`: `(2^N/N!)·∫|Δ|`.
pub fn zonoid_volume(s: &SimpleSystem, ctx: &PrecisionContext) -> Result<Real> {
    let n = s.n_funcs();
    let c = BigRational::new(BigInt::from(2).pow(n as u32), factorial(n));
    Ok(delta_integral(s, ctx)?.scale(&c))
}

/// `N!·Π_l ‖F_l‖₁`, an upper bound for `∫|Δ|`, attained for disjoint supports.
pub fn hadamard_bound(s: &SimpleSystem, ctx: &PrecisionContext) -> Result<Real> {
    let norms = s.l1_norms(ctx)?;
    let prod = norms.iter().fold(Real::one(), |acc, x| &acc * x);
    Ok(prod.scale(&rat(factorial(s.n_funcs()))))
}

/// Both sides of the perturbation estimate for `∫|Δ|`.
#[derive(Clone, Debug)]
pub struct PerturbationReport {
    /// `|∫|Δ_s| − ∫|Δ_t||`.
    pub gap: Real,
    /// `N!·C₁^{N−1}·Σ_l ‖F_l − G_l‖₁`.
    pub bound: Real,
    /// Largest of the `2N` L1 norms.
    pub c1: Real,
    pub verdict: Verdict,
}

/// Compares two systems over the same atoms.
pub fn perturbation_gap_bound(s: &SimpleSystem, t: &SimpleSystem, ctx: &PrecisionContext) -> Result<PerturbationReport> {
    if s.n_funcs() != t.n_funcs() || s.masses != t.masses {
        return Err(Error::Incompatible(
            "perturbation pairs need the same functions count and the same atoms".into(),
        ));
    }
    let n = s.n_funcs();
    let ds = delta_integral_raw(&s.masses, &s.coeffs, ctx)?;
    let dt = delta_integral_raw(&t.masses, &t.coeffs, ctx)?;
    let gap = (&ds - &dt).abs(ctx)?;
    let mut c1: Option<Real> = None;
    for x in s.l1_norms(ctx)?.into_iter().chain(t.l1_norms(ctx)?) {
        c1 = Some(match c1 {
            None => x,
            Some(cur) => {
                if x.compare(&cur, ctx)? == Ordering::Greater {
                    x
                } else {
                    cur
                }
            }
        });
    }
    let c1 = c1.unwrap_or_else(Real::zero);
    let diff = SimpleSystem {
        masses: s.masses.clone(),
        coeffs: Matrix::from_fn(n, s.n_atoms(), |l, m| s.coeffs.get(l, m) - t.coeffs.get(l, m)),
    };
    let dsum = diff.l1_norms(ctx)?.into_iter().fold(Real::zero(), |acc, x| acc + x);
    let mut pow = Real::one();
    for _ in 1..n {
        pow = &pow * &c1;
    }
    let bound = (&pow * &dsum).scale(&rat(factorial(n)));
    let verdict = certify_le(&gap, &bound, ctx)?;
    Ok(PerturbationReport { gap, bound, c1, verdict })
}
