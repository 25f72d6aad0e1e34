//! Successive minima of the norm `δ(ξ) = ‖Σ_l ξ_l F_l‖₁` on `Z^N`.

use std::cmp::Ordering;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::certificate::{certify_le, Certificate, Verdict};
use crate::error::{Error, Result};
use crate::intlinalg::{lll_gram, IntMatrix};
use crate::logpoly::Real;
use crate::matrix::Matrix;
use crate::precision::PrecisionContext;
use crate::zonoid::{delta_integral, factorial, primal_ball_volume_exact, zonoid_volume, SimpleSystem};

/// Largest dimension handled by exhaustive enumeration.
pub const MAX_EXHAUSTIVE_DIM: usize = 6;

/// Independent lattice vectors `b_n` with norms `μ_n = δ(b_n)`.
#[derive(Clone, Debug)]
pub struct MinimaResult {
    pub vectors: Vec<Vec<BigInt>>,
    pub norms: Vec<Real>,
    /// Whether the norms are the true successive minima. When false they
    /// are the norms of a reduced basis, an upper bound for each minimum.
    pub exhaustive: bool,
    /// `|det(b_1,…,b_N)|`.
    pub index: BigInt,
}

impl MinimaResult {
    pub fn product(&self) -> Real {
        self.norms.iter().fold(Real::one(), |acc, x| &acc * x)
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        let n = self.vectors.len();
        IntMatrix::from_cols(n, &self.vectors).expect("square")
    }
}

/// Comparison that treats indistinguishable enclosures as ties.
fn compare(a: &Real, b: &Real, ctx: &PrecisionContext) -> Result<Ordering> {
    match a.compare(b, ctx) {
        Err(Error::PrecisionExhausted { .. }) if !(a.is_exact() && b.is_exact()) => Ok(Ordering::Equal),
        r => r,
    }
}

fn upper_f64(x: &Real, bits: u32) -> f64 {
    let v = x.to_interval(bits).abs().hi().to_f64();
    v * (1.0 + 1e-12) + f64::MIN_POSITIVE
}

fn lower_f64(x: &Real, bits: u32) -> f64 {
    let v = x.to_interval(bits).abs().lo().to_f64();
    (v * (1.0 - 1e-12)).max(0.0)
}

/// Per-coordinate constants `c_i` with `|ξ_i| ≤ c_i·δ(ξ)`.
///
/// For any invertible `N×N` block `D_I` of the weighted coefficients,
/// `δ(ξ) ≥ ‖D_Iᵀξ‖₁`, so `|ξ_i| ≤ max_j |(D_Iᵀ)^{-1}_{ij}|·δ(ξ)`; the
/// inverse entries are bounded through certified cofactors and determinant.
fn coordinate_bounds(d: &Matrix<Real>, ctx: &PrecisionContext) -> Result<Vec<f64>> {
    let (n, m) = (d.rows(), d.cols());
    let mut best = vec![f64::INFINITY; n];
    for cols in (0..m).combinations(n) {
        let b = d.select_cols(&cols);
        let det = b.det_subsets()?.to_interval(ctx.bits);
        if det.contains_zero() {
            continue;
        }
        let det_lo = lower_f64(&Real::Approx(det), ctx.bits);
        if det_lo <= 0.0 {
            continue;
        }
        for (i, slot) in best.iter_mut().enumerate() {
            let mut worst = 0f64;
            for j in 0..n {
                let cof = if n == 1 {
                    Real::one()
                } else {
                    let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
                    let cs: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                    b.select_rows(&rows).select_cols(&cs).det_subsets()?
                };
                worst = worst.max(upper_f64(&cof, ctx.bits));
            }
            *slot = slot.min(worst / det_lo * (1.0 + 1e-12));
        }
    }
    if best.iter().any(|c| !c.is_finite()) {
        return Err(Error::exhausted(ctx.bits, "no certified invertible block for the enumeration box"));
    }
    Ok(best)
}

fn to_bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Incremental exact independence test.
struct Echelon {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl Echelon {
    fn reduce(&self, v: &[i64]) -> Vec<BigRational> {
        let mut r: Vec<BigRational> = v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        for (p, row) in &self.rows {
            if r[*p].is_zero() {
                continue;
            }
            let f = r[*p].clone() / &row[*p];
            for (x, y) in r.iter_mut().zip(row) {
                *x -= &f * y;
            }
        }
        r
    }

    fn independent(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().any(|x| !x.is_zero())
    }

    fn push(&mut self, v: &[i64]) {
        let r = self.reduce(v);
        let p = r.iter().position(|x| !x.is_zero()).expect("independent vector");
        self.rows.push((p, r));
    }
}

struct Candidate {
    approx: f64,
    err: f64,
    xi: Vec<i64>,
}

/// Successive minima of `δ` on `Z^N`.
///
/// All lattice points in a certified box that provably contains every vector
/// of norm at most `μ_N` are enumerated; `b_n` is then the shortest vector
/// independent of `b_1,…,b_{n−1}`, ties going to the lexicographically
/// smallest vector with first nonzero entry positive. Above
/// [`MAX_EXHAUSTIVE_DIM`] or the enumeration limit an LLL basis is returned
/// with `exhaustive = false`.
pub fn successive_minima(s: &SimpleSystem, ctx: &PrecisionContext) -> Result<MinimaResult> {
    let n = s.n_funcs();
    let d = s.weighted();
    let df = d.map(|x| x.mid_f64());
    let gram = df.mul(&df.transpose())?;
    let lll = lll_gram(&gram, &0.99f64);
    let reduced: Vec<Vec<BigInt>> = lll.to_cols();
    if n > MAX_EXHAUSTIVE_DIM {
        return fallback(s, reduced, ctx);
    }

    let mut mu_cand = f64::INFINITY;
    for basis in [reduced.clone(), IntMatrix::identity(n).to_cols()] {
        let mut worst = 0f64;
        for v in &basis {
            worst = worst.max(upper_f64(&s.norm(v, ctx)?, ctx.bits));
        }
        mu_cand = mu_cand.min(worst);
    }
    let c = coordinate_bounds(&d, ctx)?;
    let radii: Vec<i64> = c.iter().map(|ci| (ci * mu_cand).floor() as i64).collect();
    let count = radii.iter().fold(1f64, |acc, r| acc * (2 * r + 1) as f64);
    if count > ctx.enumeration_limit as f64 {
        return fallback(s, reduced, ctx);
    }

    let widths: Vec<f64> = (0..n)
        .map(|l| (0..d.cols()).map(|m| d.get(l, m).to_interval(ctx.bits).width_f64()).sum())
        .collect();
    let mut candidates: Vec<Candidate> = (-radii[0]..=radii[0])
        .into_par_iter()
        .flat_map_iter(|x0| {
            let mut out = Vec::new();
            let mut xi: Vec<i64> = radii.iter().map(|r| -r).collect();
            xi[0] = x0;
            loop {
                let canonical = matches!(xi.iter().find(|&&x| x != 0), Some(&first) if first > 0);
                if !canonical {
                    if !advance(&mut xi[1..], &radii[1..]) {
                        break;
                    }
                    continue;
                }
                let mut approx = 0f64;
                let mut scale = 0f64;
                for m in 0..df.cols() {
                    let mut dot = 0f64;
                    for l in 0..n {
                        let t = xi[l] as f64 * df.get(l, m);
                        dot += t;
                        scale += t.abs();
                    }
                    approx += dot.abs();
                }
                let spread: f64 = xi.iter().zip(&widths).map(|(x, w)| x.abs() as f64 * w).sum();
                let err = 1e-10 * (scale + 1.0) + spread;
                if approx - err <= mu_cand {
                    out.push(Candidate { approx, err, xi: xi.clone() });
                }
                if !advance(&mut xi[1..], &radii[1..]) {
                    break;
                }
            }
            out
        })
        .collect();
    candidates.sort_by(|a, b| a.approx.total_cmp(&b.approx).then_with(|| a.xi.cmp(&b.xi)));
    let max_err = candidates.iter().fold(0f64, |acc, c| acc.max(c.err));

    let mut basis = Echelon { rows: Vec::new() };
    let mut used = vec![false; candidates.len()];
    let mut vectors = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    let mut cursor = 0;
    for _ in 0..n {
        while cursor < candidates.len() && (used[cursor] || !basis.independent(&candidates[cursor].xi)) {
            cursor += 1;
        }
        if cursor == candidates.len() {
            return Err(Error::Verification("enumeration box missed an independent vector".into()));
        }
        let mut ceiling = candidates[cursor].approx + candidates[cursor].err;
        let mut contenders = Vec::new();
        for (j, cand) in candidates.iter().enumerate().skip(cursor) {
            if cand.approx - max_err > ceiling {
                break;
            }
            if used[j] || cand.approx - cand.err > ceiling || !basis.independent(&cand.xi) {
                continue;
            }
            ceiling = ceiling.min(cand.approx + cand.err);
            contenders.push(j);
        }
        let mut best: Option<(usize, Real)> = None;
        for j in contenders {
            let norm = s.norm(&to_bigints(&candidates[j].xi), ctx)?;
            let better = match &best {
                None => true,
                Some((k, b)) => match compare(&norm, b, ctx)? {
                    Ordering::Less => true,
                    Ordering::Equal => candidates[j].xi < candidates[*k].xi,
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((j, norm));
            }
        }
        let (j, norm) = best.expect("at least one contender");
        used[j] = true;
        basis.push(&candidates[j].xi);
        vectors.push(to_bigints(&candidates[j].xi));
        norms.push(norm);
    }
    finish(vectors, norms, true)
}

fn finish(vectors: Vec<Vec<BigInt>>, norms: Vec<Real>, exhaustive: bool) -> Result<MinimaResult> {
    let n = vectors.len();
    let index = IntMatrix::from_cols(n, &vectors)?.det_bareiss()?.abs();
    if index.is_zero() {
        return Err(Error::Verification("minima vectors are dependent".into()));
    }
    Ok(MinimaResult { vectors, norms, exhaustive, index })
}

fn canonical(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        v.iter_mut().for_each(|x| *x = -&*x);
    }
    v
}

fn fallback(s: &SimpleSystem, reduced: Vec<Vec<BigInt>>, ctx: &PrecisionContext) -> Result<MinimaResult> {
    let mut pairs: Vec<(Vec<BigInt>, Real)> = reduced
        .into_iter()
        .map(|v| {
            let v = canonical(v);
            let norm = s.norm(&v, ctx)?;
            Ok((v, norm))
        })
        .collect::<Result<_>>()?;
    let mut err = None;
    pairs.sort_by(|a, b| match compare(&a.1, &b.1, ctx) {
        Ok(Ordering::Equal) => a.0.cmp(&b.0),
        Ok(o) => o,
        Err(e) => {
            err = Some(e);
            Ordering::Equal
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let (vectors, norms) = pairs.into_iter().unzip();
    finish(vectors, norms, false)
}

/// `Π_n μ_n ≤ ∫|Δ|` together with `index ≤ N!`.
///
/// The returned certificate fails if either inequality fails.
pub fn thm4_reduce(s: &SimpleSystem, ctx: &PrecisionContext) -> Result<(MinimaResult, Certificate)> {
    let minima = successive_minima(s, ctx)?;
    let integral = delta_integral(s, ctx)?;
    let nf = factorial(s.n_funcs());
    let mut cert = Certificate::check("product of minima", "prod mu_n", &minima.product(), "int |Delta|", &integral, ctx)?
        .with("index", &minima.index)
        .with("N!", &nf)
        .with("exhaustive", minima.exhaustive);
    for (v, mu) in minima.vectors.iter().zip(&minima.norms) {
        cert = cert.with("b", format!("({}) mu = {}", v.iter().join(", "), mu.to_interval(ctx.bits).mid_decimal(12)));
    }
    if minima.index > nf {
        cert.verdict = Verdict::Fails;
    }
    Ok((minima, cert))
}

/// Volumes and the three volume inequalities for `N ≤ 3`.
#[derive(Clone, Debug)]
pub struct MinkowskiReport {
    pub minima: MinimaResult,
    /// `Vol(B)`, `B = {ξ : δ(ξ) ≤ 1}`.
    pub ball_volume: Real,
    /// `Vol(B*)`, the zonoid.
    pub dual_volume: Real,
    pub certificates: Vec<Certificate>,
}

impl MinkowskiReport {
    pub fn passed(&self) -> bool {
        self.certificates.iter().all(|c| c.passed())
    }
}

/// Checks `Πμ_n·Vol(B) ≤ 2^N`, `4^N/N! ≤ Vol(B)·Vol(B*)` and
/// `2^N ≤ Vol(B)·∫|Δ|`.
pub fn minkowski_check(s: &SimpleSystem, ctx: &PrecisionContext) -> Result<MinkowskiReport> {
    let n = s.n_funcs();
    if n > 3 {
        return Err(Error::DimensionTooLarge { dim: n, limit: 3 });
    }
    let minima = successive_minima(s, ctx)?;
    let ball = primal_ball_volume_exact(&s.weighted().transpose(), None, ctx)?;
    let dual = zonoid_volume(s, ctx)?;
    let integral = delta_integral(s, ctx)?;
    let two_n = Real::from_rational(BigRational::from_integer(BigInt::from(2).pow(n as u32)));
    let mahler = Real::from_rational(BigRational::new(BigInt::from(4).pow(n as u32), factorial(n)));
    let certificates = vec![
        Certificate::check("minkowski", "prod mu_n * Vol(B)", &(&minima.product() * &ball), "2^N", &two_n, ctx)?,
        Certificate::check("reisner", "4^N/N!", &mahler, "Vol(B) * Vol(B*)", &(&ball * &dual), ctx)?,
        Certificate::check("volume product", "2^N", &two_n, "Vol(B) * int |Delta|", &(&ball * &integral), ctx)?,
    ];
    Ok(MinkowskiReport { minima, ball_volume: ball, dual_volume: dual, certificates })
}

/// Whether `δ(b_n)` recomputes to every reported `μ_n` and the norms are
/// nondecreasing.
pub fn verify_minima(s: &SimpleSystem, r: &MinimaResult, ctx: &PrecisionContext) -> Result<bool> {
    for (v, mu) in r.vectors.iter().zip(&r.norms) {
        if !crate::certificate::agree(&s.norm(v, ctx)?, mu, ctx.bits) {
            return Ok(false);
        }
    }
    for w in r.norms.windows(2) {
        if certify_le(&w[0], &w[1], ctx)? == Verdict::Fails {
            return Ok(false);
        }
    }
    Ok(!r.index.is_zero())
}

/// Steps `xi` through the box `[-r, r]`; false after the last point.
pub(crate) fn advance(xi: &mut [i64], radii: &[i64]) -> bool {
    for (x, r) in xi.iter_mut().zip(radii).rev() {
        if *x < *r {
            *x += 1;
            return true;
        }
        *x = -r;
    }
    false
}
