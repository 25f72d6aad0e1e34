//! Heights of finitely generated subgroups and S-unit regulators.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::certificate::{agree, Certificate, Verdict};
use crate::error::{Error, Result};
use crate::logpoly::{LogPoly, Real};
use crate::matrix::Matrix;
use crate::minima::{successive_minima, MinimaResult};
use crate::numbers::{group_op, product_formula_residual, weil_height, GroupElement, Place};
use crate::precision::PrecisionContext;
use crate::zonoid::{certified_rank, delta_integral, factorial, ExactMatrix, SimpleSystem};

/// Generators `α_1,…,α_N` with their log-values on a common place list.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    generators: Vec<GroupElement>,
    places: Vec<Place>,
    masses: Vec<BigRational>,
    /// `A[n][s] = log‖α_n‖_{v_s}`.
    a: ExactMatrix,
    rank: usize,
}

impl SubgroupPresentation {
    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn masses(&self) -> &[BigRational] {
        &self.masses
    }

    pub fn log_matrix(&self) -> &ExactMatrix {
        &self.a
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == self.generators.len()
    }

    /// The simple system of the functions `y ↦ log‖α_n‖_y`.
    pub fn system(&self, ctx: &PrecisionContext) -> Result<SimpleSystem> {
        if !self.is_full_rank() {
            return Err(Error::RankDeficient {
                expected: self.generators.len(),
                found: self.rank,
            });
        }
        SimpleSystem::build(self.masses.clone(), self.a.clone(), ctx)
    }

    /// `Π_n α_n^{b_n}`.
    pub fn combine(&self, b: &[BigInt]) -> Result<GroupElement> {
        let mut out = self.generators[0].pow(&BigRational::zero());
        for (g, e) in self.generators.iter().zip(b) {
            if !e.is_zero() {
                out = group_op(&out, g, &BigRational::from_integer(e.clone()))?;
            }
        }
        Ok(out)
    }
}

/// Assembles the log matrix on the union of the supports.
///
/// Factored generators live on `∞` and their primes; place tables are padded
/// with zeros to the union of their labels. Mixing the two is rejected.
pub fn build_presentation(gens: &[GroupElement], ctx: &PrecisionContext) -> Result<SubgroupPresentation> {
    if gens.is_empty() {
        return Err(Error::invalid("a subgroup needs at least one generator"));
    }
    let factored = gens.iter().filter(|g| g.is_factored()).count();
    if factored != 0 && factored != gens.len() {
        return Err(Error::Incompatible("generators mix factored elements and place tables".into()));
    }
    let (generators, places) = if factored == gens.len() {
        let primes: BTreeSet<u64> = gens.iter().flat_map(|g| g.exponents().unwrap().keys().copied()).collect();
        let mut places = vec![Place::infinite()];
        places.extend(primes.into_iter().map(Place::prime));
        (gens.to_vec(), places)
    } else {
        pad_tables(gens)?
    };
    let mut rows = Vec::with_capacity(gens.len());
    for g in &generators {
        let row: Vec<Real> = match g {
            GroupElement::Factored(m) => {
                let arch = m.iter().fold(LogPoly::zero(), |acc, (p, x)| acc + LogPoly::log_prime(*p, x.clone()));
                let mut row = vec![Real::Exact(arch)];
                for place in &places[1..] {
                    let p = match place.kind() {
                        crate::numbers::PlaceKind::Finite(p) => *p,
                        _ => unreachable!("factored places are primes"),
                    };
                    row.push(match m.get(&p) {
                        Some(x) => Real::Exact(LogPoly::log_prime(p, -x)),
                        None => Real::zero(),
                    });
                }
                row
            }
            GroupElement::Tabulated { entries, .. } => entries.iter().map(|(_, v)| v.clone()).collect(),
        };
        rows.push(row);
    }
    for g in &generators {
        let r = product_formula_residual(g, ctx);
        let holds = match &r {
            Real::Exact(p) => p.is_zero(),
            Real::Approx(iv) => iv.contains_zero(),
        };
        if !holds {
            return Err(Error::invalid(format!("generator {g} violates the product formula")));
        }
    }
    let masses: Vec<BigRational> = places.iter().map(|p| p.mass().0).collect();
    let a = if places.is_empty() {
        Matrix::zeros(gens.len(), 0)
    } else {
        Matrix::from_rows(rows)?
    };
    let rank = certified_rank(&a, ctx)?;
    if factored == gens.len() {
        let q_rank = exponent_matrix(&generators).rank_exact().0;
        if q_rank != rank {
            return Err(Error::Verification(format!(
                "exponent rank {q_rank} differs from the rank {rank} of the log matrix"
            )));
        }
    }
    Ok(SubgroupPresentation { generators, places, masses, a, rank })
}

/// Rational exponent matrix (rows = generators, columns = primes in order).
pub fn exponent_matrix(gens: &[GroupElement]) -> Matrix<BigRational> {
    let primes: BTreeSet<u64> = gens.iter().filter_map(|g| g.exponents()).flat_map(|m| m.keys().copied()).collect();
    let primes: Vec<u64> = primes.into_iter().collect();
    Matrix::from_fn(gens.len(), primes.len(), |n, j| {
        gens[n]
            .exponents()
            .and_then(|m| m.get(&primes[j]).cloned())
            .unwrap_or_else(BigRational::zero)
    })
}

fn pad_tables(gens: &[GroupElement]) -> Result<(Vec<GroupElement>, Vec<Place>)> {
    let degree = match &gens[0] {
        GroupElement::Tabulated { field_degree, .. } => *field_degree,
        GroupElement::Factored(_) => unreachable!(),
    };
    let mut places: Vec<Place> = Vec::new();
    for g in gens {
        let GroupElement::Tabulated { field_degree, entries } = g else { unreachable!() };
        if *field_degree != degree {
            return Err(Error::Incompatible(format!(
                "place tables over fields of degree {degree} and {field_degree}"
            )));
        }
        for (p, _) in entries {
            match places.iter().find(|q| q.label() == p.label()) {
                Some(q) if q != p => {
                    return Err(Error::Incompatible(format!("place {} declared with two local degrees", p.label())))
                }
                Some(_) => {}
                None => places.push(p.clone()),
            }
        }
    }
    places.sort();
    let padded = gens
        .iter()
        .map(|g| {
            let GroupElement::Tabulated { entries, .. } = g else { unreachable!() };
            let full = places
                .iter()
                .map(|p| {
                    let v = entries.iter().find(|(q, _)| q == p).map(|(_, v)| v.clone()).unwrap_or_else(Real::zero);
                    (p.clone(), v)
                })
                .collect();
            GroupElement::tabulated_unchecked(degree, full)
        })
        .collect::<Result<_>>()?;
    Ok((padded, places))
}

/// `h(𝔄) = 2^{−N}·∫|Δ(f_{α_1},…,f_{α_N})|`.
pub fn group_height(p: &SubgroupPresentation, ctx: &PrecisionContext) -> Result<Real> {
    let s = p.system(ctx)?;
    let two_n = BigRational::from_integer(BigInt::from(2).pow(p.n_generators() as u32));
    Ok(delta_integral(&s, ctx)?.scale(&two_n.recip()))
}

/// Independent elements `β_n` of the subgroup with `Π h(β_n) ≤ h(𝔄)`.
#[derive(Clone, Debug)]
pub struct HeightCertificate {
    pub h_group: Real,
    /// Exponent vectors of the `β_n` over the input generators.
    pub betas: Vec<Vec<BigInt>>,
    pub beta_elements: Vec<GroupElement>,
    pub beta_heights: Vec<Real>,
    pub product: Real,
    pub index: BigInt,
    pub exhaustive: bool,
    pub certificate: Certificate,
}

impl HeightCertificate {
    pub fn passed(&self) -> bool {
        self.certificate.passed()
    }
}

/// Runs successive minima on the presentation and checks `Π h(β_n) ≤ h(𝔄)`
/// and `index ≤ N!`, with `h(β_n)` recomputed from the elements themselves.
pub fn small_independent_generators(p: &SubgroupPresentation, ctx: &PrecisionContext) -> Result<HeightCertificate> {
    let s = p.system(ctx)?;
    let minima: MinimaResult = successive_minima(&s, ctx)?;
    let h_group = group_height(p, ctx)?;
    let mut beta_elements = Vec::new();
    let mut beta_heights = Vec::new();
    for (b, mu) in minima.vectors.iter().zip(&minima.norms) {
        let beta = p.combine(b)?;
        let h = weil_height(&beta, ctx)?;
        if !agree(&h.scale(&BigRational::from_integer(2.into())), mu, ctx.bits) {
            return Err(Error::Verification(format!("norm of {beta} is not twice its height")));
        }
        beta_elements.push(beta);
        beta_heights.push(h);
    }
    let product = beta_heights.iter().fold(Real::one(), |acc, h| &acc * h);
    let nf = factorial(p.n_generators());
    let mut certificate = Certificate::check("small generators", "prod h(beta_n)", &product, "h(A)", &h_group, ctx)?
        .with("index", &minima.index)
        .with("N!", &nf)
        .with("exhaustive", minima.exhaustive);
    for (b, e) in minima.vectors.iter().zip(&beta_elements) {
        certificate = certificate.with("beta", format!("({}) = {e}", b.iter().join(", ")));
    }
    if minima.index > nf {
        certificate.verdict = Verdict::Fails;
    }
    Ok(HeightCertificate {
        h_group,
        betas: minima.vectors,
        beta_elements,
        beta_heights,
        product,
        index: minima.index,
        exhaustive: minima.exhaustive,
        certificate,
    })
}

/// A fundamental system of S-units given by its log table.
#[derive(Clone, Debug)]
pub struct SUnitContext {
    field_degree: u32,
    places: Vec<Place>,
    /// `(s−1)×s`, entry `[r][v] = log‖η_r‖_v`.
    unit_log_table: ExactMatrix,
}

impl SUnitContext {
    pub fn new(field_degree: u32, places: Vec<Place>, unit_log_table: ExactMatrix) -> Result<Self> {
        let s = places.len();
        if s < 2 {
            return Err(Error::invalid("S must contain at least two places"));
        }
        if unit_log_table.rows() != s - 1 || unit_log_table.cols() != s {
            return Err(Error::invalid(format!(
                "unit log table must be {}x{s}, got {}x{}",
                s - 1,
                unit_log_table.rows(),
                unit_log_table.cols()
            )));
        }
        let labels: BTreeSet<&str> = places.iter().map(|p| p.label()).collect();
        if labels.len() != s {
            return Err(Error::invalid("places of S must be distinct"));
        }
        if let Some(p) = places.iter().find(|p| p.field_degree() != field_degree) {
            return Err(Error::invalid(format!("place {} declares another field degree", p.label())));
        }
        let c = SUnitContext { field_degree, places, unit_log_table };
        for r in 0..s - 1 {
            let unit = c.unit(r)?;
            let res = product_formula_residual(&unit, &PrecisionContext::default());
            let holds = match &res {
                Real::Exact(p) => p.is_zero(),
                Real::Approx(iv) => iv.contains_zero(),
            };
            if !holds {
                return Err(Error::invalid(format!("unit {} violates the product formula", r + 1)));
            }
        }
        Ok(c)
    }

    /// `k = Q`, `S = {∞} ∪ primes`, with the primes as fundamental units.
    pub fn rational(primes: &[u64]) -> Result<Self> {
        let mut sorted = primes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != primes.len() || primes.is_empty() {
            return Err(Error::invalid("need distinct primes"));
        }
        if let Some(p) = sorted.iter().find(|p| !crate::arith::is_prime_u64(**p)) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        let mut places = vec![Place::infinite()];
        places.extend(sorted.iter().map(|&p| Place::prime(p)));
        let s = places.len();
        let table = Matrix::from_fn(s - 1, s, |r, v| {
            let p = sorted[r];
            if v == 0 {
                Real::Exact(LogPoly::log_prime(p, BigRational::one()))
            } else if v == r + 1 {
                Real::Exact(LogPoly::log_prime(p, -BigRational::one()))
            } else {
                Real::zero()
            }
        });
        SUnitContext::new(1, places, table)
    }

    pub fn field_degree(&self) -> u32 {
        self.field_degree
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn unit_log_table(&self) -> &ExactMatrix {
        &self.unit_log_table
    }

    /// The `r`-th unit as a place table.
    pub fn unit(&self, r: usize) -> Result<GroupElement> {
        let entries = self
            .places
            .iter()
            .zip(self.unit_log_table.row(r))
            .map(|(p, v)| (p.clone(), v.clone()))
            .collect();
        GroupElement::tabulated_unchecked(self.field_degree, entries)
    }
}

/// Result of [`sunit_height`].
#[derive(Clone, Debug)]
pub struct SUnitHeight {
    /// `s!·Reg/(2d)^{s−1}`.
    pub height: Real,
    pub regulator: Real,
    /// `h` of the unit group computed as a subgroup height.
    pub group_height: Real,
}

/// Height of the S-unit group from its regulator, cross-checked against the
/// subgroup height of the declared units.
pub fn sunit_height(c: &SUnitContext, ctx: &PrecisionContext) -> Result<SUnitHeight> {
    let s = c.places.len();
    let scaled = Matrix::from_fn(s - 1, s, |r, v| {
        c.unit_log_table
            .get(r, v)
            .scale(&BigRational::from_integer(c.places[v].local_degree().into()))
    });
    let minors: Vec<Real> = (0..s)
        .map(|drop| {
            let cols: Vec<usize> = (0..s).filter(|&v| v != drop).collect();
            scaled.select_cols(&cols).det_subsets()?.abs(ctx)
        })
        .collect::<Result<_>>()?;
    let regulator = minors[0].clone();
    if regulator.to_interval(ctx.bits).contains_zero() {
        return Err(Error::exhausted(ctx.bits, "regulator enclosure contains zero"));
    }
    if let Some(m) = minors.iter().find(|m| !agree(m, &regulator, ctx.bits)) {
        return Err(Error::Verification(format!(
            "regulator minors disagree: {} vs {}",
            m.to_interval(ctx.bits),
            regulator.to_interval(ctx.bits)
        )));
    }
    let denom = BigInt::from(2 * c.field_degree).pow((s - 1) as u32);
    let height = regulator.scale(&BigRational::new(factorial(s), denom));
    let units: Vec<GroupElement> = (0..s - 1).map(|r| c.unit(r)).collect::<Result<_>>()?;
    let p = build_presentation(&units, ctx)?;
    let gh = group_height(&p, ctx)?;
    if !agree(&height, &gh, ctx.bits) {
        return Err(Error::Verification(format!(
            "closed form {} and subgroup height {} disagree",
            height.to_interval(ctx.bits),
            gh.to_interval(ctx.bits)
        )));
    }
    Ok(SUnitHeight { height, regulator, group_height: gh })
}
