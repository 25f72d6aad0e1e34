//! Multiplicative dependencies, small kernel bases and the dependency
//! height inequalities.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::certificate::{agree, Certificate, Verdict};
use crate::error::{Error, Result};
use crate::heights::{build_presentation, group_height, small_independent_generators, HeightCertificate};
use crate::intlinalg::{gram_det_and_minor_gcd, hnf_kernel_basis, lll_reduce, rank, row_hnf, IntMatrix};
use crate::logpoly::Real;
use crate::matrix::Matrix;
use crate::minima::advance;
use crate::numbers::{weil_height, GroupElement};
use crate::precision::PrecisionContext;
use crate::zonoid::factorial;

/// Integer data of a dependent tuple `α_1,…,α_N`.
#[derive(Clone, Debug)]
pub struct DependencyModule {
    pub primes: Vec<u64>,
    /// Exponents of the generators, `N×P`.
    pub exponents: IntMatrix,
    /// Row Hermite basis `γ_1,…,γ_M` of the exponent lattice, `M×P`.
    pub basis: IntMatrix,
    /// `α_n = Π_m γ_m^{A[m][n]}`, `M×N`.
    pub a: IntMatrix,
    /// Saturated basis of `{z : Π α_n^{z_n} = 1}` as columns, `N×L`.
    pub kernel: IntMatrix,
}

impl DependencyModule {
    pub fn rank(&self) -> usize {
        self.a.rows()
    }

    pub fn basis_elements(&self) -> Result<Vec<GroupElement>> {
        (0..self.basis.rows())
            .map(|m| {
                GroupElement::factored(
                    self.primes
                        .iter()
                        .zip(self.basis.row(m))
                        .map(|(p, e)| (*p, BigRational::from_integer(e.clone())))
                        .collect(),
                )
            })
            .collect()
    }
}

/// Exponents of factored generators with integer exponents.
fn integer_exponents(gens: &[GroupElement]) -> Result<(Vec<u64>, IntMatrix)> {
    let mut primes = BTreeSet::new();
    for g in gens {
        let m = g
            .exponents()
            .ok_or_else(|| Error::invalid("dependencies need factored generators"))?;
        for (p, e) in m {
            if !e.is_integer() {
                return Err(Error::invalid(format!(
                    "generator {g} has a fractional exponent; clear denominators first"
                )));
            }
            primes.insert(*p);
        }
    }
    let primes: Vec<u64> = primes.into_iter().collect();
    let e = IntMatrix::from_fn(gens.len(), primes.len(), |n, j| {
        gens[n].exponents().unwrap().get(&primes[j]).map(|x| x.to_integer()).unwrap_or_default()
    });
    Ok((primes, e))
}

/// The lattice of multiplicative dependencies of the generators.
///
/// Requires rank `M` with `1 ≤ M < N`.
pub fn dependency_module(gens: &[GroupElement]) -> Result<DependencyModule> {
    let module = hermite_module(gens)?;
    if module.rank() == gens.len() {
        return Err(Error::invalid("generators are independent (full rank): no dependencies"));
    }
    Ok(module)
}

fn hermite_module(gens: &[GroupElement]) -> Result<DependencyModule> {
    let (primes, exponents) = integer_exponents(gens)?;
    let n = gens.len();
    let basis = row_hnf(&exponents);
    let m = basis.rows();
    if m == 0 {
        return Err(Error::invalid("all generators are torsion"));
    }
    let pivots: Vec<usize> = (0..m)
        .map(|r| basis.row(r).iter().position(|x| !x.is_zero()).expect("nonzero row"))
        .collect();
    let mut a = IntMatrix::zeros(m, n);
    for k in 0..n {
        let mut x = exponents.row(k).to_vec();
        for r in 0..m {
            let (q, rem) = x[pivots[r]].div_rem(basis.get(r, pivots[r]));
            if !rem.is_zero() {
                return Err(Error::Verification("generator outside the span of its Hermite basis".into()));
            }
            for (xj, g) in x.iter_mut().zip(basis.row(r)) {
                *xj -= &q * g;
            }
            a.set(r, k, q);
        }
        if x.iter().any(|v| !v.is_zero()) {
            return Err(Error::Verification("Hermite coordinates do not reproduce a generator".into()));
        }
    }
    let kernel = hnf_kernel_basis(&a);
    Ok(DependencyModule { primes, exponents, basis, a, kernel })
}

/// Replaces each `α` by `α^L` with `L` the lcm of all exponent denominators.
pub fn clear_denominators(gens: &[GroupElement]) -> Result<(Vec<GroupElement>, BigInt)> {
    let mut l = BigInt::one();
    for g in gens {
        let m = g
            .exponents()
            .ok_or_else(|| Error::invalid("clearing denominators needs factored generators"))?;
        for e in m.values() {
            l = l.lcm(e.denom());
        }
    }
    let r = BigRational::from_integer(l.clone());
    Ok((gens.iter().map(|g| g.pow(&r)).collect(), l))
}

/// Independent kernel vectors with small sup norms.
#[derive(Clone, Debug)]
pub struct DependencyBasis {
    pub vectors: Vec<Vec<BigInt>>,
    pub sup_norms: Vec<BigInt>,
    pub product: BigInt,
    /// `det(A·Aᵀ)`.
    pub gram: BigInt,
    /// gcd of the maximal minors of `A`.
    pub minor_gcd: BigInt,
    /// `√det(A·Aᵀ)/D`.
    pub bound: Real,
    pub exhaustive: bool,
    /// Exact comparison of `(product·D)²` with `det(A·Aᵀ)`.
    pub verdict: Verdict,
}

fn sup(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

fn canonical(v: &[BigInt]) -> bool {
    v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive())
}

/// Coefficient radii `r_i` such that every `z = K·c` with `|z|_∞ ≤ R`
/// has `|c_i| ≤ r_i`: `c = K_I^{-1} z_I` for each invertible row block.
fn coefficient_radii(k: &IntMatrix, radius: &BigInt) -> Vec<BigInt> {
    let (n, l) = (k.rows(), k.cols());
    let kr = k.map(|x| BigRational::from_integer(x.clone()));
    let mut best: Vec<Option<BigRational>> = vec![None; l];
    for rows in (0..n).combinations(l) {
        let block = kr.select_rows(&rows);
        let inv_cols: Option<Vec<Vec<BigRational>>> = (0..l)
            .map(|j| {
                let e: Vec<BigRational> = (0..l)
                    .map(|i| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect();
                block.solve(&e)
            })
            .collect();
        let Some(inv_cols) = inv_cols else { continue };
        for (i, slot) in best.iter_mut().enumerate() {
            let s: BigRational = inv_cols.iter().map(|c| c[i].abs()).sum();
            if slot.as_ref().map_or(true, |b| &s < b) {
                *slot = Some(s);
            }
        }
    }
    let r = BigRational::from_integer(radius.clone());
    best.into_iter()
        .map(|b| (b.expect("kernel basis has full column rank") * &r).floor().to_integer())
        .collect()
}

fn enumerate_kernel(k: &IntMatrix, radius: &BigInt) -> Vec<Vec<BigInt>> {
    let (n, l) = (k.rows(), k.cols());
    let radii: Vec<i64> = coefficient_radii(k, radius).iter().map(|r| r.to_i64().unwrap_or(i64::MAX)).collect();
    let cols = k.to_cols();
    let mut out: Vec<Vec<BigInt>> = (-radii[0]..=radii[0])
        .into_par_iter()
        .flat_map_iter(|c0| {
            let mut found = Vec::new();
            let mut c: Vec<i64> = radii.iter().map(|r| -r).collect();
            c[0] = c0;
            loop {
                let z: Vec<BigInt> = (0..n)
                    .map(|row| (0..l).map(|j| &cols[j][row] * c[j]).sum())
                    .collect();
                if canonical(&z) && &sup(&z) <= radius {
                    found.push(z);
                }
                if !advance(&mut c[1..], &radii[1..]) {
                    break;
                }
            }
            found
        })
        .collect();
    out.sort_by(|a, b| sup(a).cmp(&sup(b)).then_with(|| a.cmp(b)));
    out
}

fn box_size(k: &IntMatrix, radius: &BigInt) -> f64 {
    coefficient_radii(k, radius)
        .iter()
        .map(|r| 2.0 * r.to_f64().unwrap_or(f64::INFINITY) + 1.0)
        .product()
}

/// Greedy independent selection from vectors sorted by (sup norm, lex).
fn greedy(vectors: &[Vec<BigInt>], want: usize) -> Vec<Vec<BigInt>> {
    let mut chosen: Vec<Vec<BigInt>> = Vec::new();
    for v in vectors {
        if chosen.len() == want {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(v.clone());
        let m = IntMatrix::from_cols(v.len(), &trial).expect("equal lengths");
        if rank(&m) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

/// Kernel basis of `A` (`M×N`, rank `M < N`) with
/// `Π_l |z_l|_∞ ≤ √det(A·Aᵀ)/D`.
///
/// The kernel lattice is searched in sup-norm boxes of radius `1, 2, 4, …`
/// up to `⌊√det(A·Aᵀ)/D⌋`, which bounds every vector of a basis meeting the
/// inequality. Vectors are taken greedily by (sup norm, lex). If a box
/// exceeds the enumeration limit, the LLL-reduced kernel basis is returned
/// with `exhaustive = false`.
pub fn siegel_basis(a: &IntMatrix, ctx: &PrecisionContext) -> Result<DependencyBasis> {
    let (m, n) = (a.rows(), a.cols());
    if m >= n {
        return Err(Error::invalid(format!("need fewer equations than unknowns, got {m}x{n}")));
    }
    let (gram, d) = gram_det_and_minor_gcd(a)?;
    let kernel = lll_reduce(&hnf_kernel_basis(a))?;
    let l = n - m;
    let limit = (&gram / (&d * &d)).sqrt();
    let mut radius = BigInt::one();
    let mut vectors = None;
    loop {
        let r = radius.clone().min(limit.clone()).max(BigInt::one());
        if box_size(&kernel, &r) > ctx.enumeration_limit as f64 {
            break;
        }
        let chosen = greedy(&enumerate_kernel(&kernel, &r), l);
        if chosen.len() == l {
            vectors = Some(chosen);
            break;
        }
        if r >= limit {
            return Err(Error::Verification(format!(
                "no {l} independent kernel vectors within sup norm {limit}"
            )));
        }
        radius *= 2;
    }
    let exhaustive = vectors.is_some();
    let vectors = match vectors {
        Some(v) => v,
        None => kernel
            .to_cols()
            .into_iter()
            .map(|v| if canonical(&v) { v } else { v.iter().map(|x| -x).collect() })
            .sorted_by(|a, b| sup(a).cmp(&sup(b)).then_with(|| a.cmp(b)))
            .collect(),
    };
    for v in &vectors {
        if a.mul_vec(v).iter().any(|x| !x.is_zero()) {
            return Err(Error::Verification("kernel vector fails A·z = 0".into()));
        }
    }
    let sup_norms: Vec<BigInt> = vectors.iter().map(|v| sup(v)).collect();
    let product: BigInt = sup_norms.iter().product();
    let lhs = (&product * &d).pow(2);
    let verdict = match lhs.cmp(&gram) {
        std::cmp::Ordering::Less => Verdict::Strict,
        std::cmp::Ordering::Equal => Verdict::Equal,
        std::cmp::Ordering::Greater => Verdict::Fails,
    };
    let bound = Real::from_rational(BigRational::from_integer(gram.clone()))
        .sqrt(ctx.bits)
        .scale(&BigRational::new(BigInt::one(), d.clone()));
    Ok(DependencyBasis { vectors, sup_norms, product, gram, minor_gcd: d, bound, exhaustive, verdict })
}

/// Both evaluations of `2^{−M}∫Q` and the Hadamard bound.
#[derive(Clone, Debug)]
pub struct QIntegral {
    /// `2^{−M}·Σ_{y ∈ S^M} √det(U(y)U(y)ᵀ)·Π mass(y_m)`.
    pub tuple_sum: Real,
    /// `√det(A·Aᵀ)·h(𝔄)`.
    pub product_form: Real,
    /// `(Σ_n h(α_n))^M`.
    pub hadamard: Real,
}

/// `U(y)[m][n] = log‖α_n‖_{y_m}`; tuples with a repeated place give a zero
/// determinant and permuted tuples agree, so the sum runs over `M`-subsets
/// of places with weight `M!`.
pub fn q_integral(gens: &[GroupElement], ctx: &PrecisionContext) -> Result<QIntegral> {
    let module = hermite_module(gens)?;
    let m = module.rank();
    let p = build_presentation(gens, ctx)?;
    let logs = p.log_matrix();
    let masses = p.masses();
    let s = p.places().len();
    let subsets: Vec<Vec<usize>> = (0..s).combinations(m).collect();
    let terms: Vec<Real> = subsets
        .par_iter()
        .map(|places| {
            let u = Matrix::from_fn(m, gens.len(), |i, n| logs.get(n, places[i]).clone());
            let g = u.mul(&u.transpose())?.det_subsets()?;
            let root = match g.sign(ctx)? {
                std::cmp::Ordering::Equal => Real::zero(),
                _ => g.sqrt(ctx.bits),
            };
            let w = places.iter().fold(BigRational::one(), |acc, &c| acc * &masses[c]);
            Ok(root.scale(&w))
        })
        .collect::<Result<_>>()?;
    let scale = BigRational::new(factorial(m), BigInt::from(2).pow(m as u32));
    let tuple_sum = terms.into_iter().fold(Real::zero(), |acc, t| acc + t).scale(&scale);

    let (gram, _) = gram_det_and_minor_gcd(&module.a)?;
    let hp = build_presentation(&module.basis_elements()?, ctx)?;
    let h = group_height(&hp, ctx)?;
    let product_form = &Real::from_rational(BigRational::from_integer(gram)).sqrt(ctx.bits) * &h;

    let mut sum = Real::zero();
    for g in gens {
        sum = sum + weil_height(g, ctx)?;
    }
    let hadamard = (0..m).fold(Real::one(), |acc, _| &acc * &sum);
    Ok(QIntegral { tuple_sum, product_form, hadamard })
}

/// Certificates for a dependent tuple: the dependency bound and the
/// inequality `Π|z_l|_∞·h(𝔄) ≤ 2^{−M}∫Q`.
#[derive(Clone, Debug)]
pub struct Thm2Certificate {
    pub module: DependencyModule,
    pub dependencies: DependencyBasis,
    pub small: HeightCertificate,
    pub h_group: Real,
    pub height_sum: Real,
    pub q: QIntegral,
    /// `Π|z_l|_∞·Π h(β_m) ≤ (Σ_n h(α_n))^M`.
    pub thm2: Certificate,
    /// `Π|z_l|_∞·h(𝔄) ≤ 2^{−M}∫Q`.
    pub thm5: Certificate,
}

impl Thm2Certificate {
    pub fn passed(&self) -> bool {
        self.thm2.passed() && self.thm5.passed() && self.dependencies.verdict.passed()
    }
}

pub fn certify_thm2(gens: &[GroupElement], ctx: &PrecisionContext) -> Result<Thm2Certificate> {
    let module = dependency_module(gens)?;
    let dependencies = siegel_basis(&module.a, ctx)?;
    let hp = build_presentation(&module.basis_elements()?, ctx)?;
    let small = small_independent_generators(&hp, ctx)?;
    let h_group = small.h_group.clone();
    let q = q_integral(gens, ctx)?;
    if !agree(&q.tuple_sum, &q.product_form, ctx.bits) {
        return Err(Error::Verification(format!(
            "tuple sum {} and product form {} disagree",
            q.tuple_sum.to_interval(ctx.bits),
            q.product_form.to_interval(ctx.bits)
        )));
    }
    let mut height_sum = Real::zero();
    for g in gens {
        height_sum = height_sum + weil_height(g, ctx)?;
    }
    let z = Real::from_rational(BigRational::from_integer(dependencies.product.clone()));
    let vectors = dependencies
        .vectors
        .iter()
        .map(|v| format!("({})", v.iter().join(", ")))
        .join(" ");
    let thm2 = Certificate::check("dependencies", "prod |z|_inf * prod h(beta)", &(&z * &small.product), "(sum h(alpha))^M", &q.hadamard, ctx)?
        .with("z", &vectors)
        .with("prod |z|_inf", &dependencies.product)
        .with("beta", small.beta_elements.iter().join(" "));
    let mut thm5 = Certificate::check("q-integral", "prod |z|_inf * h(A)", &(&z * &h_group), "2^-M int Q", &q.tuple_sum, ctx)?
        .with("det(AA^T)", &dependencies.gram)
        .with("D", &dependencies.minor_gcd);
    // the inequality reduces to (Π|z|)² ≤ det(AAᵀ)
    if dependencies.product.pow(2) > dependencies.gram {
        thm5.verdict = Verdict::Fails;
    }
    Ok(Thm2Certificate { module, dependencies, small, h_group, height_sum, q, thm2, thm5 })
}
