//! The acceptance suite. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion does.

mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use subgroup_height::certificate::agree;
use subgroup_height::{
    build_presentation, certify_thm2, group_height, mcmullen_volume, minkowski_check,
    monte_carlo_zonotope, perturbation_gap_bound, product_formula_residual, q_integral, siegel_basis,
    small_independent_generators, sunit_height, thm4_reduce, total_variation, weil_height, zonoid_volume,
    GroupElement, Matrix, PrecisionContext, Real, SUnitContext, SimpleSystem, Verdict, ZonotopeSpec,
};

type Outcome = Result<String, String>;

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(id: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into()))
    });
    let elapsed = start.elapsed();
    let outcome = match (outcome, limit) {
        (Ok(_), Some(l)) if elapsed > l => Err(format!("took {:.2?}, limit {:.0?}", elapsed, l)),
        (o, _) => o,
    };
    let (status, detail) = match &outcome {
        Ok(d) => ("PASS", d.as_str()),
        Err(d) => ("FAIL", d.as_str()),
    };
    let line = format!("{status} [{id:>2}] {name} ({:.2} s): {detail}\n", elapsed.as_secs_f64());
    // Written past the test harness capture so the lines always show.
    std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
    outcome.is_ok()
}

fn bounds(x: &Real, bits: u32) -> (BigRational, BigRational) {
    let iv = x.to_interval(bits);
    (iv.lo().to_rational(), iv.hi().to_rational())
}

fn sunit_identity() -> Outcome {
    let ctx = ctx();
    let logs = log_oracle(400);
    let cases: Vec<(Vec<u64>, (BigRational, BigRational))> = vec![
        (vec![2], logs[&2].clone()),
        (vec![2, 3], {
            let p = mul_bounds(&logs[&2], &logs[&3]);
            (&p.0 * q(3, 2), &p.1 * q(3, 2))
        }),
        (vec![2, 3, 5], {
            let p = mul_bounds(&mul_bounds(&logs[&2], &logs[&3]), &logs[&5]);
            (&p.0 * q(3, 1), &p.1 * q(3, 1))
        }),
    ];
    let width_limit = q(1, 1) / BigRational::from_integer(BigInt::from(10).pow(30));
    for (primes, (lo, hi)) in cases {
        let r = sunit_height(&SUnitContext::rational(&primes).map_err(|e| e.to_string())?, &ctx)
            .map_err(|e| e.to_string())?;
        let (a, b) = bounds(&r.height, ctx.bits);
        ensure(&b - &a < width_limit, || format!("S = inf,{primes:?}: width too large"))?;
        ensure(a <= hi && lo <= b, || format!("S = inf,{primes:?}: enclosure misses the oracle"))?;
        ensure(agree(&r.height, &r.group_height, ctx.bits), || format!("S = inf,{primes:?}: group height disagrees"))?;
    }
    Ok("S = {inf,2}, {inf,2,3}, {inf,2,3,5} enclose the series values".into())
}

/// Full-rank random system with rational coefficients.
fn random_system(rng: &mut rand_chacha::ChaCha8Rng, n: usize, m: usize, max_den: i64) -> (SimpleSystem, Vec<f64>, Vec<Vec<f64>>) {
    loop {
        let coeffs: Vec<Vec<BigRational>> = (0..n).map(|_| (0..m).map(|_| rational_in(rng, 5, max_den)).collect()).collect();
        let masses: Vec<BigRational> = (0..m).map(|_| positive_mass(rng)).collect();
        if rational_rank(&coeffs) < n {
            continue;
        }
        let mf: Vec<f64> = masses.iter().map(to_f64).collect();
        let cf: Vec<Vec<f64>> = coeffs.iter().map(|r| r.iter().map(to_f64).collect()).collect();
        if let Ok(s) = SimpleSystem::from_rational(masses, &rat_matrix(coeffs), &ctx()) {
            if s.n_atoms() == m {
                return (s, mf, cf);
            }
        }
    }
}

fn dual_paths() -> Outcome {
    let ctx = ctx();
    let mut rng = rng(2);
    for i in 0..100 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(n..=6);
        let (s, mf, cf) = random_system(&mut rng, n, m, 4);
        let z = zonoid_volume(&s, &ctx).map_err(|e| e.to_string())?;
        let mc = mcmullen_volume(&ZonotopeSpec::new(s.weighted()).unwrap(), &ctx).map_err(|e| e.to_string())?;
        ensure(agree(&z, &mc, ctx.bits), || format!("case {i}: {z} vs {mc}"))?;
        let nf = (1..=n).product::<usize>() as f64;
        let oracle = 2f64.powi(n as i32) / nf * delta_integral_f64(&mf, &cf);
        ensure((z.mid_f64() - oracle).abs() <= 1e-9 * oracle.max(1.0), || format!("case {i}: oracle {oracle}"))?;
    }
    Ok("100 systems, zonoid and McMullen volumes agree".into())
}

fn monte_carlo() -> Outcome {
    let ctx = ctx();
    let mut rng = rng(3);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let n = rng.gen_range(2..=3);
        let m = rng.gen_range(n..=6);
        let rows = loop {
            let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..m).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            if int_rank(&rows) == n {
                break rows;
            }
        };
        let seg = rat_matrix(rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect());
        let z = ZonotopeSpec::from_rational(&seg).map_err(|e| e.to_string())?;
        let vol = mcmullen_volume(&z, &ctx).map_err(|e| e.to_string())?.mid_f64();
        let e = monte_carlo_zonotope(&z.segments_f64(), 1_000_000, i).map_err(|e| e.to_string())?;
        let dev = (e.mean - vol).abs() / e.sigma;
        worst = worst.max(dev);
        ensure(dev <= 4.0, || format!("case {i}: {} vs {vol}, {dev:.2} sigma", e.mean))?;
    }
    Ok(format!("50 zonotopes, largest deviation {worst:.2} sigma"))
}

fn minima_product() -> Outcome {
    let ctx = ctx();
    let mut rng = rng(4);
    for i in 0..100 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(n..=6);
        let (s, mf, cf) = random_system(&mut rng, n, m, 3);
        let (r, cert) = thm4_reduce(&s, &ctx).map_err(|e| e.to_string())?;
        ensure(r.exhaustive, || format!("case {i}: minima not exhaustive"))?;
        ensure(cert.passed(), || format!("case {i}: {cert:?}"))?;
        let nf: i64 = (1..=n as i64).product();
        ensure(r.index <= BigInt::from(nf), || format!("case {i}: index {}", r.index))?;
        // Independent recomputation of the norms and the index.
        let mut prod = 1.0;
        for b in &r.vectors {
            let bf: Vec<f64> = b.iter().map(|x| x.to_string().parse().unwrap()).collect();
            let norm: f64 = (0..m).map(|j| mf[j] * (0..n).map(|l| bf[l] * cf[l][j]).sum::<f64>().abs()).sum();
            prod *= norm;
        }
        let integral = delta_integral_f64(&mf, &cf);
        ensure(prod <= integral * (1.0 + 1e-9), || format!("case {i}: {prod} > {integral}"))?;
        let cols: Vec<Vec<BigInt>> = (0..n).map(|r0| r.vectors.iter().map(|b| b[r0].clone()).collect()).collect();
        ensure(leibniz_det(&cols).abs() == r.index, || format!("case {i}: index mismatch"))?;
    }
    Ok("100 systems, product of minima <= int |Delta| and index <= N!".into())
}

fn minkowski() -> Outcome {
    let ctx = ctx();
    let mut rng = rng(5);
    for i in 0..50 {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(n..=5);
        let (s, _, _) = random_system(&mut rng, n, m, 3);
        let r = minkowski_check(&s, &ctx).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("case {i}: {:?}", r.certificates))?;
    }
    let tol = q(1, 1) / BigRational::from_integer(BigInt::from(10).pow(20));
    for n in 1..=3usize {
        let id = Matrix::from_fn(n, n, |i, j| if i == j { q(1, 1) } else { q(0, 1) });
        let s = SimpleSystem::from_rational(vec![q(1, 1); n], &id, &ctx).unwrap();
        let r = minkowski_check(&s, &ctx).map_err(|e| e.to_string())?;
        let c = &r.certificates[1];
        ensure(matches!(c.verdict, Verdict::Equal | Verdict::Tight), || format!("identity N = {n}: {c:?}"))?;
        let gap = (c.rhs.hi().to_rational() - c.lhs.lo().to_rational()).abs();
        ensure(gap <= tol, || format!("identity N = {n}: gap {gap}"))?;
        let (num, den) = (BigInt::from(4).pow(n as u32), (1..=n as i64).product::<i64>());
        ensure(c.lhs.contains_rational(&BigRational::new(num, den.into())), || "4^N/N! enclosure".into())?;
    }
    Ok("50 systems pass all three volume inequalities; identity attains 4^N/N!".into())
}

fn independent_tuple(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    loop {
        let t: Vec<Vec<i64>> = (0..n).map(|_| exponent_vector(rng, PRIMES.len(), 3)).collect();
        if int_rank(&t) == n {
            return t;
        }
    }
}

fn combine(basis: &[Vec<i64>], coeffs: &[BigInt]) -> Vec<i64> {
    let mut out = vec![0i64; PRIMES.len()];
    for (row, c) in basis.iter().zip(coeffs) {
        let c: i64 = c.to_string().parse().unwrap();
        for (o, x) in out.iter_mut().zip(row) {
            *o += c * x;
        }
    }
    out
}

fn small_generators() -> Outcome {
    let ctx = ctx();
    let mut rng = rng(6);
    for i in 0..100 {
        let n = rng.gen_range(1..=3);
        let t = independent_tuple(&mut rng, n);
        let gens: Vec<GroupElement> = t.iter().map(|e| element(e)).collect();
        let p = build_presentation(&gens, &ctx).map_err(|e| e.to_string())?;
        let c = small_independent_generators(&p, &ctx).map_err(|e| e.to_string())?;
        ensure(c.passed(), || format!("case {i}: {:?}", c.certificate))?;
        let nf: i64 = (1..=n as i64).product();
        ensure(c.index <= BigInt::from(nf), || format!("case {i}: index {}", c.index))?;
        for (b, h) in c.betas.iter().zip(&c.beta_heights) {
            let oracle = height_of_exponents(&combine(&t, b));
            ensure((h.mid_f64() - oracle).abs() < 1e-9, || format!("case {i}: h(beta) {h} vs {oracle}"))?;
        }
    }
    let p = build_presentation(&[element(&[1]), element(&[0, 1])], &ctx).unwrap();
    let c = small_independent_generators(&p, &ctx).unwrap();
    let (prod, h) = (c.product.mid_f64(), c.h_group.mid_f64());
    ensure((prod - 0.761500).abs() < 1e-6, || format!("<2,3>: product {prod}"))?;
    ensure((h - 1.142251).abs() < 1e-6, || format!("<2,3>: height {h}"))?;
    Ok(format!("100 tuples; <2,3>: product {prod:.6} <= h {h:.6}"))
}

fn siegel() -> Outcome {
    let ctx = ctx();
    let mut rng = rng(7);
    for i in 0..100 {
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(1..n);
        let rows = loop {
            let rows: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-5..=5)).collect()).collect();
            if int_rank(&rows) == m {
                break rows;
            }
        };
        let b = siegel_basis(&int_rows(&rows), &ctx).map_err(|e| e.to_string())?;
        ensure(b.exhaustive, || format!("case {i}: not exhaustive"))?;
        ensure(b.vectors.len() == n - m, || format!("case {i}: {} vectors", b.vectors.len()))?;
        for z in &b.vectors {
            for r in &rows {
                let dot: BigInt = r.iter().zip(z).map(|(&a, x)| BigInt::from(a) * x).sum();
                ensure(dot.is_zero(), || format!("case {i}: A z != 0"))?;
            }
        }
        let zr: Vec<Vec<BigRational>> =
            b.vectors.iter().map(|z| z.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        ensure(rational_rank(&zr) == n - m, || format!("case {i}: dependent vectors"))?;
        // Cauchy-Binet: det(AA^T) is the sum of squared maximal minors.
        let minors: Vec<BigInt> = subsets(n, m)
            .iter()
            .map(|idx| leibniz_det(&rows.iter().map(|r| idx.iter().map(|&j| BigInt::from(r[j])).collect()).collect::<Vec<_>>()))
            .collect();
        let gram: BigInt = minors.iter().map(|x| x * x).sum();
        let d = gcd_all(&minors);
        let prod: BigInt = b.vectors.iter().map(|z| z.iter().map(|x| x.abs()).max().unwrap()).product();
        ensure(&prod * &prod * &d * &d <= gram, || format!("case {i}: {prod}^2 D^2 > {gram}"))?;
        ensure(b.gram == gram && b.minor_gcd == d, || format!("case {i}: gram or D mismatch"))?;
    }
    Ok("100 matrices, prod |z|_inf <= sqrt(det AA^T)/D".into())
}

/// Rank-deficient tuple: `n` generators spanning a rank `m < n` subgroup.
fn dependent_tuple(rng: &mut rand_chacha::ChaCha8Rng, n: usize, m: usize) -> Vec<Vec<i64>> {
    let base = independent_tuple(rng, m);
    loop {
        let t: Vec<Vec<i64>> = (0..n)
            .map(|_| {
                let c: Vec<BigInt> = (0..m).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect();
                combine(&base, &c)
            })
            .collect();
        if int_rank(&t) == m && t.iter().all(|v| v.iter().any(|&x| x != 0)) {
            return t;
        }
    }
}

fn dependency_certificates() -> Outcome {
    let ctx = ctx();
    let mut rng = rng(8);
    for i in 0..100 {
        let n = rng.gen_range(2..=5);
        let m = rng.gen_range(1..n);
        let t = dependent_tuple(&mut rng, n, m);
        let gens: Vec<GroupElement> = t.iter().map(|e| element(e)).collect();
        let c = certify_thm2(&gens, &ctx).map_err(|e| e.to_string())?;
        ensure(c.passed(), || format!("case {i}: {:?} {:?}", c.thm2, c.thm5))?;
        ensure(c.module.rank() == m, || format!("case {i}: rank {}", c.module.rank()))?;
        let hsum: f64 = t.iter().map(|e| height_of_exponents(e)).sum();
        ensure((c.height_sum.mid_f64() - hsum).abs() < 1e-9, || format!("case {i}: height sum"))?;
    }
    let c = certify_thm2(&[element(&[1]), element(&[0, 1]), element(&[1, 1])], &ctx).map_err(|e| e.to_string())?;
    let (l2, l3, l6) = (2f64.ln(), 3f64.ln(), 6f64.ln());
    let h = 1.5 * l2 * l3;
    let checks = [
        (c.thm2.lhs.mid_f64(), l2 * l3),
        (c.thm2.rhs.mid_f64(), (2.0 * l6).powi(2)),
        (c.thm5.lhs.mid_f64(), h),
        (c.thm5.rhs.mid_f64(), 3f64.sqrt() * h),
    ];
    ensure(c.passed() && c.dependencies.product == BigInt::one(), || "(2,3,6) certificate".into())?;
    for (got, want) in checks {
        ensure((got - want).abs() < 1e-12, || format!("(2,3,6): {got} vs {want}"))?;
    }
    Ok(format!(
        "100 tuples; (2,3,6): {:.6} <= {:.6}, {:.6} <= {:.6}",
        checks[0].0, checks[1].0, checks[2].0, checks[3].0
    ))
}

/// `2^{−M}·Σ_{y ∈ S^M} √det(U(y)U(y)ᵀ)` over all tuples of places.
fn q_integral_oracle(t: &[Vec<i64>], m: usize) -> f64 {
    // places: infinity, then the primes
    let logs: Vec<Vec<f64>> = t
        .iter()
        .map(|e| {
            let mut row = vec![0.0; PRIMES.len() + 1];
            for (k, (&p, &x)) in PRIMES.iter().zip(e).enumerate() {
                let l = x as f64 * (p as f64).ln();
                row[0] += l;
                row[k + 1] = -l;
            }
            row
        })
        .collect();
    let places = PRIMES.len() + 1;
    let mut y = vec![0usize; m];
    let mut total = 0.0;
    loop {
        let u: Vec<Vec<f64>> = y.iter().map(|&v| logs.iter().map(|r| r[v]).collect()).collect();
        // det(UUᵀ) by Cauchy-Binet, which avoids cancellation in the Gram matrix
        let g: f64 = subsets(t.len(), m)
            .iter()
            .map(|idx| det_f64(&u.iter().map(|r| idx.iter().map(|&j| r[j]).collect()).collect::<Vec<_>>()).powi(2))
            .sum();
        total += g.sqrt();
        let mut k = 0;
        while k < m {
            y[k] += 1;
            if y[k] < places {
                break;
            }
            y[k] = 0;
            k += 1;
        }
        if k == m {
            break;
        }
    }
    total / 2f64.powi(m as i32)
}

fn q_identity() -> Outcome {
    let ctx = ctx();
    let mut rng = rng(9);
    for i in 0..50 {
        let m = rng.gen_range(1..=3);
        let n = rng.gen_range(m..=m + 2);
        let t = if n == m { independent_tuple(&mut rng, n) } else { dependent_tuple(&mut rng, n, m) };
        let gens: Vec<GroupElement> = t.iter().map(|e| element(e)).collect();
        let r = q_integral(&gens, &ctx).map_err(|e| e.to_string())?;
        ensure(agree(&r.tuple_sum, &r.product_form, ctx.bits), || format!("case {i}: {} vs {}", r.tuple_sum, r.product_form))?;
        let oracle = q_integral_oracle(&t, m);
        ensure((r.tuple_sum.mid_f64() - oracle).abs() <= 1e-9 * oracle.max(1.0), || format!("case {i}: oracle {oracle} vs {} for {t:?}", r.tuple_sum.mid_f64()))?;
    }
    Ok("50 instances, tuple sum = sqrt(det AA^T) h".into())
}

fn perturbation_bound() -> Outcome {
    let ctx = ctx();
    let mut rng = rng(10);
    for i in 0..100 {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(n..=5);
        let (s, mf, cf) = random_system(&mut rng, n, m, 3);
        let pert: Vec<Vec<BigRational>> = (0..n).map(|_| (0..m).map(|_| rational_in(&mut rng, 1, 10) / q(5, 1)).collect()).collect();
        let tf: Vec<Vec<f64>> = cf.iter().zip(&pert).map(|(r, p)| r.iter().zip(p).map(|(a, b)| a + to_f64(b)).collect()).collect();
        let coeffs = Matrix::from_fn(n, m, |l, j| s.coeffs().get(l, j) + &Real::from_rational(pert[l][j].clone()));
        let t = SimpleSystem::raw(s.masses().to_vec(), coeffs).map_err(|e| e.to_string())?;
        let r = perturbation_gap_bound(&s, &t, &ctx).map_err(|e| e.to_string())?;
        ensure(r.verdict.passed(), || format!("case {i}: {r:?}"))?;
        let norm = |row: &[f64]| -> f64 { row.iter().zip(&mf).map(|(x, w)| x.abs() * w).sum() };
        let c1 = cf.iter().chain(&tf).map(|r| norm(r)).fold(0.0, f64::max);
        let diff: f64 = cf.iter().zip(&tf).map(|(a, b)| norm(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())).sum();
        let nf = (1..=n).product::<usize>() as f64;
        let bound = nf * c1.powi(n as i32 - 1) * diff;
        let gap = (delta_integral_f64(&mf, &cf) - delta_integral_f64(&mf, &tf)).abs();
        ensure(gap <= bound * (1.0 + 1e-9) + 1e-12, || format!("case {i}: oracle gap {gap} > {bound}"))?;
        ensure((r.bound.mid_f64() - bound).abs() <= 1e-9 * bound.max(1.0), || format!("case {i}: bound {} vs {bound}", r.bound))?;
    }
    Ok("100 perturbed pairs within the gap bound".into())
}

fn invariance() -> Outcome {
    let ctx = ctx();
    let mut rng = rng(11);
    for i in 0..100 {
        let n = rng.gen_range(1..=4);
        let t = independent_tuple(&mut rng, n);
        let g = unimodular(&mut rng, n, 3);
        let t2: Vec<Vec<i64>> = g
            .iter()
            .map(|row| combine(&t, &row.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()))
            .collect();
        let h1 = group_height(&build_presentation(&t.iter().map(|e| element(e)).collect::<Vec<_>>(), &ctx).unwrap(), &ctx)
            .map_err(|e| e.to_string())?;
        let h2 = group_height(&build_presentation(&t2.iter().map(|e| element(e)).collect::<Vec<_>>(), &ctx).unwrap(), &ctx)
            .map_err(|e| e.to_string())?;
        ensure(agree(&h1, &h2, ctx.bits), || format!("unimodular case {i}: {h1} vs {h2}"))?;
    }
    for i in 0..100 {
        let e = element(&exponent_vector(&mut rng, PRIMES.len(), 4));
        let h = weil_height(&e, &ctx).map_err(|e| e.to_string())?;
        let r = rational_in(&mut rng, 4, 5);
        let hr = weil_height(&e.pow(&r), &ctx).map_err(|e| e.to_string())?;
        ensure(hr == h.scale(&r.abs()), || format!("power case {i}: {hr} vs |{r}| {h}"))?;
        ensure(weil_height(&e.inverse(), &ctx).unwrap() == h, || format!("inverse case {i}"))?;
        ensure(product_formula_residual(&e, &ctx).is_zero(), || format!("product formula case {i}"))?;
        ensure(total_variation(&e, &ctx).unwrap() == h.scale(&q(2, 1)), || format!("2h case {i}"))?;
        ensure((h.mid_f64() - height_of_exponents(&exponent_oracle(&e))).abs() < 1e-9, || format!("oracle case {i}"))?;
    }
    Ok("unimodular, power, inverse, product formula and 2h checks on 100 cases each".into())
}

fn exponent_oracle(e: &GroupElement) -> Vec<i64> {
    let map = e.exponents().unwrap();
    PRIMES.iter().map(|p| map.get(p).map_or(0, |x| x.to_integer().to_string().parse().unwrap())).collect()
}

#[test]
fn acceptance() {
    let s = |secs: u64| Some(Duration::from_secs(secs));
    let results = [
        run(1, "S-unit identity", s(1), sunit_identity),
        run(2, "zonoid vs McMullen volume", s(30), dual_paths),
        run(3, "Monte Carlo oracle", s(120), monte_carlo),
        run(4, "successive minima product", s(300), minima_product),
        run(5, "Minkowski and volume products", None, minkowski),
        run(6, "small independent generators", None, small_generators),
        run(7, "Siegel bound", s(300), siegel),
        run(8, "dependency certificates", None, dependency_certificates),
        run(9, "Q-integral identity", None, q_identity),
        run(10, "perturbation bound", None, perturbation_bound),
        run(11, "invariance suite", None, invariance),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
