//! Random instance generators and oracles that do not go through the
//! library's own arithmetic.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use subgroup_height::{GroupElement, IntMatrix, Matrix, RatMatrix};

pub const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn rational_in(rng: &mut ChaCha8Rng, bound: i64, max_den: i64) -> BigRational {
    let d = rng.gen_range(1..=max_den);
    q(rng.gen_range(-bound * d..=bound * d), d)
}

pub fn positive_mass(rng: &mut ChaCha8Rng) -> BigRational {
    q(rng.gen_range(1..=6), rng.gen_range(1..=3))
}

pub fn rat_matrix(rows: Vec<Vec<BigRational>>) -> RatMatrix {
    Matrix::from_rows(rows).unwrap()
}

pub fn int_rows(rows: &[Vec<i64>]) -> IntMatrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
}

/// Leibniz expansion over all permutations.
pub fn leibniz_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = BigInt::zero();
    permute(&mut perm, 0, m, &mut total);
    total
}

fn permute(p: &mut Vec<usize>, k: usize, m: &[Vec<BigInt>], total: &mut BigInt) {
    if k == p.len() {
        let mut inversions = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let mut prod = BigInt::one();
        for (i, &j) in p.iter().enumerate() {
            prod *= &m[i][j];
        }
        if inversions % 2 == 1 {
            prod = -prod;
        }
        *total += prod;
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, m, total);
        p.swap(k, i);
    }
}

/// Partial pivoting in doubles.
pub fn det_f64(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `Σ_{|I|=N} |det F_I|·Π mass`, times `N!`, in doubles.
pub fn delta_integral_f64(masses: &[f64], coeffs: &[Vec<f64>]) -> f64 {
    let n = coeffs.len();
    let m = masses.len();
    let mut total = 0.0;
    for idx in subsets(m, n) {
        let minor: Vec<Vec<f64>> = coeffs.iter().map(|r| idx.iter().map(|&j| r[j]).collect()).collect();
        let w: f64 = idx.iter().map(|&j| masses[j]).product();
        total += det_f64(&minor).abs() * w;
    }
    total * (1..=n).product::<usize>() as f64
}

/// Rank over the rationals by elimination on fractions.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[rank][c];
                for k in c..cols {
                    let sub = &f * &a[rank][k];
                    a[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn int_rank(rows: &[Vec<i64>]) -> usize {
    rational_rank(&rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect::<Vec<_>>())
}

/// A rational with the given prime exponents.
pub fn element(exps: &[i64]) -> GroupElement {
    let map: BTreeMap<u64, BigRational> = PRIMES
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e != 0)
        .map(|(&p, &e)| (p, q(e, 1)))
        .collect();
    GroupElement::factored(map).unwrap()
}

pub fn exponent_vector(rng: &mut ChaCha8Rng, n_primes: usize, bound: i64) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..n_primes).map(|_| rng.gen_range(-bound..=bound)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

/// `h(a/b) = log max(|a|, |b|)` for coprime `a`, `b`, from prime exponents.
pub fn height_of_exponents(exps: &[i64]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (&p, &e) in PRIMES.iter().zip(exps) {
        let l = e as f64 * (p as f64).ln();
        if e > 0 {
            num += l;
        } else {
            den -= l;
        }
    }
    num.max(den)
}

/// `2·atanh(1/k) = log((k+1)/(k−1))` to within `2^-bits`, as a pair of
/// rational bounds.
fn log_ratio_bounds(k: i64, bits: u32) -> (BigRational, BigRational) {
    let x = q(1, k);
    let x2 = &x * &x;
    let mut term = x.clone();
    let mut sum = BigRational::zero();
    let eps = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let mut j = 0i64;
    loop {
        let t = &term / BigRational::from_integer((2 * j + 1).into());
        sum += &t;
        term = &term * &x2;
        j += 1;
        // tail ≤ term/(1 − x²)
        let tail = &term / (BigRational::one() - &x2);
        if tail < eps {
            let two = q(2, 1);
            return (&sum * &two, (&sum + &tail) * &two);
        }
    }
}

/// Rational enclosures of `log 2`, `log 3` and `log 5`.
pub fn log_oracle(bits: u32) -> BTreeMap<u64, (BigRational, BigRational)> {
    // log 2 = 2 atanh(1/3), log(3/2) = 2 atanh(1/5), log(5/4) = 2 atanh(1/9)
    let l2 = log_ratio_bounds(3, bits);
    let l32 = log_ratio_bounds(5, bits);
    let l54 = log_ratio_bounds(9, bits);
    let l3 = (&l2.0 + &l32.0, &l2.1 + &l32.1);
    let l5 = (&l2.0 * q(2, 1) + &l54.0, &l2.1 * q(2, 1) + &l54.1);
    BTreeMap::from([(2, l2), (3, l3), (5, l5)])
}

/// Product of positive enclosures.
pub fn mul_bounds(a: &(BigRational, BigRational), b: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    (&a.0 * &b.0, &a.1 * &b.1)
}

/// Random unimodular matrix as a product of elementary operations.
pub fn unimodular(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut g: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n == 1 {
        return g;
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = rng.gen_range(-1..=1);
        let candidate: Vec<i64> = (0..n).map(|k| g[i][k] + c * g[j][k]).collect();
        if candidate.iter().all(|x| x.abs() <= bound) {
            g[i] = candidate;
        }
        if rng.gen_bool(0.3) {
            g.swap(i, j);
        }
    }
    g
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap()
}

pub fn abs_big(x: &BigInt) -> BigInt {
    x.abs()
}
