//! Integer factorization for rational inputs.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64_into(n: u64, out: &mut BTreeMap<u64, u32>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = pollard_rho(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

/// Prime factorization of a positive integer.
///
/// Small factors are removed by trial division; the cofactor left over must
/// fit in 64 bits.
pub fn factor_biguint(n: &BigUint) -> Result<BTreeMap<u64, u32>> {
    if n.is_zero() {
        return Err(Error::invalid("cannot factor zero"));
    }
    let mut out = BTreeMap::new();
    let mut rest = n.clone();
    for p in 2u64..1000 {
        if rest.bits() <= 64 {
            break;
        }
        let bp = BigUint::from(p);
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            *out.entry(p).or_insert(0) += 1;
        }
    }
    let Some(small) = rest.to_u64() else {
        return Err(Error::invalid(format!(
            "integer {n} has a cofactor beyond 64 bits that cannot be factored"
        )));
    };
    factor_u64_into(small, &mut out);
    Ok(out)
}

/// Factors a nonzero rational into signed prime exponents; the sign is dropped.
pub fn factor_rational(q: &BigRational) -> Result<BTreeMap<u64, i64>> {
    if q.is_zero() {
        return Err(Error::invalid("zero is not an element of the multiplicative group"));
    }
    let mut out: BTreeMap<u64, i64> = BTreeMap::new();
    for (p, e) in factor_biguint(q.numer().magnitude())? {
        *out.entry(p).or_insert(0) += e as i64;
    }
    for (p, e) in factor_biguint(q.denom().magnitude())? {
        *out.entry(p).or_insert(0) -= e as i64;
    }
    out.retain(|_, e| *e != 0);
    Ok(out)
}

/// Exact `p^e` for a signed exponent.
pub fn prime_power(p: u64, e: i64) -> BigRational {
    let base = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_small_and_large() {
        let f = factor_biguint(&BigUint::from(360u32)).unwrap();
        assert_eq!(f, BTreeMap::from([(2, 3), (3, 2), (5, 1)]));
        let n = BigUint::from(1_000_000_007u64) * BigUint::from(998_244_353u64);
        let f = factor_biguint(&n).unwrap();
        assert_eq!(f, BTreeMap::from([(998_244_353, 1), (1_000_000_007, 1)]));
        assert!(factor_biguint(&BigUint::from(1u32)).unwrap().is_empty());
    }

    #[test]
    fn rational_factorization_drops_sign() {
        let q = BigRational::new((-12).into(), 5.into());
        assert_eq!(
            factor_rational(&q).unwrap(),
            BTreeMap::from([(2, 2), (3, 1), (5, -1)])
        );
        assert!(factor_rational(&BigRational::zero()).is_err());
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (1..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751));
    }
}
