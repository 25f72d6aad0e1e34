//! Integer and rational linear algebra: Hermite normal forms, saturated
//! kernels, determinants, Gram determinants and lattice reduction.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::logpoly::Real;
use crate::matrix::Matrix;
use crate::scalar::OrderedField;

pub type IntMatrix = Matrix<BigInt>;

/// Column Hermite normal form `H = A·U` with `U` unimodular.
///
/// `H` is lower echelon: each pivot is positive and entries to the left of a
/// pivot in its row lie in `[0, pivot)`. Trailing columns of `H` are zero and
/// the matching columns of `U` span the integer kernel of `A`.
pub fn column_hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.to_cols();
    let mut u: Vec<Vec<BigInt>> = IntMatrix::identity(n).to_cols();
    let mut c = 0;
    for i in 0..m {
        if c == n {
            break;
        }
        for k in c + 1..n {
            if h[k][i].is_zero() {
                continue;
            }
            let (x, y) = (h[c][i].clone(), h[k][i].clone());
            let e = x.extended_gcd(&y);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let (xa, yb) = (&x / &g, &y / &g);
            combine(&mut h, c, k, &s, &t, &yb, &xa);
            combine(&mut u, c, k, &s, &t, &yb, &xa);
        }
        if h[c][i].is_zero() {
            continue;
        }
        if h[c][i].is_negative() {
            negate(&mut h[c]);
            negate(&mut u[c]);
        }
        let piv = h[c][i].clone();
        for j in 0..c {
            let q = h[j][i].div_floor(&piv);
            if !q.is_zero() {
                axpy(&mut h, j, c, &q);
                axpy(&mut u, j, c, &q);
            }
        }
        c += 1;
    }
    (
        IntMatrix::from_cols(m, &h).expect("consistent shape"),
        IntMatrix::from_cols(n, &u).expect("consistent shape"),
        c,
    )
}

// (col_c, col_k) <- (s·col_c + t·col_k, -yb·col_c + xa·col_k)
fn combine(v: &mut [Vec<BigInt>], c: usize, k: usize, s: &BigInt, t: &BigInt, yb: &BigInt, xa: &BigInt) {
    let len = v[c].len();
    for r in 0..len {
        let a = v[c][r].clone();
        let b = v[k][r].clone();
        v[c][r] = s * &a + t * &b;
        v[k][r] = xa * &b - yb * &a;
    }
}

// col_j -= q·col_c
fn axpy(v: &mut [Vec<BigInt>], j: usize, c: usize, q: &BigInt) {
    for r in 0..v[j].len() {
        let d = q * &v[c][r];
        v[j][r] -= d;
    }
}

fn negate(v: &mut [BigInt]) {
    for x in v.iter_mut() {
        *x = -&*x;
    }
}

/// Row Hermite normal form; zero rows are dropped.
pub fn row_hnf(a: &IntMatrix) -> IntMatrix {
    let (h, _, r) = column_hnf(&a.transpose());
    let idx: Vec<usize> = (0..r).collect();
    h.select_cols(&idx).transpose()
}

/// Saturated basis (as columns) of `{z ∈ Z^n : A z = 0}`, in row Hermite form.
pub fn hnf_kernel_basis(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    let (_, u, r) = column_hnf(a);
    if r == n {
        return IntMatrix::zeros(n, 0);
    }
    let idx: Vec<usize> = (r..n).collect();
    let k = u.select_cols(&idx);
    row_hnf(&k.transpose()).transpose()
}

/// Rank of an integer matrix.
pub fn rank(a: &IntMatrix) -> usize {
    column_hnf(a).2
}

/// Fraction-free determinant of an integer matrix.
pub fn exact_det(a: &IntMatrix) -> Result<BigInt> {
    a.det_bareiss()
}

/// Determinant of a matrix of log-values; exact when all entries are exact.
pub fn exact_det_real(a: &Matrix<Real>) -> Result<Real> {
    a.det_subsets()
}

/// `(det(A·Aᵀ), D)` with `D` the gcd of the maximal minors, checked against
/// the Cauchy–Binet expansion.
pub fn gram_det_and_minor_gcd(a: &IntMatrix) -> Result<(BigInt, BigInt)> {
    let (m, n) = (a.rows(), a.cols());
    if m > n {
        return Err(Error::RankDeficient {
            expected: m,
            found: rank(a),
        });
    }
    let r = rank(a);
    if r < m {
        return Err(Error::RankDeficient { expected: m, found: r });
    }
    let gram = a.mul(&a.transpose())?.det_bareiss()?;
    let mut sum = BigInt::zero();
    let mut g = BigInt::zero();
    for cols in (0..n).combinations(m) {
        let d = a.select_cols(&cols).det_bareiss()?;
        sum += &d * &d;
        g = g.gcd(&d);
    }
    if sum != gram {
        return Err(Error::Verification(format!(
            "Cauchy–Binet mismatch: det(AAᵀ) = {gram}, sum of squared minors = {sum}"
        )));
    }
    Ok((gram, g))
}

/// Index `|det B|` of the lattice spanned by the columns of `B`.
pub fn sublattice_index(b: &IntMatrix) -> Result<BigInt> {
    if !b.is_square() {
        return Err(Error::invalid("sublattice basis must be square"));
    }
    let d = b.det_bareiss()?;
    if d.is_zero() {
        return Err(Error::RankDeficient {
            expected: b.rows(),
            found: rank(b),
        });
    }
    Ok(d.abs())
}

/// LLL reduction over an arbitrary positive definite Gram matrix.
///
/// Works on coefficient vectors: the returned unimodular `T` has columns
/// `t_i` with inner products `t_iᵀ·G·t_j`. Iterations are capped, so with
/// floating point Gram matrices the result is a heuristic.
pub fn lll_gram<T: OrderedField>(gram: &Matrix<T>, delta: &T) -> IntMatrix {
    let n = gram.rows();
    let mut basis: Vec<Vec<BigInt>> = IntMatrix::identity(n).to_cols();
    let inner = |a: &[BigInt], b: &[BigInt]| -> T {
        let mut s = T::zero();
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                s = s + T::from_bigint(&a[i]) * gram.get(i, j).clone() * T::from_bigint(&b[j]);
            }
        }
        s
    };
    let gso = |basis: &[Vec<BigInt>]| -> (Vec<Vec<T>>, Vec<T>) {
        let mut mu = vec![vec![T::zero(); n]; n];
        let mut bn: Vec<T> = Vec::with_capacity(n);
        for i in 0..n {
            let mut norm = inner(&basis[i], &basis[i]);
            for j in 0..i {
                let mut m = inner(&basis[i], &basis[j]);
                for k in 0..j {
                    m = m - mu[j][k].clone() * mu[i][k].clone() * bn[k].clone();
                }
                let mij = m / bn[j].clone();
                norm = norm - mij.clone() * mij.clone() * bn[j].clone();
                mu[i][j] = mij;
            }
            bn.push(norm);
        }
        (mu, bn)
    };
    let mut k = 1;
    let mut iterations = 0;
    while k < n && iterations < 100_000 {
        iterations += 1;
        let (mu, _) = gso(&basis);
        let mut mu_k = mu[k].clone();
        for j in (0..k).rev() {
            let r = mu_k[j].round_to_int();
            if r.is_zero() {
                continue;
            }
            let bj = basis[j].clone();
            for (x, y) in basis[k].iter_mut().zip(&bj) {
                *x -= &r * y;
            }
            let rt = T::from_bigint(&r);
            for i in 0..j {
                mu_k[i] = mu_k[i].clone() - rt.clone() * mu[j][i].clone();
            }
            mu_k[j] = mu_k[j].clone() - rt;
        }
        let (mu, bn) = gso(&basis);
        let m = mu[k][k - 1].clone();
        if bn[k] >= (delta.clone() - m.clone() * m) * bn[k - 1].clone() {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    IntMatrix::from_cols(n, &basis).expect("consistent shape")
}

/// LLL-reduced basis of the lattice spanned by the columns of `b`, with the
/// unimodular change of basis (`reduced = b·T`).
pub fn lll_reduce_with_transform(b: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let n = b.cols();
    if rank(b) < n {
        return Err(Error::RankDeficient { expected: n, found: rank(b) });
    }
    let br = b.map(|x| BigRational::from_integer(x.clone()));
    let gram = br.transpose().mul(&br)?;
    let t = lll_gram(&gram, &BigRational::new(3.into(), 4.into()));
    if t.det_bareiss()?.abs() != BigInt::one() {
        return Err(Error::Verification("lattice reduction changed the lattice".into()));
    }
    Ok((b.mul(&t)?, t))
}

/// LLL-reduced basis of the lattice spanned by the columns of `b`.
pub fn lll_reduce(b: &IntMatrix) -> Result<IntMatrix> {
    lll_reduce_with_transform(b).map(|(r, _)| r)
}

/// Builds an integer matrix from `i64` rows.
pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
    )
    .expect("rows of equal length")
}
