use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{certified_rank, ExactMatrix};
use crate::error::{Error, Result};
use crate::logpoly::Real;
use crate::matrix::Matrix;
use crate::precision::PrecisionContext;

type Vector = Vec<Real>;

fn dot(a: &[Real], b: &[Real]) -> Real {
    a.iter().zip(b).fold(Real::zero(), |acc, (x, y)| acc + x * y)
}

fn cross(a: &[Real], b: &[Real]) -> Vector {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn det_of(vs: &[&Vector]) -> Result<Real> {
    let n = vs.len();
    Matrix::from_fn(n, n, |i, j| vs[j][i].clone()).det_subsets()
}

fn is_zero_vec(v: &[Real], ctx: &PrecisionContext) -> Result<bool> {
    for x in v {
        if x.sign(ctx)? != Ordering::Equal {
            return Ok(false);
        }
    }
    Ok(true)
}

fn same_direction(a: &Vector, b: &Vector, ctx: &PrecisionContext) -> Result<bool> {
    let parallel = if a.len() == 2 {
        det_of(&[a, b])?.sign(ctx)? == Ordering::Equal
    } else {
        is_zero_vec(&cross(a, b), ctx)?
    };
    Ok(parallel && dot(a, b).sign(ctx)? == Ordering::Greater)
}

fn rank_of(vs: &[&Vector], n: usize, ctx: &PrecisionContext) -> Result<usize> {
    let m = Matrix::from_fn(n, vs.len(), |i, j| vs[j][i].clone());
    certified_rank(&m, ctx)
}

/// Exact volume of `B = {ξ : Σ_m w_m·|⟨ξ, u_m⟩| ≤ 1}` for `N ≤ 3`.
///
/// The hyperplanes `⟨ξ, u_m⟩ = 0` cut `R^N` into cones on which the norm is
/// the linear form `⟨ξ, g_σ⟩`, `g_σ = Σ_m σ_m w_m u_m`. Each cone meets `B`
/// in a pyramid over the polygon spanned by its extreme rays, which is
/// triangulated from one vertex.
pub fn primal_ball_volume_exact(
    u: &ExactMatrix,
    weights: Option<&[BigRational]>,
    ctx: &PrecisionContext,
) -> Result<Real> {
    let (m, n) = (u.rows(), u.cols());
    if n == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if n > 3 {
        return Err(Error::DimensionTooLarge { dim: n, limit: 3 });
    }
    if m > ctx.max_atoms {
        return Err(Error::DimensionTooLarge { dim: m, limit: ctx.max_atoms });
    }
    let mut w: Vec<Vector> = Vec::new();
    for r in 0..m {
        let row: Vector = match weights {
            Some(ws) => u.row(r).iter().map(|x| x.scale(&ws[r])).collect(),
            None => u.row(r).to_vec(),
        };
        if !is_zero_vec(&row, ctx)? {
            w.push(row);
        }
    }
    let refs: Vec<&Vector> = w.iter().collect();
    let found = if refs.is_empty() { 0 } else { rank_of(&refs, n, ctx)? };
    if found < n {
        return Err(Error::RankDeficient { expected: n, found });
    }
    if n == 1 {
        let mut s = Real::zero();
        for row in &w {
            s = s + row[0].abs(ctx)?;
        }
        return Real::from_i64(2)
            .checked_div(&s, ctx.bits)
            .ok_or_else(|| Error::exhausted(ctx.bits, "norm of the unit vector"));
    }

    let mut candidates: Vec<Vector> = Vec::new();
    if n == 2 {
        for row in &w {
            candidates.push(vec![-row[1].clone(), row[0].clone()]);
        }
    } else {
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                let c = cross(&w[i], &w[j]);
                if !is_zero_vec(&c, ctx)? {
                    candidates.push(c);
                }
            }
        }
    }
    let mut rays: Vec<Vector> = Vec::new();
    for c in candidates {
        for r in [c.iter().map(|x| -x).collect::<Vector>(), c] {
            let mut dup = false;
            for existing in &rays {
                if same_direction(existing, &r, ctx)? {
                    dup = true;
                    break;
                }
            }
            if !dup {
                rays.push(r);
            }
        }
    }
    let signs: Vec<Vec<Ordering>> = rays
        .iter()
        .map(|r| w.iter().map(|row| dot(r, row).sign(ctx)).collect::<Result<_>>())
        .collect::<Result<_>>()?;

    let k = w.len();
    let mut total = Real::zero();
    for mask in 0u64..(1u64 << k) {
        let sigma: Vec<bool> = (0..k).map(|b| mask & (1 << b) != 0).collect();
        let cell: Vec<usize> = (0..rays.len())
            .filter(|&r| {
                (0..k).all(|c| match signs[r][c] {
                    Ordering::Equal => true,
                    Ordering::Greater => sigma[c],
                    Ordering::Less => !sigma[c],
                })
            })
            .collect();
        if cell.len() < n {
            continue;
        }
        let cell_refs: Vec<&Vector> = cell.iter().map(|&r| &rays[r]).collect();
        if rank_of(&cell_refs, n, ctx)? < n {
            continue;
        }
        let g: Vector = (0..n)
            .map(|i| {
                (0..k).fold(Real::zero(), |acc, c| {
                    if sigma[c] {
                        acc + &w[c][i]
                    } else {
                        acc - &w[c][i]
                    }
                })
            })
            .collect();
        let heights: Vec<Real> = cell_refs.iter().map(|r| dot(r, &g)).collect();
        total = total + cone_volume(&cell_refs, &heights, &g, ctx)?;
    }
    Ok(total)
}

fn divide(num: Real, den: Real, ctx: &PrecisionContext) -> Result<Real> {
    num.checked_div(&den, ctx.bits)
        .ok_or_else(|| Error::exhausted(ctx.bits, "cone height enclosure contains zero"))
}

fn cone_volume(rays: &[&Vector], t: &[Real], g: &Vector, ctx: &PrecisionContext) -> Result<Real> {
    if rays.len() == 2 && g.len() == 2 {
        let d = det_of(&[rays[0], rays[1]])?.abs(ctx)?;
        return divide(d, (&t[0] * &t[1]).scale(&BigRational::from_integer(BigInt::from(2))), ctx);
    }
    // order the section points p_i = r_i / t_i around p_0
    let r0 = rays[0];
    let rel: Vec<Vector> = (1..rays.len())
        .map(|i| (0..3).map(|c| &rays[i][c] * &t[0] - &r0[c] * &t[i]).collect())
        .collect();
    let mut order: Vec<usize> = Vec::new();
    for i in 0..rel.len() {
        let mut pos = order.len();
        for (slot, &j) in order.iter().enumerate() {
            if det_of(&[&rel[i], &rel[j], g])?.sign(ctx)? == Ordering::Less {
                pos = slot;
                break;
            }
        }
        order.insert(pos, i);
    }
    let mut vol = Real::zero();
    for pair in order.windows(2) {
        let (a, b) = (pair[0] + 1, pair[1] + 1);
        let d = det_of(&[r0, rays[a], rays[b]])?.abs(ctx)?;
        let den = (&(&t[0] * &t[a]) * &t[b]).scale(&BigRational::from_integer(BigInt::from(6)));
        vol = vol + divide(d, den, ctx)?;
    }
    Ok(vol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn mat(rows: &[&[i64]]) -> ExactMatrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Real::from_i64(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn cross_polytopes() {
        let ctx = PrecisionContext::default();
        let v2 = primal_ball_volume_exact(&mat(&[&[1, 0], &[0, 1]]), None, &ctx).unwrap();
        assert_eq!(v2, Real::from_i64(2));
        let v3 = primal_ball_volume_exact(&mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), None, &ctx).unwrap();
        assert_eq!(v3, Real::from_rational(q(4, 3)));
        let half = primal_ball_volume_exact(&mat(&[&[2, 0], &[0, 2]]), None, &ctx).unwrap();
        assert_eq!(half, Real::from_rational(q(1, 2)));
        let seg = primal_ball_volume_exact(&mat(&[&[2], &[-3]]), None, &ctx).unwrap();
        assert_eq!(seg, Real::from_rational(q(2, 5)));
    }

    #[test]
    fn hexagonal_norm() {
        // |x| + |y| + |x + y| ≤ 1 is a hexagon of area 3/4
        let ctx = PrecisionContext::default();
        let v = primal_ball_volume_exact(&mat(&[&[1, 0], &[0, 1], &[1, 1]]), None, &ctx).unwrap();
        assert_eq!(v, Real::from_rational(q(3, 4)));
    }

    #[test]
    fn three_dimensional_against_monte_carlo() {
        let ctx = PrecisionContext::default();
        let rows: &[&[i64]] = &[&[1, 0, 2], &[0, 1, -1], &[1, 1, 0], &[2, -1, 1]];
        let v = primal_ball_volume_exact(&mat(rows), None, &ctx).unwrap();
        let f: Matrix<f64> = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect()).unwrap();
        let e = super::super::monte_carlo_primal_ball(&f, &[1.0; 4], 400_000, 5).unwrap();
        assert!((v.mid_f64() - e.mean).abs() <= 4.0 * e.sigma, "{} vs {e:?}", v.mid_f64());
    }
}
