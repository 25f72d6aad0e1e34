mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use subgroup_height::certificate::agree;
use subgroup_height::intlinalg::{exact_det, gram_det_and_minor_gcd, hnf_kernel_basis, lll_reduce_with_transform};
use subgroup_height::{
    build_presentation, delta_integral, group_height, hadamard_bound, mcmullen_volume, successive_minima,
    sunit_height, total_variation, weil_height, GroupElement, IntMatrix, PrecisionContext,
    SUnitContext, SimpleSystem, ZonotopeSpec,
};

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn exps(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, len).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| q(n, d))
}

fn int_matrix_strategy(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, cols), rows)
}

fn system_of(rows: &[Vec<i64>], masses: &[i64]) -> Option<SimpleSystem> {
    let m = rat_matrix(rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect());
    SimpleSystem::from_rational(masses.iter().map(|&w| q(w, 1)).collect(), &m, &ctx()).ok()
}

fn big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_has_the_same_height(e in exps(6)) {
        let a = element(&e);
        prop_assert_eq!(weil_height(&a, &ctx()).unwrap(), weil_height(&a.inverse(), &ctx()).unwrap());
    }

    #[test]
    fn height_scales_with_rational_powers(e in exps(6), r in small_rational()) {
        let a = element(&e);
        let h = weil_height(&a, &ctx()).unwrap();
        prop_assert_eq!(weil_height(&a.pow(&r), &ctx()).unwrap(), h.scale(&r.abs()));
    }

    #[test]
    fn twice_height_is_total_variation(e in exps(6)) {
        let a = element(&e);
        let h = weil_height(&a, &ctx()).unwrap();
        prop_assert_eq!(total_variation(&a, &ctx()).unwrap(), h.scale(&q(2, 1)));
        prop_assert!((h.mid_f64() - height_of_exponents(&e)).abs() < 1e-9);
    }

    #[test]
    fn enclosures_nest_under_doubled_precision(e in exps(6)) {
        let h = weil_height(&element(&e), &ctx()).unwrap();
        let coarse = h.to_interval(128);
        let fine = h.to_interval(256);
        prop_assert!(coarse.contains(&fine));
    }

    #[test]
    fn kernel_basis_is_saturated(rows in int_matrix_strategy(3, 5, 4)) {
        let a = int_rows(&rows);
        let k = hnf_kernel_basis(&a);
        for z in k.to_cols() {
            for r in &rows {
                let dot: BigInt = r.iter().zip(&z).map(|(&x, y)| BigInt::from(x) * y).sum();
                prop_assert!(dot.is_zero());
            }
        }
        let l = k.cols();
        prop_assert_eq!(l, 5 - int_rank(&rows));
        if l > 0 {
            let kt: Vec<Vec<BigInt>> = k.to_cols();
            let minors: Vec<BigInt> = subsets(5, l)
                .iter()
                .map(|idx| leibniz_det(&kt.iter().map(|c| idx.iter().map(|&j| c[j].clone()).collect()).collect::<Vec<_>>()))
                .collect();
            prop_assert_eq!(gcd_all(&minors), BigInt::one());
        }
    }

    #[test]
    fn cauchy_binet(m in 1usize..=3, extra in 0usize..=3, seed in any::<u64>()) {
        let n = m + extra;
        let mut r = rng(seed);
        let rows: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| rand::Rng::gen_range(&mut r, -5..=5)).collect()).collect();
        prop_assume!(int_rank(&rows) == m);
        let minors: Vec<BigInt> = subsets(n, m)
            .iter()
            .map(|idx| leibniz_det(&rows.iter().map(|row| idx.iter().map(|&j| BigInt::from(row[j])).collect()).collect::<Vec<_>>()))
            .collect();
        let (gram, d) = gram_det_and_minor_gcd(&int_rows(&rows)).unwrap();
        prop_assert_eq!(gram, minors.iter().map(|x| x * x).sum::<BigInt>());
        prop_assert_eq!(d, gcd_all(&minors));
    }

    #[test]
    fn determinant_matches_leibniz(rows in int_matrix_strategy(4, 4, 6)) {
        prop_assert_eq!(exact_det(&int_rows(&rows)).unwrap(), leibniz_det(&big_rows(&rows)));
    }

    #[test]
    fn lll_transform_is_unimodular(rows in int_matrix_strategy(3, 3, 20)) {
        prop_assume!(int_rank(&rows) == 3);
        let b = int_rows(&rows);
        let (reduced, t) = lll_reduce_with_transform(&b).unwrap();
        prop_assert_eq!(leibniz_det(&t.to_rows()).abs(), BigInt::one());
        prop_assert_eq!(b.mul(&t).unwrap(), reduced);
    }

    #[test]
    fn delta_integral_is_unimodular_invariant(rows in int_matrix_strategy(3, 5, 4), seed in any::<u64>()) {
        let Some(s) = system_of(&rows, &[1, 2, 1, 3, 1]) else { return Ok(()) };
        let g = int_rows(&unimodular(&mut rng(seed), 3, 3));
        let t = s.transform(&g, &ctx()).unwrap();
        prop_assert_eq!(delta_integral(&s, &ctx()).unwrap(), delta_integral(&t, &ctx()).unwrap());
    }

    #[test]
    fn delta_integral_below_hadamard(rows in int_matrix_strategy(3, 6, 4)) {
        let Some(s) = system_of(&rows, &[1, 1, 2, 1, 3, 1]) else { return Ok(()) };
        let d = delta_integral(&s, &ctx()).unwrap();
        let h = hadamard_bound(&s, &ctx()).unwrap();
        prop_assert!(d.mid_f64() <= h.mid_f64() * (1.0 + 1e-12));
        if s.has_disjoint_support() {
            prop_assert_eq!(d, h);
        }
    }

    #[test]
    fn mcmullen_scaling(rows in int_matrix_strategy(2, 4, 4), c in 1i64..=5, col in 0usize..4) {
        prop_assume!(int_rank(&rows) == 2);
        let vol = |rows: &[Vec<BigRational>]| {
            mcmullen_volume(&ZonotopeSpec::from_rational(&rat_matrix(rows.to_vec())).unwrap(), &ctx()).unwrap()
        };
        let base: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect();
        let v = vol(&base);
        let all: Vec<Vec<BigRational>> = base.iter().map(|r| r.iter().map(|x| x * q(c, 1)).collect()).collect();
        prop_assert_eq!(vol(&all), v.scale(&q(c * c, 1)));
        let mut one = base.clone();
        for r in &mut one {
            r[col] = &r[col] * q(c, 1);
        }
        let v1 = vol(&one).mid_f64();
        prop_assert!(v1 <= c as f64 * v.mid_f64() * (1.0 + 1e-12) && v1 >= v.mid_f64() * (1.0 - 1e-12));
        let square: Vec<Vec<BigRational>> = base.iter().map(|r| r[..2].to_vec()).collect();
        if rational_rank(&square) == 2 {
            let mut sc = square.clone();
            for r in &mut sc {
                r[0] = &r[0] * q(c, 1);
            }
            prop_assert_eq!(vol(&sc), vol(&square).scale(&q(c, 1)));
        }
    }

    #[test]
    fn norm_is_a_norm(rows in int_matrix_strategy(3, 4, 4), x in prop::collection::vec(-4i64..=4, 3), y in prop::collection::vec(-4i64..=4, 3), k in -3i64..=3) {
        let Some(s) = system_of(&rows, &[1, 2, 3, 1]) else { return Ok(()) };
        let c = ctx();
        let big = |v: &[i64]| v.iter().map(|&a| BigInt::from(a)).collect::<Vec<_>>();
        let sum: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let nx = s.norm(&big(&x), &c).unwrap();
        let ny = s.norm(&big(&y), &c).unwrap();
        let ns = s.norm(&big(&sum), &c).unwrap();
        prop_assert!(ns.compare(&(&nx + &ny), &c).unwrap() != std::cmp::Ordering::Greater);
        let kx: Vec<i64> = x.iter().map(|a| a * k).collect();
        prop_assert_eq!(s.norm(&big(&kx), &c).unwrap(), nx.scale(&q(k.abs(), 1)));
    }

    #[test]
    fn minima_are_stable_under_unimodular_change(rows in int_matrix_strategy(2, 4, 4), seed in any::<u64>()) {
        let Some(s) = system_of(&rows, &[1, 1, 2, 1]) else { return Ok(()) };
        let g = int_rows(&unimodular(&mut rng(seed), 2, 3));
        let t = s.transform(&g, &ctx()).unwrap();
        let a = successive_minima(&s, &ctx()).unwrap();
        let b = successive_minima(&t, &ctx()).unwrap();
        prop_assert!(a.exhaustive && b.exhaustive);
        prop_assert!(a.norms[0].mid_f64() > 0.0);
        for (x, y) in a.norms.iter().zip(&b.norms) {
            prop_assert!(agree(x, y, 256), "{} vs {}", x, y);
        }
    }

    #[test]
    fn rank_one_group_height_is_weil_height(e in exps(6)) {
        let a = element(&e);
        let p = build_presentation(std::slice::from_ref(&a), &ctx()).unwrap();
        prop_assert_eq!(group_height(&p, &ctx()).unwrap(), weil_height(&a, &ctx()).unwrap());
    }

    #[test]
    fn exponent_rank_matches_certified_rank(t in prop::collection::vec(exps(4), 1..=4)) {
        let gens: Vec<GroupElement> = t.iter().map(|e| element(e)).collect();
        let p = build_presentation(&gens, &ctx()).unwrap();
        prop_assert_eq!(p.rank(), int_rank(&t));
    }

    #[test]
    fn group_height_is_basis_independent(t in prop::collection::vec(exps(6), 1..=4), seed in any::<u64>()) {
        prop_assume!(int_rank(&t) == t.len());
        let n = t.len();
        let g = unimodular(&mut rng(seed), n, 3);
        let t2: Vec<Vec<i64>> = g
            .iter()
            .map(|row| (0..6).map(|k| row.iter().zip(&t).map(|(c, e)| c * e[k]).sum()).collect())
            .collect();
        let h = |t: &[Vec<i64>]| {
            group_height(&build_presentation(&t.iter().map(|e| element(e)).collect::<Vec<_>>(), &ctx()).unwrap(), &ctx()).unwrap()
        };
        prop_assert_eq!(h(&t), h(&t2));
    }
}

#[test]
fn sunit_heights_match_group_heights() {
    let primes = [2u64, 3, 5, 7, 11];
    for k in 1..=3 {
        for idx in subsets(primes.len(), k) {
            let ps: Vec<u64> = idx.iter().map(|&i| primes[i]).collect();
            let r = sunit_height(&SUnitContext::rational(&ps).unwrap(), &ctx()).unwrap();
            assert_eq!(r.height, r.group_height, "S = inf,{ps:?}");
        }
    }
}

#[test]
fn identity_tuple_has_unit_gcd() {
    // A·B = 1 forces D = 1.
    let a = int_rows(&[vec![1, 0, 2], vec![0, 1, -3]]);
    let (_, d) = gram_det_and_minor_gcd(&a).unwrap();
    assert_eq!(d, BigInt::one());
    let k: IntMatrix = hnf_kernel_basis(&a);
    assert_eq!(k.cols(), 1);
}
