use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use nilper::exactmath::quad::QuadExt;
use nilper::exactmath::rational::{rat, Rational};
use nilper::exactmath::{root_of_unity_orders, IntMat};
use nilper::torus::{
    classify, computeper_trace_check, conjugate_to_linear, eper_description, equalizer_membership, notper_trace_check,
    relative_order, TorusEndo, TorusPoint,
};

fn matrix(n: usize, range: i64) -> impl Strategy<Value = IntMat> {
    prop::collection::vec(prop::collection::vec(-range..=range, n), n).prop_map(|r| {
        let refs: Vec<&[i64]> = r.iter().map(Vec::as_slice).collect();
        IntMat::from_i64(&refs)
    })
}

fn point(n: usize, max_den: i64) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((0i64..60, 1..=max_den).prop_map(|(a, d)| rat(a % d, d)), n)
}

fn matrix_and_point(range: i64, max_den: i64) -> impl Strategy<Value = (IntMat, Vec<Rational>)> {
    (1usize..=3).prop_flat_map(move |n| (matrix(n, range), point(n, max_den)))
}

fn unimodular() -> impl Strategy<Value = IntMat> {
    prop::collection::vec((0usize..2, -3i64..=3), 1..6).prop_map(|ops| {
        let mut m = IntMat::identity(2);
        for (i, k) in ops {
            let e = if i == 0 { IntMat::from_i64(&[&[1, k], &[0, 1]]) } else { IntMat::from_i64(&[&[1, 0], &[k, 1]]) };
            m = m.mul(&e);
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn orbits_terminate_and_orders_never_grow((a, q) in matrix_and_point(5, 12)) {
        let f = TorusEndo::linear_map(a.clone()).unwrap();
        let (c, orbit) = classify(&f, &q).unwrap();
        let ord = relative_order(&q);
        let steps = orbit.tail.len() + orbit.cycle.len();
        prop_assert!(BigInt::from(steps) <= num_traits::pow(ord.clone(), a.rows()).max(BigInt::one()));
        for w in c.relative_order_trace.windows(2) {
            prop_assert!(w[0].is_multiple_of(&w[1]));
        }
        if c.verdict.is_periodic() {
            prop_assert!(notper_trace_check(&orbit));
            prop_assert!(computeper_trace_check(&orbit));
        }
    }

    #[test]
    fn perd_points_are_periodic((a, q) in matrix_and_point(5, 12)) {
        let det = a.det();
        prop_assume!(!det.is_zero() && det.gcd(&relative_order(&q)).is_one());
        let f = TorusEndo::linear_map(a).unwrap();
        prop_assert!(classify(&f, &q).unwrap().0.verdict.is_periodic());
    }

    #[test]
    fn automorphisms_have_only_periodic_rational_points(a in unimodular(), q in point(2, 12)) {
        prop_assert!(a.det().abs().is_one());
        let f = TorusEndo::linear_map(a).unwrap();
        prop_assert!(classify(&f, &q).unwrap().0.verdict.is_periodic());
    }

    #[test]
    fn conjugation_preserves_orbit_shape(
        (a, x) in matrix_and_point(4, 9),
        b in prop::collection::vec((0i64..30, 1i64..=6).prop_map(|(p, d)| rat(p, d)), 3),
    ) {
        let n = a.rows();
        let f = TorusEndo::with_rational_translation(a, b[..n].to_vec()).unwrap();
        if let Some(c) = conjugate_to_linear(&f).unwrap() {
            let up = classify(&f, &x).unwrap().0.verdict;
            let y = c.to_linear(&TorusPoint::new(x.clone()));
            let down = classify(&c.linear, y.coords()).unwrap().0.verdict;
            prop_assert_eq!(up, down);
            prop_assert_eq!(c.from_linear(&y), TorusPoint::new(x));
        }
    }

    #[test]
    fn eper_membership_matches_equalizer_of_iterate(
        a in (1usize..=3).prop_flat_map(|n| matrix(n, 3)),
        coeffs in prop::collection::vec((-4i64..=4, 1i64..=3).prop_map(|(p, d)| rat(p, d)), 6),
    ) {
        prop_assume!(!a.det().is_zero());
        let n = a.rows();
        let f = TorusEndo::linear_map(a.clone()).unwrap();
        let e = eper_description(&f).unwrap();
        let k = root_of_unity_orders(n as u64).into_iter().fold(1u64, |acc, d| acc.lcm(&d));
        let ak = a.pow(k).to_rational();
        let id = IntMat::identity(n).to_rational();
        // A point of Q^n + √2·H is always a member.
        let h: Vec<Rational> = (0..n)
            .map(|j| e.subspace.basis().iter().zip(&coeffs).map(|(b, c)| &b[j] * c).sum())
            .collect();
        let inside: Vec<QuadExt> = (0..n).map(|j| QuadExt::new(coeffs[j].clone(), h[j].clone(), 2).unwrap()).collect();
        prop_assert!(e.contains(&inside).unwrap());
        prop_assert!(equalizer_membership(&ak, &id, &inside).unwrap());
        let other: Vec<QuadExt> = (0..n).map(|j| QuadExt::new(coeffs[j].clone(), coeffs[j + 3].clone(), 2).unwrap()).collect();
        prop_assert_eq!(e.contains(&other).unwrap(), equalizer_membership(&ak, &id, &other).unwrap());
    }
}

#[test]
fn cyclotomic_free_maps_have_every_rational_point_eventually_periodic() {
    for rows in [[[2i64, 1], [1, 1]], [[3, 1], [1, 1]], [[2, 0], [0, 3]]] {
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let f = TorusEndo::linear_map(IntMat::from_i64(&refs)).unwrap();
        let e = eper_description(&f).unwrap();
        assert_eq!(e.subspace.dim(), 0);
        for q in nilper::sweep::points_with_denominator(2, 12) {
            assert!(classify(&f, &q).is_ok());
            let v: Vec<QuadExt> = q.iter().cloned().map(QuadExt::rational).collect();
            assert!(e.contains(&v).unwrap());
        }
    }
}

/// Every grid corner `a/m` with `gcd(m, D) = 1` is itself periodic.
#[test]
fn grid_cubes_coprime_to_det_contain_periodic_corners() {
    let maps = [[[3i64, 1], [1, 1]], [[4, 1], [2, 1]], [[1, 3], [-1, 1]], [[5, 2], [-1, 1]], [[2, 1], [1, 3]]];
    for rows in maps {
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let a = IntMat::from_i64(&refs);
        let det = a.det().abs().to_u64().unwrap();
        let f = TorusEndo::linear_map(a).unwrap();
        for m in (1..=8u64).filter(|m| m.gcd(&det) == 1) {
            for i in 0..m {
                for j in 0..m {
                    let q = [rat(i as i64, m as i64), rat(j as i64, m as i64)];
                    assert!(classify(&f, &q).unwrap().0.verdict.is_periodic(), "{rows:?} {q:?}");
                }
            }
        }
    }
}
