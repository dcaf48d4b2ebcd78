use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

use nilper::exactmath::rational::{denominator_lcm, int, prime_support, rat, Rational};
use nilper::exactmath::RatMat;
use nilper::fixture::shipped;
use nilper::nil::{
    bch_pow, classify_nil, make_endo, n_one_over_s, subgroup_index, Class2Group, LatticeSubgroup,
};
use nilper::sweep::{scan, ScanOptions};

/// Free class-2 group on three generators: `[e0,e1] = e3`, `[e0,e2] = e4`, `[e1,e2] = e5`.
fn free_class2() -> Class2Group {
    let e = |k: usize| (0..6).map(|i| int((i == k) as i64)).collect::<Vec<_>>();
    Class2Group::from_brackets(6, &[(0, 1, e(3)), (0, 2, e(4)), (1, 2, e(5))]).unwrap()
}

fn heisenberg() -> &'static (Class2Group, LatticeSubgroup) {
    static H: OnceLock<(Class2Group, LatticeSubgroup)> = OnceLock::new();
    H.get_or_init(|| {
        let g = Class2Group::heisenberg();
        let n = LatticeSubgroup::standard(&g).unwrap();
        (g, n)
    })
}

fn coords(dim: usize, max_den: i64) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-20i64..=20, 1..=max_den).prop_map(|(a, d)| rat(a, d)), dim)
}

/// Coordinates with a common denominator `s0 ≤ max_s0`.
fn element_with_s0(max_s0: i64) -> impl Strategy<Value = Vec<Rational>> {
    (1..=max_s0).prop_flat_map(|s| prop::collection::vec((-3 * s..=3 * s).prop_map(move |a| rat(a, s)), 3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn bch_product_is_associative(x in coords(3, 6), y in coords(3, 6), z in coords(3, 6)) {
        let g = &heisenberg().0;
        let (x, y, z) = (g.element(x).unwrap(), g.element(y).unwrap(), g.element(z).unwrap());
        prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
    }

    #[test]
    fn bch_product_is_associative_on_free_group(x in coords(6, 4), y in coords(6, 4), z in coords(6, 4)) {
        let g = free_class2();
        let (x, y, z) = (g.element(x).unwrap(), g.element(y).unwrap(), g.element(z).unwrap());
        prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
        prop_assert!(g.mul(&x, &g.inv(&x)).is_identity());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn powers_scale_the_logarithm(x in coords(3, 6), s in -20i64..=20) {
        let g = &heisenberg().0;
        let e = g.element(x.clone()).unwrap();
        let scaled = g.element(x.iter().map(|c| c * int(s)).collect()).unwrap();
        prop_assert_eq!(bch_pow(g, &e, s), scaled.clone());
        prop_assert_eq!(g.pow(&e, &int(s)), scaled);
    }

    #[test]
    fn relative_order_is_bounded_and_smooth(x in element_with_s0(6)) {
        let (g, n) = heisenberg();
        let s0 = denominator_lcm(&x);
        let ord = n.relative_order(&g.element(x).unwrap()).unwrap();
        prop_assert!(ord <= num_traits::pow(BigInt::from(2) * &s0, 3));
        let allowed = prime_support(&(BigInt::from(2) * &s0));
        prop_assert!(prime_support(&ord).iter().all(|p| allowed.contains(p)));
    }

    #[test]
    fn orbit_length_is_bounded_by_root_index(x in element_with_s0(4), which in 0usize..2) {
        let (g, n) = heisenberg();
        let m = if which == 0 {
            RatMat::from_rows(vec![vec![int(2), int(1), int(0)], vec![int(1), int(1), int(0)], vec![int(0), rat(1, 2), int(1)]]).unwrap()
        } else {
            RatMat::from_rows(vec![vec![int(2), int(0), int(0)], vec![int(0), int(2), int(0)], vec![int(0), int(0), int(4)]]).unwrap()
        };
        let delta = make_endo(g, m, n).unwrap();
        let h = g.element(x).unwrap();
        let ord = n.relative_order(&h).unwrap().to_u64().unwrap();
        let (_, orbit) = classify_nil(&delta, n, &h).unwrap();
        let index = subgroup_index(n, &n_one_over_s(n, ord).unwrap()).unwrap();
        prop_assert!(BigInt::from(orbit.tail.len() + orbit.cycle.len()) <= index);
    }

    /// Endomorphisms `[[A, 0], [c, det A]]` of the Heisenberg group with
    /// `c_i ≡ a_1i a_2i / 2 (mod Z)` preserve the standard lattice.
    #[test]
    fn endo_determinant_equals_lattice_index(a in prop::collection::vec(-3i64..=3, 4), shift in prop::collection::vec(-2i64..=2, 2)) {
        let (g, n) = heisenberg();
        let det = a[0] * a[3] - a[1] * a[2];
        prop_assume!(det != 0);
        let c0 = rat(a[0] * a[2], 2) + int(shift[0]);
        let c1 = rat(a[1] * a[3], 2) + int(shift[1]);
        let m = RatMat::from_rows(vec![
            vec![int(a[0]), int(a[1]), int(0)],
            vec![int(a[2]), int(a[3]), int(0)],
            vec![c0, c1, int(det)],
        ])
        .unwrap();
        let delta = make_endo(g, m, n).unwrap();
        let index = subgroup_index(&delta.image_lattice(n).unwrap(), n).unwrap();
        prop_assert_eq!(delta.integer_det().unwrap().abs(), index);
        prop_assert_eq!(BigInt::from(det).pow(2).abs(), delta.integer_det().unwrap().abs());
    }
}

#[test]
fn root_subgroup_indices_have_prime_support_of_s_and_cauchy_witnesses() {
    let (_, n) = heisenberg();
    for s in [2u64, 3, 4, 6] {
        let root = n_one_over_s(n, s).unwrap();
        let index = subgroup_index(n, &root).unwrap();
        let allowed = prime_support(&BigInt::from(s));
        let primes = prime_support(&index);
        assert!(primes.iter().all(|p| allowed.contains(p)), "s = {s}, index {index}");
        let cosets = n.quotient_elements(&root).unwrap();
        assert_eq!(BigInt::from(cosets.len()), index);
        for p in primes {
            assert!(
                cosets.iter().any(|x| n.relative_order(x).unwrap() == p),
                "s = {s}: no element of relative order {p}"
            );
        }
        assert!(cosets.iter().all(|x| root.contains(x)));
    }
}

#[test]
fn nil_sweeps_satisfy_perd_and_subeper() {
    for name in ["heisenberg", "phi2"] {
        let report = scan(&shipped(name).unwrap(), ScanOptions { max_den: 6, workers: 2 }, None).unwrap();
        for a in &report.assertions {
            assert!(a.passed && a.checked > 0, "{name}: {a:?}");
        }
    }
}
