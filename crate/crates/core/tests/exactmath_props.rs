use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use nilper::exactmath::quad::QuadExt;
use nilper::exactmath::rational::{rat, Rational};
use nilper::exactmath::{hnf, rational_kernel, root_of_unity_orders, snf, solve_integer, IntMat, RatMat};

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMat> {
    prop::collection::vec(prop::collection::vec(-9i64..=9, cols), rows).prop_map(|r| {
        let refs: Vec<&[i64]> = r.iter().map(Vec::as_slice).collect();
        IntMat::from_i64(&refs)
    })
}

fn any_int_matrix() -> impl Strategy<Value = IntMat> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| int_matrix(r, c))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

/// Every row of `a` is an integer combination of the rows of `b`.
fn rows_in_span(a: &IntMat, b: &IntMat) -> bool {
    let bt = b.transpose();
    a.row_iter().all(|r| solve_integer(&bt, r).is_some())
}

proptest! {
    #[test]
    fn hnf_rows_span_the_same_lattice(m in any_int_matrix()) {
        let h = hnf(&m);
        let nonzero: Vec<Vec<BigInt>> = h.h.row_iter().filter(|r| r.iter().any(|x| !x.is_zero())).map(<[_]>::to_vec).collect();
        if nonzero.is_empty() {
            prop_assert!(m.is_zero());
        } else {
            let hh = IntMat::from_rows(nonzero).unwrap();
            prop_assert_eq!(hh.rows(), h.rank);
            prop_assert!(rows_in_span(&hh, &m));
            prop_assert!(rows_in_span(&m, &hh));
        }
        prop_assert_eq!(h.u.mul(&m), h.h);
    }

    #[test]
    fn snf_invariant_factors_multiply_to_det(m in (1usize..=4).prop_flat_map(|n| int_matrix(n, n))) {
        let det = m.det();
        prop_assume!(!det.is_zero());
        let f = snf(&m);
        let product: BigInt = f.invariant_factors().iter().product();
        prop_assert_eq!(product.abs(), det.abs());
        let factors = f.invariant_factors();
        for w in factors.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert_eq!(f.u.mul(&m).mul(&f.v), f.s);
    }

    #[test]
    fn kernel_vectors_are_annihilated(
        (rows, cols) in (1usize..=4, 1usize..=5),
        seed in prop::collection::vec(rational(), 20),
        coeffs in prop::collection::vec(rational(), 5),
    ) {
        let data: Vec<Vec<Rational>> = (0..rows).map(|i| (0..cols).map(|j| seed[(i * cols + j) % 20].clone()).collect()).collect();
        let m = RatMat::from_rows(data).unwrap();
        let k = rational_kernel(&m);
        let v: Vec<Rational> = (0..cols)
            .map(|j| k.basis().iter().zip(&coeffs).map(|(b, c)| &b[j] * c).sum())
            .collect();
        prop_assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
    }

    #[test]
    fn quadratic_field_axioms(
        d in prop::sample::select(vec![2i64, 3, 5, 6, 7]),
        a in prop::collection::vec(rational(), 6),
    ) {
        let x = QuadExt::new(a[0].clone(), a[1].clone(), d).unwrap();
        let y = QuadExt::new(a[2].clone(), a[3].clone(), d).unwrap();
        let z = QuadExt::new(a[4].clone(), a[5].clone(), d).unwrap();
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if let Some(inv) = x.inv() {
            let one = &x * &inv;
            prop_assert!(one.is_rational());
            prop_assert_eq!(one.to_rational().unwrap(), rat(1, 1));
        } else {
            prop_assert!(x.is_zero());
        }
        let b = &a[0] * &a[3] + &a[1] * &a[2];
        prop_assert_eq!((&x * &y).is_rational(), b.is_zero());
    }
}

fn totient_by_counting(d: u64) -> u64 {
    (1..=d).filter(|k| k.gcd(&d) == 1).count() as u64
}

#[test]
fn root_of_unity_orders_match_totients() {
    for n in 1..=8u64 {
        let expected: Vec<u64> = (1..=3 * n * n).filter(|&d| totient_by_counting(d) <= n).collect();
        assert_eq!(root_of_unity_orders(n), expected, "n = {n}");
    }
}
