//! Orbits on the nilmanifold `N \ G`, tracked on canonical coset
//! representatives.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::endo::NilEndo;
use super::group::MalcevElement;
use super::lattice::LatticeSubgroup;
use crate::error::{Error, Result};
use crate::exactmath::rational::{prime_support, Rational};
use crate::orbit::{trace_orbit, Classification, OrbitResult};

/// A priori bound on `[N^{1/s} : N]`: `s^k (2s²)^r`.
fn root_index_bound(n: &LatticeSubgroup, s: &BigInt) -> u64 {
    let two_s2 = BigInt::from(2) * s * s;
    let b = num_traits::pow(s.clone(), n.abelian_rank()) * num_traits::pow(two_s2, n.central_rank());
    b.to_u64().unwrap_or(u64::MAX)
}

fn check_same_group(delta: &NilEndo, n: &LatticeSubgroup) -> Result<()> {
    if delta.group() != n.group() {
        return Err(Error::Shape("endomorphism and lattice belong to different groups".into()));
    }
    Ok(())
}

/// Orbit of `N·g`. The orbit stays in the finite set `N \ N^{1/s}` with
/// `s = ord(g)`, whose size bounds the step count.
pub fn classify_nil(
    delta: &NilEndo,
    n: &LatticeSubgroup,
    g: &MalcevElement,
) -> Result<(Classification, OrbitResult<MalcevElement>)> {
    check_same_group(delta, n)?;
    let ord = n.relative_order(g)?;
    let bound = root_index_bound(n, &ord);
    let m = n.in_adapted_basis(delta.matrix());
    let start = n.canonical_adapted(&n.adapted_coords(g.coords()));
    let step = |w: &Vec<Rational>| n.canonical_adapted(&m.mul_vec(w));
    let t = trace_orbit(start, step, bound)?;
    let orbit = OrbitResult::from_trajectory(t.map(|w| n.group().element(n.exp_coords(&w)).expect("dimension")));
    let trace = orbit.points().map(|p| n.relative_order(p)).collect::<Result<Vec<_>>>()?;
    Ok((Classification { verdict: orbit.verdict(), relative_order_trace: trace }, orbit))
}

/// `gcd(D, ord g) = 1`, the sufficient condition for periodicity.
pub fn perd_nil(delta: &NilEndo, n: &LatticeSubgroup, g: &MalcevElement) -> Result<bool> {
    check_same_group(delta, n)?;
    let d = delta.integer_det()?;
    if d == BigInt::from(0) {
        return Err(Error::Singular("determinant is zero"));
    }
    Ok(d.gcd(&n.relative_order(g)?).is_one())
}

/// Prime support of the relative order constant along the cycle.
pub fn computeper_check(n: &LatticeSubgroup, result: &OrbitResult<MalcevElement>) -> Result<bool> {
    let supports = result
        .cycle
        .iter()
        .map(|p| n.relative_order(p).map(|o| prime_support(&o)))
        .collect::<Result<Vec<_>>>()?;
    Ok(supports.windows(2).all(|w| w[0] == w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;
    use crate::exactmath::RatMat;
    use crate::nil::{make_endo, Class2Group};
    use crate::orbit::Verdict;

    fn setup_with(m: RatMat) -> (Class2Group, LatticeSubgroup, NilEndo) {
        let g = Class2Group::heisenberg();
        let n = LatticeSubgroup::standard(&g).unwrap();
        let e = make_endo(&g, m, &n).unwrap();
        (g, n, e)
    }

    fn setup(m: &[&[i64]]) -> (Class2Group, LatticeSubgroup, NilEndo) {
        setup_with(RatMat::from_i64(m))
    }

    fn el(g: &Class2Group, v: &[(i64, i64)]) -> MalcevElement {
        g.element(v.iter().map(|&(a, b)| rat(a, b)).collect()).unwrap()
    }

    /// Oracle: iterate on canonical representatives with a list search.
    fn naive(e: &NilEndo, n: &LatticeSubgroup, g: &MalcevElement) -> (usize, usize) {
        let mut seen: Vec<MalcevElement> = Vec::new();
        let mut x = n.canonical(g);
        loop {
            if let Some(i) = seen.iter().position(|y| *y == x) {
                return (i, seen.len() - i);
            }
            let next = n.canonical(&e.apply(&x));
            seen.push(x);
            x = next;
        }
    }

    #[test]
    fn graded_map_on_half() {
        let (g, n, e) = setup(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 4]]);
        let x = el(&g, &[(1, 2), (0, 1), (0, 1)]);
        let (c, o) = classify_nil(&e, &n, &x).unwrap();
        assert_eq!(c.verdict, Verdict::EventuallyPeriodic { preperiod: 1, period: 1 });
        assert!(o.cycle[0].is_identity());
        assert!(!perd_nil(&e, &n, &x).unwrap());
        let third = el(&g, &[(1, 3), (0, 1), (0, 1)]);
        assert!(perd_nil(&e, &n, &third).unwrap());
        assert!(classify_nil(&e, &n, &third).unwrap().0.verdict.is_periodic());
    }

    #[test]
    fn automorphism_orbit() {
        let m = RatMat::from_rows(vec![
            vec![rat(2, 1), rat(1, 1), rat(0, 1)],
            vec![rat(1, 1), rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 2), rat(1, 1)],
        ])
        .unwrap();
        let (g, n, e) = setup_with(m);
        let x = el(&g, &[(1, 3), (1, 3), (0, 1)]);
        let (c, o) = classify_nil(&e, &n, &x).unwrap();
        assert!(c.verdict.is_periodic());
        assert_eq!((0, o.period), naive(&e, &n, &x));
        assert!(computeper_check(&n, &o).unwrap());
        let (c, _) = classify_nil(&e, &n, &el(&g, &[(1, 1), (0, 1), (0, 1)])).unwrap();
        assert_eq!(c.verdict, Verdict::Periodic { period: 1 });
    }

    #[test]
    fn matches_naive_oracle() {
        let (g, n, e) = setup(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 4]]);
        for v in [[(1, 6), (1, 4), (1, 3)], [(5, 12), (1, 3), (1, 8)], [(1, 5), (2, 5), (1, 10)]] {
            let x = el(&g, &v);
            let (c, _) = classify_nil(&e, &n, &x).unwrap();
            assert_eq!((c.verdict.preperiod(), c.verdict.period()), naive(&e, &n, &x));
        }
    }
}
