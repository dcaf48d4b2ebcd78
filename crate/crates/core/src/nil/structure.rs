use num_traits::Zero;

use super::endo::NilEndo;
use super::group::Class2Group;
use crate::error::{Error, Result};
use crate::exactmath::quad::{common_field, split_vector, QuadExt};
use crate::exactmath::rational::{rat, Rational};
use crate::exactmath::{rational_kernel, root_of_unity_orders, solve_rational, RatMat, SubspaceQ};

fn check_subalgebra(group: &Class2Group, h: &SubspaceQ) -> Result<()> {
    let b = h.basis();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            if !h.contains(&group.bracket(&b[i], &b[j])) {
                return Err(Error::NotClosed(format!("bracket of basis vectors {i}, {j} leaves the subspace")));
            }
        }
    }
    Ok(())
}

/// `Σ_d ker(M^d − I)` over `d` with `φ(d) ≤ m`, plus `ker(M^m)` when
/// `include_kernel` is set.
pub fn unity_subalgebra(delta: &NilEndo, include_kernel: bool) -> Result<SubspaceQ> {
    let m = delta.group().dim();
    let id = RatMat::identity(m);
    let mut h = SubspaceQ::zero(m);
    for d in root_of_unity_orders(m as u64) {
        h = h.sum(&rational_kernel(&delta.matrix().pow(d).sub(&id)));
    }
    if include_kernel {
        h = h.sum(&rational_kernel(&delta.matrix().pow(m as u64)));
    }
    check_subalgebra(delta.group(), &h)?;
    Ok(h)
}

/// `{X : φX = ψX}`.
pub fn equalizer_subalgebra(phi: &NilEndo, psi: &NilEndo) -> Result<SubspaceQ> {
    if phi.group() != psi.group() {
        return Err(Error::Shape("maps act on different groups".into()));
    }
    let h = rational_kernel(&phi.matrix().sub(psi.matrix()));
    check_subalgebra(phi.group(), &h)?;
    Ok(h)
}

fn check_point(phi: &NilEndo, psi: &NilEndo, x: &[QuadExt]) -> Result<()> {
    if phi.group() != psi.group() {
        return Err(Error::Shape("maps act on different groups".into()));
    }
    if x.len() != phi.group().dim() {
        return Err(Error::Shape(format!("point has {} coordinates", x.len())));
    }
    common_field(x)?;
    Ok(())
}

/// Whether `exp(X) ∈ N^Q · exp(H^R)` for `H` the equalizer of `φ, ψ` and
/// `X = a + √d·b`.
///
/// This holds iff `log(exp(X) exp(−T))` is rational for some
/// `T = T0 + √d·T1` with `T0, T1 ∈ H`; its `√d` part is
/// `b − T1 − ½([a, T1] + [b, T0])`, linear in `(T0, T1)`.
pub fn coset_membership(phi: &NilEndo, psi: &NilEndo, x: &[QuadExt]) -> Result<bool> {
    check_point(phi, psi, x)?;
    let h = equalizer_subalgebra(phi, psi)?;
    let group = phi.group();
    let (a, b) = split_vector(x);
    if b.iter().all(Zero::is_zero) {
        return Ok(true);
    }
    if h.is_zero() {
        return Ok(false);
    }
    let half = rat(1, 2);
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(2 * h.dim());
    for v in h.basis() {
        let br = group.bracket(&a, v);
        cols.push(v.iter().zip(br).map(|(x, y)| x + &half * y).collect());
    }
    for v in h.basis() {
        cols.push(group.bracket(&b, v).into_iter().map(|y| &half * y).collect());
    }
    let m = RatMat::from_rows(cols)?.transpose();
    Ok(solve_rational(&m, &b).is_some())
}

/// Rationality of `log(φ(n) ψ(n)^{-1})` for `n = exp(X)`.
pub fn equalizer_defect_is_rational(phi: &NilEndo, psi: &NilEndo, x: &[QuadExt]) -> Result<bool> {
    check_point(phi, psi, x)?;
    let u = phi.apply_quad(x);
    let v: Vec<QuadExt> = psi.apply_quad(x).into_iter().map(|c| -c).collect();
    Ok(phi.group().mul_quad(&u, &v).iter().all(QuadExt::is_rational))
}
