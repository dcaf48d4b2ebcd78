use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::classify::classify_only;
use super::endo::TorusEndo;
use super::periodic::{has_periodic_point, real_periodic_solution, PeriodicSearch};
use super::point::{relative_order, TorusPoint};
use crate::error::{Error, Result};
use crate::exactmath::quad::{common_field, split_vector, QuadExt};
use crate::exactmath::rational::{prime_support, Rational};
use crate::exactmath::{rational_kernel, root_of_unity_orders, snf, IntMat, RatMat, SubspaceQ};
use crate::orbit::OrbitResult;

/// Default iterate bound when searching for a base point of `ePer`.
pub const DEFAULT_PERIOD_SEARCH: u64 = 64;

/// Rational span of the directions eventually fixed by `A`: the sum of
/// `ker(A^d − I)` over all `d` with `φ(d) ≤ n`, plus `ker(A^n)` when
/// `include_kernel` is set.
pub fn unity_subspace(a: &IntMat, include_kernel: bool) -> SubspaceQ {
    let n = a.rows();
    let id = IntMat::identity(n);
    let mut h = SubspaceQ::zero(n);
    for d in root_of_unity_orders(n as u64) {
        h = h.sum(&rational_kernel(&a.pow(d).sub(&id).to_rational()));
    }
    if include_kernel {
        h = h.sum(&rational_kernel(&a.pow(n as u64).to_rational()));
    }
    h
}

/// `ePer(f) = p(Q^n + g0 + H)`: a periodic base point and the eventually
/// fixed directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EperDescription {
    pub base_point: Vec<QuadExt>,
    pub subspace: SubspaceQ,
}

impl EperDescription {
    /// Membership of a real point `v` with coordinates in `Q(√d)`:
    /// `v − g0 = r + √d·s` lies in `Q^n + H^R` iff `s ∈ H`.
    pub fn contains(&self, v: &[QuadExt]) -> Result<bool> {
        if v.len() != self.base_point.len() {
            return Err(Error::Shape(format!("point has dimension {}", v.len())));
        }
        common_field(v.iter().chain(&self.base_point))?;
        let diff: Vec<QuadExt> = v.iter().zip(&self.base_point).map(|(x, g)| x - g).collect();
        let (_, s) = split_vector(&diff);
        Ok(self.subspace.contains(&s))
    }

    pub fn is_whole_torus(&self) -> bool {
        self.subspace.is_full()
    }
}

pub fn eper_description(f: &TorusEndo) -> Result<EperDescription> {
    eper_description_with_bound(f, DEFAULT_PERIOD_SEARCH)
}

pub fn eper_description_with_bound(f: &TorusEndo, k_max: u64) -> Result<EperDescription> {
    let k = match has_periodic_point(f, k_max)? {
        PeriodicSearch::Yes(k) => k,
        PeriodicSearch::Empty => return Err(Error::Validation("map has no periodic point".into())),
        PeriodicSearch::UnknownUpTo(k) => return Err(Error::UnknownUpTo(k)),
    };
    let base_point = real_periodic_solution(&f.iterate(k))?
        .ok_or_else(|| Error::Inconsistent(format!("no fixed point of iterate {k}")))?;
    Ok(EperDescription { base_point, subspace: unity_subspace(f.linear(), f.is_singular()) })
}

/// Sufficient condition for periodicity of a rational point under a linear
/// map with determinant `D ≠ 0`: `gcd(D, ord q) = 1`.
pub fn perd_sufficient(f: &TorusEndo, q: &[Rational]) -> Result<bool> {
    if !f.is_linear() {
        return Err(Error::NotLinear);
    }
    if f.is_singular() {
        return Err(Error::Singular("determinant is zero"));
    }
    Ok(f.det().gcd(&relative_order(q)).is_one())
}

fn constant<T: PartialEq>(mut it: impl Iterator<Item = T>) -> bool {
    match it.next() {
        None => true,
        Some(first) => it.all(|x| x == first),
    }
}

/// Relative order constant along the cycle.
pub fn notper_trace_check(result: &OrbitResult<TorusPoint>) -> bool {
    constant(result.cycle.iter().map(TorusPoint::relative_order))
}

/// Prime support of the relative order constant along the cycle.
pub fn computeper_trace_check(result: &OrbitResult<TorusPoint>) -> bool {
    constant(result.cycle.iter().map(|p| prime_support(&p.relative_order())))
}

/// Relative orders of the tail followed by the cycle.
pub fn orbit_orders(result: &OrbitResult<TorusPoint>) -> Vec<BigInt> {
    result.points().map(TorusPoint::relative_order).collect()
}

fn check_pair(phi: &RatMat, psi: &RatMat, v: &[QuadExt]) -> Result<()> {
    if !phi.is_square() || phi.rows() != psi.rows() || phi.cols() != psi.cols() {
        return Err(Error::Shape("phi and psi must be square of equal size".into()));
    }
    if v.len() != phi.cols() {
        return Err(Error::Shape(format!("vector has length {}, expected {}", v.len(), phi.cols())));
    }
    common_field(v)?;
    Ok(())
}

/// `v ∈ Q^n + H^R` with `H = ker(φ − ψ)`, decided by reducing `v` along a
/// rational complement of `H` and testing the remainder for rationality.
pub fn equalizer_membership(phi: &RatMat, psi: &RatMat, v: &[QuadExt]) -> Result<bool> {
    check_pair(phi, psi, v)?;
    let h = rational_kernel(&phi.sub(psi));
    Ok(h.reduce(v).iter().all(QuadExt::is_rational))
}

/// Rationality of `(φ − ψ)·v`; agrees with [`equalizer_membership`].
pub fn equalizer_defect_is_rational(phi: &RatMat, psi: &RatMat, v: &[QuadExt]) -> Result<bool> {
    check_pair(phi, psi, v)?;
    Ok(phi.sub(psi).mul_quad_vec(v).iter().all(QuadExt::is_rational))
}

/// A nonzero point of `A^{-1}(Z^n) / Z^n`: eventually periodic but not
/// periodic. `None` for automorphisms, where the two sets coincide.
pub fn witness_eper_not_per(f: &TorusEndo) -> Result<Option<TorusPoint>> {
    if !f.is_linear() {
        return Err(Error::NotLinear);
    }
    if f.is_automorphism() {
        return Ok(None);
    }
    let s = snf(f.linear());
    // U A V = S, so A x ∈ Z^n iff S (V^{-1} x) ∈ Z^n.
    let i = (0..f.dim())
        .find(|&i| s.s[(i, i)].abs() != BigInt::one())
        .ok_or_else(|| Error::Inconsistent("no non-unit invariant factor".into()))?;
    let s_ii = &s.s[(i, i)];
    let mut y = vec![Rational::zero(); f.dim()];
    y[i] = if s_ii.is_zero() {
        Rational::new(BigInt::one(), BigInt::from(2))
    } else {
        Rational::new(BigInt::one(), s_ii.abs())
    };
    let x = TorusPoint::new(s.v.to_rational().mul_vec(&y));
    let c = classify_only(f, x.coords())?;
    if c.verdict.is_periodic() || x.is_origin() {
        return Err(Error::Validation(format!("witness {x} is periodic")));
    }
    Ok(Some(x))
}
