//! Lattices `N ≤ G` in adapted bases.
//!
//! An adapted basis `b_1, …, b_m` has its last `r` vectors spanning the
//! derived algebra `C`; every element of `N` is uniquely
//! `exp(b_1)^{a_1} ⋯ exp(b_k)^{a_k} · exp(c_1 b_{k+1} + … + c_r b_m)` with
//! integer `a, c`. Computations run in adapted coordinates `w`, where
//! `X = Σ w_i b_i`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::group::{Class2Group, MalcevElement};
use crate::error::{Error, Result};
use crate::exactmath::normal_form::{coordinates_in_basis, rational_lattice_basis};
use crate::exactmath::rational::{denominator_lcm, frac, int, rat, Rational};
use crate::exactmath::{hnf, IntMat, RatMat};

/// Samples used to validate `N^{1/s}`.
pub const ROOT_VALIDATION_SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSubgroup {
    group: Class2Group,
    basis: Vec<Vec<Rational>>,
    abelian_rank: usize,
    /// `(B^T)^{-1}`: exponential coordinates to adapted coordinates.
    to_adapted: RatMat,
    to_exp: RatMat,
    /// Adapted central coordinates of `[b_i, b_j]`, `i, j < k`.
    gamma: Vec<Vec<Vec<Rational>>>,
}

impl LatticeSubgroup {
    /// Accepts an adapted basis and certifies that the products
    /// `Π exp(b_i)^{a_i}` times the central lattice form a group, which
    /// holds iff every `[b_i, b_j]` lies in the central lattice.
    pub fn from_adapted(group: &Class2Group, basis: Vec<Vec<Rational>>) -> Result<Self> {
        let m = group.dim();
        let r = group.derived().dim();
        let k = m - r;
        if basis.len() != m || basis.iter().any(|b| b.len() != m) {
            return Err(Error::Shape(format!("adapted basis must be {m} vectors of length {m}")));
        }
        if let Some(i) = (k..m).find(|&i| !group.derived().contains(&basis[i])) {
            return Err(Error::NotFullRank(format!("basis vector {i} is not in the derived algebra")));
        }
        let to_exp = RatMat::from_rows(basis.clone())?.transpose();
        let to_adapted = to_exp
            .inverse()
            .ok_or_else(|| Error::NotFullRank("adapted basis is linearly dependent".into()))?;
        let mut gamma = vec![vec![vec![Rational::zero(); r]; k]; k];
        for i in 0..k {
            for j in 0..k {
                let w = to_adapted.mul_vec(&group.bracket(&basis[i], &basis[j]));
                if w[k..].iter().any(|x| !x.is_integer()) {
                    return Err(Error::NotClosed(format!(
                        "[b{i}, b{j}] is not in the central lattice"
                    )));
                }
                gamma[i][j] = w[k..].to_vec();
            }
        }
        Ok(Self { group: group.clone(), basis, abelian_rank: k, to_adapted, to_exp, gamma })
    }

    /// The lattice generated by `exp` of the given vectors.
    pub fn new(group: &Class2Group, generators: &[Vec<Rational>]) -> Result<Self> {
        let gens = generators.iter().map(|v| group.element(v.clone())).collect::<Result<Vec<_>>>()?;
        subgroup_generated(group, &gens)
    }

    /// `⟨exp e_1, …, exp e_m⟩`.
    pub fn standard(group: &Class2Group) -> Result<Self> {
        Self::new(group, &RatMat::identity(group.dim()).to_rows())
    }

    pub fn group(&self) -> &Class2Group {
        &self.group
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn abelian_rank(&self) -> usize {
        self.abelian_rank
    }

    pub fn central_rank(&self) -> usize {
        self.dim() - self.abelian_rank
    }

    pub fn adapted_coords(&self, x: &[Rational]) -> Vec<Rational> {
        self.to_adapted.mul_vec(x)
    }

    pub fn exp_coords(&self, w: &[Rational]) -> Vec<Rational> {
        self.to_exp.mul_vec(w)
    }

    /// A linear map of the algebra written in adapted coordinates.
    pub fn in_adapted_basis(&self, m: &RatMat) -> RatMat {
        self.to_adapted.mul(m).mul(&self.to_exp)
    }

    /// Central adapted coordinates of `log Π exp(b_i)^{a_i}`:
    /// `½ Σ_{i<j} a_i a_j γ_ij`.
    fn ordered_product_central(&self, a: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.central_rank()];
        let half = rat(1, 2);
        for i in 0..self.abelian_rank {
            if a[i].is_zero() {
                continue;
            }
            for j in i + 1..self.abelian_rank {
                if a[j].is_zero() {
                    continue;
                }
                let f = &half * &a[i] * &a[j];
                for (o, g) in out.iter_mut().zip(&self.gamma[i][j]) {
                    *o += &f * g;
                }
            }
        }
        out
    }

    /// Central adapted coordinates of `½[U, V]` from abelian parts `u, v`.
    fn half_bracket_central(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.central_rank()];
        let half = rat(1, 2);
        for i in 0..self.abelian_rank {
            for j in 0..self.abelian_rank {
                if i == j || u[i].is_zero() || v[j].is_zero() {
                    continue;
                }
                let f = &half * &u[i] * &v[j];
                for (o, g) in out.iter_mut().zip(&self.gamma[i][j]) {
                    *o += &f * g;
                }
            }
        }
        out
    }

    /// Membership in adapted coordinates.
    pub fn contains_adapted(&self, w: &[Rational]) -> bool {
        let k = self.abelian_rank;
        if w[..k].iter().any(|x| !x.is_integer()) {
            return false;
        }
        let p = self.ordered_product_central(&w[..k]);
        w[k..].iter().zip(p).all(|(c, pc)| (c - pc).is_integer())
    }

    pub fn contains(&self, g: &MalcevElement) -> bool {
        self.contains_adapted(&self.adapted_coords(g.coords()))
    }

    /// Canonical adapted coordinates of the coset `N·exp(X)`: abelian
    /// coordinates in `[0, 1)`, then central coordinates in `[0, 1)`.
    pub fn canonical_adapted(&self, w: &[Rational]) -> Vec<Rational> {
        let k = self.abelian_rank;
        let shift: Vec<Rational> = w[..k].iter().map(|x| -Rational::from_integer(x.floor().to_integer())).collect();
        let mut out: Vec<Rational> = w[..k].iter().zip(&shift).map(|(x, s)| x + s).collect();
        let p = self.ordered_product_central(&shift);
        let br = self.half_bracket_central(&shift, &w[..k]);
        out.extend(w[k..].iter().zip(p).zip(br).map(|((c, pc), b)| frac(&(c + pc + b))));
        out
    }

    pub fn canonical(&self, g: &MalcevElement) -> MalcevElement {
        let w = self.canonical_adapted(&self.adapted_coords(g.coords()));
        self.group.element(self.exp_coords(&w)).expect("dimension preserved")
    }

    /// `Π exp(b_i)^{a_i} · exp(Σ c_l b_{k+l})`.
    pub fn element_from_exponents(&self, a: &[BigInt], c: &[BigInt]) -> MalcevElement {
        let ar: Vec<Rational> = a.iter().cloned().map(Rational::from_integer).collect();
        let mut w = ar.clone();
        let p = self.ordered_product_central(&ar);
        w.extend(c.iter().zip(p).map(|(ci, pc)| Rational::from_integer(ci.clone()) + pc));
        self.group.element(self.exp_coords(&w)).expect("dimension preserved")
    }

    /// Least `s ≥ 1` with `g^s ∈ N`, searched up to `(2·s0)^3` where `s0`
    /// is the denominator lcm of the adapted coordinates of `g`.
    pub fn relative_order(&self, g: &MalcevElement) -> Result<BigInt> {
        let w = self.adapted_coords(g.coords());
        let s0 = denominator_lcm(&w);
        let bound = num_traits::pow(BigInt::from(2) * &s0, 3);
        let bound_u = bound.to_u64().ok_or(Error::OrderBound(u64::MAX))?;
        let power = |s: u64| -> Vec<Rational> {
            let f = Rational::from_integer(s.into());
            w.iter().map(|x| x * &f).collect()
        };
        let ord = (1..=bound_u)
            .find(|&s| self.contains_adapted(&power(s)))
            .ok_or(Error::OrderBound(bound_u))?;
        for mult in [2, 3] {
            if !self.contains_adapted(&power(ord * mult)) {
                return Err(Error::Inconsistent(format!("g^{} ∉ N although g^{ord} ∈ N", ord * mult)));
            }
        }
        Ok(BigInt::from(ord))
    }

    /// Right cosets `N·g` for `g` in `overgroup`, as canonical elements in
    /// lexicographic order; fails unless `N ≤ overgroup`.
    pub fn quotient_elements(&self, overgroup: &LatticeSubgroup) -> Result<Vec<MalcevElement>> {
        subgroup_index(self, overgroup)?;
        let gens: Vec<MalcevElement> = overgroup
            .basis
            .iter()
            .map(|b| self.group.element(b.clone()).expect("dimension preserved"))
            .collect();
        let start = self.canonical(&self.group.identity());
        let mut seen = BTreeSet::from([start.clone()]);
        let mut frontier = vec![start];
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = self.canonical(&self.group.mul(&x, g));
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }
}

/// Two-stage construction: HNF of the abelianization images gives the
/// first `k` basis vectors (lifted back to group elements); the central
/// lattice is the span of the central residues of the generators together
/// with the commutators of the lifts.
pub fn subgroup_generated(group: &Class2Group, gens: &[MalcevElement]) -> Result<LatticeSubgroup> {
    let m = group.dim();
    let c = group.derived();
    let r = c.dim();
    let k = m - r;
    let free: Vec<usize> = (0..m).filter(|i| !c.pivots().contains(i)).collect();
    let quotient = |x: &[Rational]| -> Vec<Rational> {
        let red = c.reduce(x);
        free.iter().map(|&i| red[i].clone()).collect()
    };
    let images: Vec<Vec<Rational>> = gens.iter().map(|g| quotient(g.coords())).collect();

    let mut lifts = Vec::with_capacity(k);
    let mut image_basis = Vec::with_capacity(k);
    if k > 0 {
        if images.is_empty() {
            return Err(Error::NotFullRank("no generators".into()));
        }
        let den = images.iter().fold(BigInt::one(), |acc, v| acc.lcm(&denominator_lcm(v)));
        let denr = Rational::from_integer(den.clone());
        let scaled: Vec<Vec<BigInt>> =
            images.iter().map(|v| v.iter().map(|x| (x * &denr).to_integer()).collect()).collect();
        let h = hnf(&IntMat::from_rows(scaled)?);
        if h.rank < k {
            return Err(Error::NotFullRank(format!(
                "generators span rank {} of the {k}-dimensional abelianization",
                h.rank
            )));
        }
        for i in 0..k {
            let mut acc = group.identity();
            for (g, e) in gens.iter().zip(h.u.row(i)) {
                if !e.is_zero() {
                    acc = group.mul(&acc, &group.pow(g, &Rational::from_integer(e.clone())));
                }
            }
            lifts.push(acc);
            image_basis.push(h.h.row(i).iter().map(|x| Rational::new(x.clone(), den.clone())).collect::<Vec<_>>());
        }
    }

    let ordered = |exps: &[Rational]| -> MalcevElement {
        let mut acc = group.identity();
        for (b, e) in lifts.iter().zip(exps) {
            if !e.is_zero() {
                acc = group.mul(&acc, &group.pow(b, e));
            }
        }
        acc
    };
    let mut central = Vec::new();
    for (g, img) in gens.iter().zip(&images) {
        let e = coordinates_in_basis(&image_basis, img)
            .ok_or_else(|| Error::Inconsistent("generator image outside its own span".into()))?;
        if e.iter().any(|x| !x.is_integer()) {
            return Err(Error::Inconsistent("generator image not in the image lattice".into()));
        }
        central.push(group.mul(&group.inv(&ordered(&e)), g).into_coords());
    }
    for i in 0..k {
        for j in i + 1..k {
            central.push(group.commutator(&lifts[i], &lifts[j]).into_coords());
        }
    }
    let mut central_coords = Vec::with_capacity(central.len());
    for v in &central {
        central_coords.push(
            coordinates_in_basis(c.basis(), v)
                .ok_or_else(|| Error::Inconsistent("central residue outside the derived algebra".into()))?,
        );
    }
    let zbasis: Vec<Vec<Rational>> = rational_lattice_basis(&central_coords, r)
        .into_iter()
        .map(|co| combine(c.basis(), &co, m))
        .collect();
    if zbasis.len() < r {
        return Err(Error::NotFullRank(format!(
            "central part has rank {} in the {r}-dimensional derived algebra",
            zbasis.len()
        )));
    }

    // Reduce the central component of each lift modulo the central lattice.
    let mut basis = Vec::with_capacity(m);
    for b in &lifts {
        let t = c.reduce(b.coords());
        let z: Vec<Rational> = b.coords().iter().zip(&t).map(|(x, y)| x - y).collect();
        let co = coordinates_in_basis(&zbasis, &z).expect("central part lies in the derived algebra");
        let reduced: Vec<Rational> = co.iter().map(frac).collect();
        let shift = combine(&zbasis, &reduced, m);
        basis.push(t.iter().zip(shift).map(|(x, y)| x + y).collect());
    }
    basis.extend(zbasis);
    let lattice = LatticeSubgroup::from_adapted(group, basis)?;
    if let Some(i) = gens.iter().position(|g| !lattice.contains(g)) {
        return Err(Error::NotClosed(format!("generator {i} escaped the constructed lattice")));
    }
    Ok(lattice)
}

fn combine(basis: &[Vec<Rational>], coeffs: &[Rational], m: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); m];
    for (b, c) in basis.iter().zip(coeffs) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

/// `N^{1/s}`, the subgroup generated by all `g` with `g^s ∈ N`.
///
/// The `s`-th roots of `Π exp(b_i)^{a_i}` differ from `Π exp(b_i/s)^{a_i}`
/// by `exp((s−1)/(2s²) Σ_{i<j} a_i a_j [b_i, b_j])`, so those central
/// elements join the generators `exp(b_i/s)`. The result is checked on
/// random roots of lattice elements.
pub fn n_one_over_s(n: &LatticeSubgroup, s: u64) -> Result<LatticeSubgroup> {
    if s == 0 {
        return Err(Error::Validation("s must be positive".into()));
    }
    let mut gens = root_generators(n, s);
    let sr = Rational::from_integer(s.into());
    let f = (&sr - int(1)) / (int(2) * &sr * &sr);
    let g = n.group();
    for i in 0..n.abelian_rank() {
        for j in i + 1..n.abelian_rank() {
            let br = g.bracket(&n.basis[i], &n.basis[j]);
            gens.push(g.element(br.iter().map(|x| x * &f).collect())?);
        }
    }
    validated_root_subgroup(n, s, &gens)
}

/// `⟨exp(b_i/s)⟩` alone, with the same validation; fails whenever that
/// subgroup misses some `s`-th root of a lattice element.
pub fn naive_root_subgroup(n: &LatticeSubgroup, s: u64) -> Result<LatticeSubgroup> {
    if s == 0 {
        return Err(Error::Validation("s must be positive".into()));
    }
    validated_root_subgroup(n, s, &root_generators(n, s))
}

fn root_generators(n: &LatticeSubgroup, s: u64) -> Vec<MalcevElement> {
    let inv = Rational::new(BigInt::one(), BigInt::from(s));
    n.basis.iter().map(|b| n.group.element(b.iter().map(|x| x * &inv).collect()).expect("dimension")).collect()
}

fn validated_root_subgroup(n: &LatticeSubgroup, s: u64, gens: &[MalcevElement]) -> Result<LatticeSubgroup> {
    let root = subgroup_generated(n.group(), gens)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e31_2f73 ^ s);
    let inv = Rational::new(BigInt::one(), BigInt::from(s));
    let r = n.central_rank();
    let k = n.abelian_rank();
    for _ in 0..ROOT_VALIDATION_SAMPLES {
        let a: Vec<BigInt> = (0..k).map(|_| BigInt::from(rng.gen_range(-6i64..=6))).collect();
        let c: Vec<BigInt> = (0..r).map(|_| BigInt::from(rng.gen_range(-6i64..=6))).collect();
        let x = n.element_from_exponents(&a, &c);
        let g = n.group.pow(&x, &inv);
        debug_assert!(n.contains(&n.group.pow(&g, &Rational::from_integer(s.into()))));
        if !root.contains(&g) {
            return Err(Error::Validation(format!("{g} has its {s}-th power in N but is not generated")));
        }
    }
    Ok(root)
}

/// `[k : h]` for lattices `h ≤ k` of the same group.
pub fn subgroup_index(h: &LatticeSubgroup, k: &LatticeSubgroup) -> Result<BigInt> {
    if h.group != k.group {
        return Err(Error::Shape("lattices belong to different groups".into()));
    }
    for (i, b) in h.basis.iter().enumerate() {
        if !k.contains(&h.group.element(b.clone())?) {
            return Err(Error::NotContained(i));
        }
    }
    let ab = h.abelian_rank;
    let block = |range: std::ops::Range<usize>| -> Result<BigInt> {
        let rows: Vec<Vec<BigInt>> = h.basis[range.clone()]
            .iter()
            .map(|b| k.adapted_coords(b)[range.clone()].iter().map(|x| x.to_integer()).collect())
            .collect();
        if rows.is_empty() {
            return Ok(BigInt::one());
        }
        Ok(IntMat::from_rows(rows)?.det().abs())
    };
    Ok(block(0..ab)? * block(ab..h.dim())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis() -> (Class2Group, LatticeSubgroup) {
        let g = Class2Group::heisenberg();
        let n = LatticeSubgroup::standard(&g).unwrap();
        (g, n)
    }

    fn el(g: &Class2Group, v: &[(i64, i64)]) -> MalcevElement {
        g.element(v.iter().map(|&(a, b)| rat(a, b)).collect()).unwrap()
    }

    #[test]
    fn standard_heisenberg_lattice() {
        let (g, n) = heis();
        assert_eq!(n.abelian_rank(), 2);
        assert!(n.contains(&el(&g, &[(1, 1), (1, 1), (1, 2)])));
        assert!(n.contains(&g.identity()));
        assert!(!n.contains(&el(&g, &[(1, 2), (0, 1), (0, 1)])));
        assert!(!n.contains(&el(&g, &[(1, 1), (1, 1), (0, 1)])));
    }

    #[test]
    fn relative_orders() {
        let (g, n) = heis();
        assert_eq!(n.relative_order(&el(&g, &[(1, 2), (1, 2), (0, 1)])).unwrap(), BigInt::from(4));
        assert_eq!(n.relative_order(&el(&g, &[(0, 1), (0, 1), (1, 3)])).unwrap(), BigInt::from(3));
        assert_eq!(n.relative_order(&el(&g, &[(1, 1), (2, 1), (1, 1)])).unwrap(), BigInt::from(1));
    }

    #[test]
    fn relative_order_matches_brute_force_powering() {
        let (g, n) = heis();
        let x = el(&g, &[(1, 3), (1, 2), (1, 5)]);
        let mut acc = g.identity();
        let mut s = 0;
        loop {
            acc = g.mul(&acc, &x);
            s += 1;
            if n.contains(&acc) {
                break;
            }
        }
        assert_eq!(n.relative_order(&x).unwrap(), BigInt::from(s));
    }

    #[test]
    fn generated_by_halves() {
        let (g, n) = heis();
        let gens = [el(&g, &[(1, 2), (0, 1), (0, 1)]), el(&g, &[(0, 1), (1, 2), (0, 1)]), el(&g, &[(0, 1), (0, 1), (1, 2)])];
        let h = subgroup_generated(&g, &gens).unwrap();
        // Commutator of the two halves is exp(Z/4).
        assert!(h.contains(&el(&g, &[(0, 1), (0, 1), (1, 4)])));
        assert!(!h.contains(&el(&g, &[(0, 1), (0, 1), (1, 8)])));
        assert_eq!(subgroup_index(&n, &h).unwrap(), BigInt::from(16));
    }

    #[test]
    fn generated_by_basis_is_itself() {
        let (g, n) = heis();
        let again = LatticeSubgroup::new(&g, n.basis()).unwrap();
        assert_eq!(again, n);
        let finer = LatticeSubgroup::new(&g, &[vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)], vec![int(0), int(0), rat(1, 3)]])
            .unwrap();
        assert_eq!(subgroup_index(&n, &finer).unwrap(), BigInt::from(3));
    }

    #[test]
    fn roots_of_the_heisenberg_lattice() {
        let (g, n) = heis();
        let half = n_one_over_s(&n, 2).unwrap();
        assert_eq!(subgroup_index(&n, &half).unwrap(), BigInt::from(32));
        assert!(half.contains(&el(&g, &[(1, 2), (1, 2), (1, 4)])));
        assert!(matches!(naive_root_subgroup(&n, 2), Err(Error::Validation(_))));
        assert_eq!(n_one_over_s(&n, 1).unwrap(), n);
        let q = half.quotient_elements(&half).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(n.quotient_elements(&half).unwrap().len(), 32);
    }

    #[test]
    fn abelian_roots() {
        let g = Class2Group::abelian(3);
        let n = LatticeSubgroup::standard(&g).unwrap();
        let third = n_one_over_s(&n, 3).unwrap();
        assert_eq!(subgroup_index(&n, &third).unwrap(), BigInt::from(27));
        assert_eq!(naive_root_subgroup(&n, 3).unwrap(), third);
    }

    #[test]
    fn canonical_representatives() {
        let (g, n) = heis();
        let x = el(&g, &[(7, 3), (-5, 2), (9, 7)]);
        let c = n.canonical(&x);
        let w = n.adapted_coords(c.coords());
        assert!(w.iter().all(|v| *v >= int(0) && *v < int(1)));
        // Same coset: c·x^{-1} ∈ N.
        assert!(n.contains(&g.mul(&c, &g.inv(&x))));
        let y = g.mul(&el(&g, &[(3, 1), (-1, 1), (1, 2)]), &x);
        assert_eq!(n.canonical(&y), c);
    }

    #[test]
    fn index_requires_containment() {
        let (g, n) = heis();
        let other = LatticeSubgroup::new(&g, &[vec![rat(1, 2), int(0), int(0)], vec![int(0), int(1), int(0)], vec![int(0), int(0), int(1)]]).unwrap();
        assert_eq!(subgroup_index(&other, &n), Err(Error::NotContained(0)));
    }
}
