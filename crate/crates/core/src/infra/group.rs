//! Flat Bieberbach groups `Γ ≤ Aff(R^n)` with translation lattice `Z^n`.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactmath::rational::{frac, Rational};
use crate::exactmath::{solve_integer, IntMat};
use crate::torus::TorusPoint;

/// Holonomy orders are bounded by this; integral matrices of finite order
/// in the supported dimensions are far below it.
const MAX_HOLONOMY_ORDER: u64 = 1 << 12;

/// Coset representative `x ↦ F x + t` of `Γ / Z^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolonomyRep {
    pub linear: IntMat,
    pub translation: Vec<Rational>,
}

impl HolonomyRep {
    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.linear.to_rational().mul_vec(x).into_iter().zip(&self.translation).map(|(a, b)| a + b).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BieberbachGroup {
    dim: usize,
    reps: Vec<HolonomyRep>,
    /// `F_i F_j = F_{product[i][j]}`.
    product: Vec<Vec<usize>>,
    orders: Vec<u64>,
}

fn differs_by_integers(u: &[Rational], v: &[Rational]) -> bool {
    u.iter().zip(v).all(|(a, b)| (a - b).is_integer())
}

fn matrix_order(f: &IntMat) -> Option<u64> {
    let mut p = f.clone();
    for k in 1..=MAX_HOLONOMY_ORDER {
        if p.is_identity() {
            return Some(k);
        }
        p = p.mul(f);
    }
    None
}

impl BieberbachGroup {
    /// Checks closure of the representatives, the cocycle condition and
    /// torsion-freeness. The identity representative must be present.
    pub fn new(reps: Vec<HolonomyRep>) -> Result<Self> {
        let dim = reps.first().map(|r| r.linear.rows()).ok_or_else(|| Error::Validation("no representatives".into()))?;
        for (i, r) in reps.iter().enumerate() {
            if !r.linear.is_square() || r.linear.rows() != dim || r.translation.len() != dim {
                return Err(Error::Shape(format!("representative {i} does not act on R^{dim}")));
            }
        }
        for i in 0..reps.len() {
            for j in 0..i {
                if reps[i].linear == reps[j].linear {
                    return Err(Error::HolonomyNotClosed(format!("representatives {j} and {i} share a linear part")));
                }
            }
        }
        let identity = reps
            .iter()
            .any(|r| r.linear.is_identity() && r.translation.iter().all(Rational::is_integer));
        if !identity {
            return Err(Error::HolonomyNotClosed("identity representative missing".into()));
        }
        let mut orders = Vec::with_capacity(reps.len());
        for (i, r) in reps.iter().enumerate() {
            orders.push(
                matrix_order(&r.linear)
                    .ok_or_else(|| Error::HolonomyNotClosed(format!("representative {i} has infinite order")))?,
            );
        }
        let mut product = vec![vec![0; reps.len()]; reps.len()];
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                let f = a.linear.mul(&b.linear);
                let t = a.apply(&b.translation);
                let k = reps
                    .iter()
                    .position(|c| c.linear == f)
                    .ok_or_else(|| Error::HolonomyNotClosed(format!("F{i}·F{j} is not a holonomy element")))?;
                if !differs_by_integers(&t, &reps[k].translation) {
                    return Err(Error::HolonomyNotClosed(format!(
                        "translation of γ{i}·γ{j} differs from that of γ{k} by a non-integer vector"
                    )));
                }
                product[i][j] = k;
            }
        }
        let g = Self { dim, reps, product, orders };
        g.check_torsion_free()?;
        Ok(g)
    }

    /// Trivial holonomy: the torus `R^n / Z^n`.
    pub fn torus(n: usize) -> Self {
        Self::new(vec![HolonomyRep { linear: IntMat::identity(n), translation: vec![Rational::from_integer(0.into()); n] }])
            .expect("valid")
    }

    /// `{(I, 0), (diag(1, −1), (1/2, 0))}`.
    pub fn klein_bottle() -> Self {
        let half = Rational::new(1.into(), 2.into());
        let zero = Rational::from_integer(0.into());
        Self::new(vec![
            HolonomyRep { linear: IntMat::identity(2), translation: vec![zero.clone(), zero.clone()] },
            HolonomyRep { linear: IntMat::from_i64(&[&[1, 0], &[0, -1]]), translation: vec![half, zero] },
        ])
        .expect("valid")
    }

    /// `(F, t + z)^r = (I, S(t + z))` with `S = I + F + … + F^{r−1}` and
    /// `r` the order of `F`; torsion means `S(t + z) = 0` for some integer `z`.
    fn check_torsion_free(&self) -> Result<()> {
        for (i, r) in self.reps.iter().enumerate() {
            if r.linear.is_identity() {
                continue;
            }
            let s = r.linear.geometric_sum(self.orders[i]);
            let st = s.to_rational().mul_vec(&r.translation);
            if st.iter().any(|x| !x.is_integer()) {
                continue;
            }
            let rhs: Vec<BigInt> = st.iter().map(|x| -x.to_integer()).collect();
            if solve_integer(&s, &rhs).is_some() {
                return Err(Error::Torsion(i));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn reps(&self) -> &[HolonomyRep] {
        &self.reps
    }

    /// `|F|`.
    pub fn holonomy_order(&self) -> usize {
        self.reps.len()
    }

    pub fn holonomy_product(&self, i: usize, j: usize) -> usize {
        self.product[i][j]
    }

    pub fn is_torus(&self) -> bool {
        self.reps.len() == 1
    }

    /// The point `Γ x`.
    pub fn point(&self, x: &[Rational]) -> Result<InfraPoint> {
        if x.len() != self.dim {
            return Err(Error::Shape(format!("point has dimension {}, group {}", x.len(), self.dim)));
        }
        let best = self
            .reps
            .iter()
            .map(|r| r.apply(x).iter().map(frac).collect::<Vec<_>>())
            .min()
            .expect("at least one representative");
        Ok(InfraPoint { coords: best })
    }

    /// The `|F|` points of `R^n / Z^n` over `Γ x`, sorted.
    pub fn torus_fiber(&self, x: &[Rational]) -> Vec<TorusPoint> {
        let mut v: Vec<TorusPoint> = self.reps.iter().map(|r| TorusPoint::new(r.apply(x))).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// A point of `Γ \ R^n`, stored as the lexicographically least
/// representative in `[0, 1)^n` of its `Γ`-orbit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfraPoint {
    coords: Vec<Rational>,
}

impl InfraPoint {
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }
}

impl fmt::Display for InfraPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "Γ({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::{int, rat};

    #[test]
    fn klein_bottle_is_torsion_free() {
        let k = BieberbachGroup::klein_bottle();
        assert_eq!(k.holonomy_order(), 2);
        assert_eq!(k.holonomy_product(1, 1), 0);
    }

    #[test]
    fn point_group_has_torsion() {
        let reps = vec![
            HolonomyRep { linear: IntMat::identity(2), translation: vec![int(0), int(0)] },
            HolonomyRep { linear: IntMat::from_i64(&[&[1, 0], &[0, -1]]), translation: vec![int(0), int(0)] },
        ];
        assert_eq!(BieberbachGroup::new(reps), Err(Error::Torsion(1)));
    }

    #[test]
    fn rejects_broken_cocycle() {
        // (F, t)² = (I, (1/2, 0) + (1/2, 0)) is fine, but t = (1/3, 0) squares to (2/3, 0).
        let reps = vec![
            HolonomyRep { linear: IntMat::identity(2), translation: vec![int(0), int(0)] },
            HolonomyRep { linear: IntMat::from_i64(&[&[1, 0], &[0, -1]]), translation: vec![rat(1, 3), int(0)] },
        ];
        assert!(matches!(BieberbachGroup::new(reps), Err(Error::HolonomyNotClosed(_))));
        let missing = vec![HolonomyRep { linear: IntMat::from_i64(&[&[1, 0], &[0, -1]]), translation: vec![rat(1, 2), int(0)] }];
        assert!(matches!(BieberbachGroup::new(missing), Err(Error::HolonomyNotClosed(_))));
    }

    #[test]
    fn torus_is_valid() {
        assert!(BieberbachGroup::torus(3).is_torus());
    }

    #[test]
    fn canonical_points() {
        let k = BieberbachGroup::klein_bottle();
        let p = k.point(&[rat(1, 5), rat(1, 7)]).unwrap();
        // Other representative: (1/5 + 1/2, −1/7) ≡ (7/10, 6/7).
        let q = k.point(&[rat(7, 10), rat(6, 7)]).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.coords(), &[rat(1, 5), rat(1, 7)]);
        assert_eq!(k.point(p.coords()).unwrap(), p);
        assert_eq!(k.torus_fiber(&[rat(1, 5), rat(1, 7)]).len(), 2);
    }
}
