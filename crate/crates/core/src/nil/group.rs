//! Class-2 nilpotent Lie groups in exponential coordinates.
//!
//! The group law is `log(exp X · exp Y) = X + Y + ½[X, Y]`; powers are
//! `exp(X)^s = exp(sX)` and the inverse is `exp(−X)`.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactmath::quad::QuadExt;
use crate::exactmath::rational::{int, rat, Rational};
use crate::exactmath::SubspaceQ;

/// Lie algebra `Q^m` with bracket `[e_i, e_j] = c[i][j]`, whose image is
/// central.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class2Group {
    dim: usize,
    structure: Vec<Vec<Vec<Rational>>>,
    derived: SubspaceQ,
}

impl Class2Group {
    /// Validates antisymmetry and centrality of the bracket image.
    pub fn new(structure: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let m = structure.len();
        for (i, row) in structure.iter().enumerate() {
            if row.len() != m || row.iter().any(|v| v.len() != m) {
                return Err(Error::Shape(format!("structure tensor row {i} is not {m}x{m}")));
            }
        }
        for i in 0..m {
            for j in i..m {
                let neg: Vec<Rational> = structure[j][i].iter().map(|x| -x).collect();
                if structure[i][j] != neg {
                    return Err(Error::NotAntisymmetric(i, j));
                }
            }
        }
        let derived = SubspaceQ::span(
            m,
            (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).map(|(i, j)| structure[i][j].clone()).collect(),
        );
        let g = Self { dim: m, structure, derived };
        for z in g.derived.basis() {
            for k in 0..m {
                let mut e = vec![Rational::zero(); m];
                e[k] = int(1);
                if !g.bracket(&e, z).iter().all(Zero::is_zero) {
                    return Err(Error::NotClass2(format!("bracket image is not central: [e{k}, {z:?}] ≠ 0")));
                }
            }
        }
        Ok(g)
    }

    /// Builds the tensor from the brackets `[e_i, e_j]` with `i < j`;
    /// unlisted pairs bracket to zero.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, Vec<Rational>)]) -> Result<Self> {
        let mut t = vec![vec![vec![Rational::zero(); dim]; dim]; dim];
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim || v.len() != dim {
                return Err(Error::Shape(format!("bracket [{i}, {j}] does not fit dimension {dim}")));
            }
            if i == j {
                return Err(Error::NotAntisymmetric(i, j));
            }
            t[i][j] = v.clone();
            t[j][i] = v.iter().map(|x| -x).collect();
        }
        Self::new(t)
    }

    /// `[X, Y] = Z` on the basis `X, Y, Z`.
    pub fn heisenberg() -> Self {
        Self::from_brackets(3, &[(0, 1, vec![int(0), int(0), int(1)])]).expect("valid")
    }

    pub fn abelian(dim: usize) -> Self {
        Self::from_brackets(dim, &[]).expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure(&self) -> &[Vec<Vec<Rational>>] {
        &self.structure
    }

    /// Rational span of the bracket image `[n, n]`.
    pub fn derived(&self) -> &SubspaceQ {
        &self.derived
    }

    pub fn is_abelian(&self) -> bool {
        self.derived.is_zero()
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                let f = xi * yj;
                for (o, c) in out.iter_mut().zip(&self.structure[i][j]) {
                    if !c.is_zero() {
                        *o += &f * c;
                    }
                }
            }
        }
        out
    }

    pub fn bracket_quad(&self, x: &[QuadExt], y: &[QuadExt]) -> Vec<QuadExt> {
        let mut out = vec![QuadExt::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                if i == j || xi.is_zero() || yj.is_zero() {
                    continue;
                }
                let f = xi * yj;
                for (o, c) in out.iter_mut().zip(&self.structure[i][j]) {
                    if !c.is_zero() {
                        *o = &*o + &f.scale(c);
                    }
                }
            }
        }
        out
    }

    pub fn identity(&self) -> MalcevElement {
        MalcevElement { coords: vec![Rational::zero(); self.dim] }
    }

    pub fn element(&self, coords: Vec<Rational>) -> Result<MalcevElement> {
        if coords.len() != self.dim {
            return Err(Error::Shape(format!("element has {} coordinates, group dimension {}", coords.len(), self.dim)));
        }
        Ok(MalcevElement { coords })
    }

    pub fn mul(&self, g: &MalcevElement, h: &MalcevElement) -> MalcevElement {
        let br = self.bracket(&g.coords, &h.coords);
        let half = rat(1, 2);
        MalcevElement {
            coords: g.coords.iter().zip(&h.coords).zip(br).map(|((x, y), b)| x + y + &half * b).collect(),
        }
    }

    pub fn inv(&self, g: &MalcevElement) -> MalcevElement {
        MalcevElement { coords: g.coords.iter().map(|x| -x).collect() }
    }

    pub fn pow(&self, g: &MalcevElement, s: &Rational) -> MalcevElement {
        MalcevElement { coords: g.coords.iter().map(|x| x * s).collect() }
    }

    /// `g h g^{-1} h^{-1} = exp([X, Y])`.
    pub fn commutator(&self, g: &MalcevElement, h: &MalcevElement) -> MalcevElement {
        MalcevElement { coords: self.bracket(&g.coords, &h.coords) }
    }

    /// `log(exp X · exp Y)` over `Q(√d)`.
    pub fn mul_quad(&self, x: &[QuadExt], y: &[QuadExt]) -> Vec<QuadExt> {
        let half = rat(1, 2);
        let br = self.bracket_quad(x, y);
        x.iter().zip(y).zip(br).map(|((a, b), c)| &(a + b) + &c.scale(&half)).collect()
    }
}

/// Element `exp(X)` stored by its exponential coordinates `X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MalcevElement {
    coords: Vec<Rational>,
}

impl MalcevElement {
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for MalcevElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "exp({})", parts.join(", "))
    }
}

pub fn bch_mul(group: &Class2Group, g: &MalcevElement, h: &MalcevElement) -> MalcevElement {
    group.mul(g, h)
}

pub fn bch_inv(group: &Class2Group, g: &MalcevElement) -> MalcevElement {
    group.inv(g)
}

pub fn bch_pow(group: &Class2Group, g: &MalcevElement, s: i64) -> MalcevElement {
    group.pow(g, &Rational::from_integer(s.into()))
}

#[cfg(test)]
mod tests {
    use super::*;


    fn el(v: &[(i64, i64)]) -> MalcevElement {
        MalcevElement { coords: v.iter().map(|&(n, d)| rat(n, d)).collect() }
    }

    #[test]
    fn heisenberg_product() {
        let h = Class2Group::heisenberg();
        let x = el(&[(1, 1), (0, 1), (0, 1)]);
        let y = el(&[(0, 1), (1, 1), (0, 1)]);
        assert_eq!(bch_mul(&h, &x, &y), el(&[(1, 1), (1, 1), (1, 2)]));
        assert_eq!(bch_mul(&h, &y, &x), el(&[(1, 1), (1, 1), (-1, 2)]));
        assert_eq!(h.commutator(&x, &y), el(&[(0, 1), (0, 1), (1, 1)]));
    }

    #[test]
    fn powers_and_inverses() {
        let h = Class2Group::heisenberg();
        let g = el(&[(1, 2), (1, 2), (0, 1)]);
        assert_eq!(bch_pow(&h, &g, 4), el(&[(2, 1), (2, 1), (0, 1)]));
        assert!(bch_mul(&h, &g, &bch_inv(&h, &g)).is_identity());
        // Repeated multiplication agrees with scaling.
        let g = el(&[(1, 3), (-2, 5), (1, 7)]);
        let mut acc = h.identity();
        for _ in 0..5 {
            acc = h.mul(&acc, &g);
        }
        assert_eq!(acc, bch_pow(&h, &g, 5));
    }

    #[test]
    fn validation() {
        let bad = vec![vec![vec![int(0); 2]; 2]; 2];
        let mut sym = bad.clone();
        sym[0][1] = vec![int(1), int(0)];
        sym[1][0] = vec![int(1), int(0)];
        assert_eq!(Class2Group::new(sym), Err(Error::NotAntisymmetric(0, 1)));
        // [e0, e1] = e0 is not central.
        assert!(matches!(
            Class2Group::from_brackets(2, &[(0, 1, vec![int(1), int(0)])]),
            Err(Error::NotClass2(_))
        ));
        assert!(Class2Group::abelian(4).is_abelian());
        assert_eq!(Class2Group::heisenberg().derived().dim(), 1);
    }

    #[test]
    fn quad_product_matches_rational_product() {
        let h = Class2Group::heisenberg();
        let x = [rat(1, 2), rat(3, 4), rat(1, 5)];
        let y = [rat(-2, 3), rat(1, 7), int(2)];
        let q = |v: &[Rational]| -> Vec<QuadExt> { v.iter().cloned().map(QuadExt::rational).collect() };
        let prod = h.mul(&el(&[(1, 2), (3, 4), (1, 5)]), &el(&[(-2, 3), (1, 7), (2, 1)]));
        let quad: Vec<Rational> = h.mul_quad(&q(&x), &q(&y)).iter().map(|v| v.to_rational().unwrap()).collect();
        assert_eq!(quad, prod.coords());
    }
}
