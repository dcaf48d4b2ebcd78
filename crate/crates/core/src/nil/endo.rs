use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::group::{Class2Group, MalcevElement};
use super::lattice::{subgroup_generated, subgroup_index, LatticeSubgroup};
use crate::error::{Error, Result};
use crate::exactmath::quad::QuadExt;
use crate::exactmath::rational::Rational;
use crate::exactmath::RatMat;

/// Lie algebra endomorphism `M`, acting on the group by `exp X ↦ exp(MX)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilEndo {
    group: Class2Group,
    matrix: RatMat,
    det: Rational,
}

impl NilEndo {
    /// Checks `M[e_i, e_j] = [M e_i, M e_j]` for every basis pair.
    pub fn new(group: &Class2Group, matrix: RatMat) -> Result<Self> {
        let m = group.dim();
        if matrix.rows() != m || matrix.cols() != m {
            return Err(Error::Shape(format!("matrix must be {m}x{m}")));
        }
        let cols = matrix.transpose().to_rows();
        for i in 0..m {
            for j in i + 1..m {
                let lhs = matrix.mul_vec(&group.structure()[i][j]);
                if lhs != group.bracket(&cols[i], &cols[j]) {
                    return Err(Error::BracketViolation(i, j));
                }
            }
        }
        let det = matrix.det();
        Ok(Self { group: group.clone(), matrix, det })
    }

    pub fn group(&self) -> &Class2Group {
        &self.group
    }

    pub fn matrix(&self) -> &RatMat {
        &self.matrix
    }

    pub fn det(&self) -> &Rational {
        &self.det
    }

    /// The determinant as an integer; lattice-preserving maps always have one.
    pub fn integer_det(&self) -> Result<BigInt> {
        if !self.det.is_integer() {
            return Err(Error::Inconsistent(format!("determinant {} is not an integer", self.det)));
        }
        Ok(self.det.to_integer())
    }

    pub fn apply(&self, g: &MalcevElement) -> MalcevElement {
        self.group.element(self.matrix.mul_vec(g.coords())).expect("dimension preserved")
    }

    pub fn apply_quad(&self, x: &[QuadExt]) -> Vec<QuadExt> {
        self.matrix.mul_quad_vec(x)
    }

    /// `δ(N)`, generated by the images of the basis.
    pub fn image_lattice(&self, n: &LatticeSubgroup) -> Result<LatticeSubgroup> {
        let gens: Vec<MalcevElement> =
            n.basis().iter().map(|b| self.group.element(self.matrix.mul_vec(b))).collect::<Result<_>>()?;
        subgroup_generated(&self.group, &gens)
    }
}

/// An endomorphism preserving the lattice `N`, with `|det M| = [N : δ(N)]`
/// checked when `M` is invertible.
pub fn make_endo(group: &Class2Group, matrix: RatMat, n: &LatticeSubgroup) -> Result<NilEndo> {
    if n.group() != group {
        return Err(Error::Shape("lattice belongs to a different group".into()));
    }
    let e = NilEndo::new(group, matrix)?;
    for (i, b) in n.basis().iter().enumerate() {
        if !n.contains(&group.element(e.matrix.mul_vec(b))?) {
            return Err(Error::LatticeNotPreserved(i));
        }
    }
    if !e.det.is_zero() {
        let d = e.integer_det()?;
        let index = subgroup_index(&e.image_lattice(n)?, n)?;
        if d.abs() != index {
            return Err(Error::Inconsistent(format!("|det| = {} but [N : δ(N)] = {index}", d.abs())));
        }
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::{int, rat};

    fn heis() -> (Class2Group, LatticeSubgroup) {
        let g = Class2Group::heisenberg();
        let n = LatticeSubgroup::standard(&g).unwrap();
        (g, n)
    }

    #[test]
    fn heisenberg_automorphism() {
        let (g, n) = heis();
        // Y ↦ X + Y needs the central correction Z/2 to stay in N.
        let plain = RatMat::from_i64(&[&[2, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(make_endo(&g, plain, &n), Err(Error::LatticeNotPreserved(1)));
        let m = RatMat::from_rows(vec![
            vec![int(2), int(1), int(0)],
            vec![int(1), int(1), int(0)],
            vec![int(0), rat(1, 2), int(1)],
        ])
        .unwrap();
        let e = make_endo(&g, m, &n).unwrap();
        assert_eq!(e.integer_det().unwrap(), BigInt::from(1));
    }

    #[test]
    fn graded_maps() {
        let (g, n) = heis();
        for p in [2i64, 3, 5] {
            let e = make_endo(&g, RatMat::from_i64(&[&[p, 0, 0], &[0, p, 0], &[0, 0, p * p]]), &n).unwrap();
            assert_eq!(e.integer_det().unwrap(), BigInt::from(p.pow(4)));
            assert_eq!(subgroup_index(&e.image_lattice(&n).unwrap(), &n).unwrap(), BigInt::from(p.pow(4)));
        }
    }

    #[test]
    fn rejects_bracket_violation() {
        let (g, n) = heis();
        let m = RatMat::from_i64(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(make_endo(&g, m, &n), Err(Error::BracketViolation(0, 1)));
    }

    #[test]
    fn rejects_lattice_escape() {
        let (g, n) = heis();
        // Respects brackets but sends X to X/2.
        let m = RatMat::from_rows(vec![
            vec![rat(1, 2), int(0), int(0)],
            vec![int(0), int(2), int(0)],
            vec![int(0), int(0), int(1)],
        ])
        .unwrap();
        assert_eq!(make_endo(&g, m, &n), Err(Error::LatticeNotPreserved(0)));
    }
}
