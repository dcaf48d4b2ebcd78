use num_bigint::BigInt;
use num_traits::Zero;

use super::group::{BieberbachGroup, InfraPoint};
use crate::error::{Error, Result};
use crate::exactmath::rational::Rational;
use crate::exactmath::IntMat;
use crate::torus::TorusEndo;

/// Affine map `x ↦ A x + b` with `αΓ ⊆ Γα`, witnessed by `table`:
/// `α γ_i = γ_{table[i]} α` up to an integer translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfraEndo {
    linear: IntMat,
    translation: Vec<Rational>,
    table: Vec<usize>,
}

impl InfraEndo {
    pub fn linear(&self) -> &IntMat {
        &self.linear
    }

    pub fn translation(&self) -> &[Rational] {
        &self.translation
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn det(&self) -> BigInt {
        self.linear.det()
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.linear.to_rational().mul_vec(x).into_iter().zip(&self.translation).map(|(a, b)| a + b).collect()
    }

    pub fn step(&self, group: &BieberbachGroup, x: &InfraPoint) -> InfraPoint {
        group.point(&self.apply(x.coords())).expect("dimension checked at validation")
    }

    /// The same affine formula on `R^n / Z^n`.
    pub fn torus_map(&self) -> TorusEndo {
        TorusEndo::with_rational_translation(self.linear.clone(), self.translation.clone()).expect("validated")
    }

    /// Whether `F_i ↦ F_{table[i]}` is injective on the holonomy group.
    pub fn holonomy_injective(&self) -> bool {
        let mut seen = vec![false; self.table.len()];
        self.table.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
    }
}

/// Finds, for each representative `(F_i, t_i)`, a `(F_j, t_j)` with
/// `A F_i = F_j A` and `b + A t_i ≡ t_j + F_j b (mod Z^n)`.
pub fn validate_endo(group: &BieberbachGroup, a: IntMat, b: Vec<Rational>) -> Result<InfraEndo> {
    let n = group.dim();
    if !a.is_square() || a.rows() != n || b.len() != n {
        return Err(Error::Shape(format!("endomorphism must act on R^{n}")));
    }
    let ar = a.to_rational();
    let mut table = Vec::with_capacity(group.holonomy_order());
    for (i, ri) in group.reps().iter().enumerate() {
        let af = a.mul(&ri.linear);
        let lhs: Vec<Rational> = ar.mul_vec(&ri.translation).into_iter().zip(&b).map(|(x, y)| x + y).collect();
        let j = group.reps().iter().position(|rj| {
            rj.linear.mul(&a) == af
                && rj
                    .linear
                    .to_rational()
                    .mul_vec(&b)
                    .iter()
                    .zip(&rj.translation)
                    .zip(&lhs)
                    .all(|((fb, t), l)| (l - t - fb).is_integer())
        });
        table.push(j.ok_or(Error::IncompatibleEndo(i))?);
    }
    Ok(InfraEndo { linear: a, translation: b, table })
}
