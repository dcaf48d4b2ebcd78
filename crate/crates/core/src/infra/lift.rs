//! Torus covers of `Γ \ R^n`: the Fitting cover `Z^n \ R^n` and the cover
//! by `N0 = Γ^{|F|}`, to which every affine map lifts.

use num_bigint::BigInt;
use num_traits::Zero;

use super::endo::InfraEndo;
use super::group::BieberbachGroup;
use crate::error::{Error, Result};
use crate::exactmath::normal_form::{coset_representatives, lattice_index};
use crate::exactmath::rational::Rational;
use crate::exactmath::{hnf, solve_integer, IntMat};
use crate::torus::{TorusCover, TorusEndo, TorusPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum LiftKind {
    Fitting,
    GammaPower,
}

/// `N0 = Γ^{|F|}` as a sublattice of `Z^n`.
///
/// Every element of `Γ` is `(F_i, t_i + z)`, whose `|F|`-th power is the
/// translation `S_i (t_i + z)` with `S_i = Σ_{j<|F|} F_i^j`. So `N0` is the
/// span of all `S_i t_i` and `S_i e_k`; its `F`-invariance is verified.
pub fn gamma_power_lattice(group: &BieberbachGroup) -> Result<IntMat> {
    let n = group.dim();
    let r = group.holonomy_order() as u64;
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for rep in group.reps() {
        let s = rep.linear.geometric_sum(r);
        let st = s.to_rational().mul_vec(&rep.translation);
        if st.iter().any(|x| !x.is_integer()) {
            return Err(Error::Inconsistent("|F|-th power is not a lattice translation".into()));
        }
        gens.push(st.iter().map(|x| x.to_integer()).collect());
        gens.extend(s.transpose().to_rows());
    }
    let h = hnf(&IntMat::from_rows(gens)?);
    if h.rank < n {
        return Err(Error::NotFullRank("Γ^|F| has infinite index".into()));
    }
    let basis = IntMat::from_rows((0..n).map(|i| h.h.row(i).to_vec()).collect())?;
    let bt = basis.transpose();
    for (i, rep) in group.reps().iter().enumerate() {
        for v in basis.to_rows() {
            if solve_integer(&bt, &rep.linear.mul_vec(&v)).is_none() {
                return Err(Error::NotClosed(format!("F{i} does not preserve Γ^|F|")));
            }
        }
    }
    Ok(basis)
}

/// A torus cover `L \ R^n → Γ \ R^n` together with the lifted map.
#[derive(Debug, Clone)]
pub struct InfraCover {
    pub kind: LiftKind,
    cover: TorusCover,
    /// Lifted map in `L`-coordinates.
    upstairs: TorusEndo,
    /// Representatives of `Z^n / L`.
    cosets: Vec<Vec<BigInt>>,
    deck_injective: bool,
}

impl InfraCover {
    pub fn lattice(&self) -> &IntMat {
        self.cover.basis()
    }

    pub fn upstairs(&self) -> &TorusEndo {
        &self.upstairs
    }

    /// Number of sheets `[Γ : L]`.
    pub fn degree(&self, group: &BieberbachGroup) -> BigInt {
        self.cover.index() * BigInt::from(group.holonomy_order())
    }

    /// Whether the map induced by `α` on the deck group `Γ / L` is injective.
    pub fn deck_injective(&self) -> bool {
        self.deck_injective
    }

    /// Points of `L \ R^n` (in `L`-coordinates) over `Γ x`.
    pub fn fiber(&self, group: &BieberbachGroup, x: &[Rational]) -> Vec<TorusPoint> {
        let mut pts = Vec::new();
        for rep in group.reps() {
            let y = rep.apply(x);
            for z in &self.cosets {
                let v: Vec<Rational> =
                    y.iter().zip(z).map(|(a, b)| a + Rational::from_integer(b.clone())).collect();
                pts.push(self.cover.to_local(&v));
            }
        }
        pts.sort();
        pts.dedup();
        pts
    }

    pub fn project(&self, w: &TorusPoint) -> Vec<Rational> {
        self.cover.to_ambient(w)
    }
}

/// The Fitting cover `Z^n \ R^n`; requires `A` invertible.
pub fn fitting_lift(group: &BieberbachGroup, alpha: &InfraEndo) -> Result<InfraCover> {
    if !alpha.is_invertible() {
        return Err(Error::Singular("linear part is singular; use the Γ^|F| cover"));
    }
    let cover = TorusCover::new(IntMat::identity(group.dim()))?;
    let upstairs = cover.local_map(&alpha.torus_map())?;
    Ok(InfraCover {
        kind: LiftKind::Fitting,
        cosets: vec![vec![BigInt::zero(); group.dim()]],
        cover,
        upstairs,
        deck_injective: alpha.holonomy_injective(),
    })
}

/// The cover by `N0 = Γ^{|F|}`.
pub fn gamma_power_lift(group: &BieberbachGroup, alpha: &InfraEndo) -> Result<InfraCover> {
    let basis = gamma_power_lattice(group)?;
    let cosets = coset_representatives(&basis).ok_or(Error::InfiniteIndex)?;
    lattice_index(&basis).ok_or(Error::InfiniteIndex)?;
    let cover = TorusCover::new(basis)?;
    let upstairs = cover.local_map(&alpha.torus_map())?;
    let deck_injective = deck_map_injective(group, alpha, &cover, &cosets);
    Ok(InfraCover { kind: LiftKind::GammaPower, cover, upstairs, cosets, deck_injective })
}

/// The deck group `Γ / L` is `{(i, z mod L)}`; `α γ = γ' α` sends
/// `(i, z)` to `(j, A(t_i + z) + b − F_j b − t_j)` with `j = table[i]`.
fn deck_map_injective(group: &BieberbachGroup, alpha: &InfraEndo, cover: &TorusCover, cosets: &[Vec<BigInt>]) -> bool {
    let ar = alpha.linear().to_rational();
    let mut images = Vec::new();
    for (i, rep) in group.reps().iter().enumerate() {
        let j = alpha.table()[i];
        let rj = &group.reps()[j];
        let fb = rj.linear.to_rational().mul_vec(alpha.translation());
        for z in cosets {
            let tz: Vec<Rational> =
                rep.translation.iter().zip(z).map(|(t, zi)| t + Rational::from_integer(zi.clone())).collect();
            let w: Vec<Rational> = ar
                .mul_vec(&tz)
                .into_iter()
                .zip(alpha.translation())
                .zip(&fb)
                .zip(&rj.translation)
                .map(|(((a, b), f), t)| a + b - f - t)
                .collect();
            images.push((j, cover.to_local(&w)));
        }
    }
    let total = images.len();
    images.sort();
    images.dedup();
    images.len() == total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::{int, rat};
    use crate::infra::validate_endo;

    #[test]
    fn klein_bottle_gamma_power() {
        let k = BieberbachGroup::klein_bottle();
        let n0 = gamma_power_lattice(&k).unwrap();
        assert_eq!(n0, IntMat::from_i64(&[&[1, 0], &[0, 2]]));
        assert_eq!(lattice_index(&n0).unwrap(), BigInt::from(2));
        assert_eq!(gamma_power_lattice(&BieberbachGroup::torus(3)).unwrap(), IntMat::identity(3));
    }

    #[test]
    fn fibers() {
        let k = BieberbachGroup::klein_bottle();
        let e = validate_endo(&k, IntMat::from_i64(&[&[3, 0], &[0, 2]]), vec![int(0), int(0)]).unwrap();
        let fit = fitting_lift(&k, &e).unwrap();
        assert_eq!(fit.upstairs().linear(), &IntMat::from_i64(&[&[3, 0], &[0, 2]]));
        let x = [rat(1, 5), rat(1, 7)];
        assert_eq!(fit.fiber(&k, &x).len(), 2);
        let gp = gamma_power_lift(&k, &e).unwrap();
        assert_eq!(gp.fiber(&k, &x).len(), 4);
        assert_eq!(gp.degree(&k), BigInt::from(4));
        for w in gp.fiber(&k, &x) {
            assert_eq!(k.point(&gp.project(&w)).unwrap(), k.point(&x).unwrap());
        }
    }

    #[test]
    fn identity_lifts_to_identity() {
        let k = BieberbachGroup::klein_bottle();
        let e = validate_endo(&k, IntMat::identity(2), vec![int(0), int(0)]).unwrap();
        assert!(fitting_lift(&k, &e).unwrap().upstairs().linear().is_identity());
        assert!(gamma_power_lift(&k, &e).unwrap().deck_injective());
    }
}
