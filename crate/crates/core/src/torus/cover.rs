//! Finite covers `R^n / L → R^n / Z^n` for sublattices `L ≤ Z^n`.
//!
//! Upstairs points are stored in `L`-coordinates `w = L^{-T} x`, which turns
//! the cover into an ordinary torus `R^n / Z^n` with linear part
//! `L^{-T} A L^T` and translation `L^{-T} b`.

use num_bigint::BigInt;

use super::classify::classify_only;
use super::endo::TorusEndo;
use super::point::TorusPoint;
use crate::error::{Error, Result};
use crate::exactmath::normal_form::{coset_representatives, lattice_index};
use crate::exactmath::quad::QuadExt;
use crate::exactmath::rational::Rational;
use crate::exactmath::{IntMat, RatMat};
use crate::orbit::Classification;

#[derive(Debug, Clone)]
pub struct TorusCover {
    basis: IntMat,
    /// `L^T`, maps `L`-coordinates to ambient ones.
    to_ambient: RatMat,
    /// `L^{-T}`.
    to_local: RatMat,
    index: BigInt,
    cosets: Vec<Vec<BigInt>>,
}

impl TorusCover {
    /// Rows of `basis` span `L`.
    pub fn new(basis: IntMat) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::Shape("lattice basis must be square".into()));
        }
        let index = lattice_index(&basis).ok_or(Error::InfiniteIndex)?;
        let to_ambient = basis.transpose().to_rational();
        let to_local = to_ambient.inverse().ok_or(Error::InfiniteIndex)?;
        let cosets = coset_representatives(&basis).ok_or(Error::InfiniteIndex)?;
        Ok(Self { basis, to_ambient, to_local, index, cosets })
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    /// `[Z^n : L]`, the number of sheets.
    pub fn index(&self) -> &BigInt {
        &self.index
    }

    pub fn to_local(&self, x: &[Rational]) -> TorusPoint {
        TorusPoint::new(self.to_local.mul_vec(x))
    }

    pub fn to_ambient(&self, w: &TorusPoint) -> Vec<Rational> {
        self.to_ambient.mul_vec(w.coords())
    }

    pub fn project(&self, w: &TorusPoint) -> TorusPoint {
        TorusPoint::new(self.to_ambient(w))
    }

    /// All points over `q`, one per coset of `Z^n / L`.
    pub fn fiber(&self, q: &TorusPoint) -> Vec<TorusPoint> {
        let mut pts: Vec<TorusPoint> = self
            .cosets
            .iter()
            .map(|z| {
                let x: Vec<Rational> = q
                    .coords()
                    .iter()
                    .zip(z)
                    .map(|(c, zi)| c + Rational::from_integer(zi.clone()))
                    .collect();
                self.to_local(&x)
            })
            .collect();
        pts.sort();
        pts
    }

    /// The map `f_up` in `L`-coordinates; fails unless `A·L ⊆ L`.
    pub fn local_map(&self, f_up: &TorusEndo) -> Result<TorusEndo> {
        let a = self.to_local.mul(&f_up.linear().to_rational()).mul(&self.to_ambient);
        let a = a
            .to_integral()
            .map_err(|_| Error::LiftMismatch("linear part does not preserve the sublattice".into()))?;
        let b = self.to_local.mul_quad_vec(f_up.translation());
        TorusEndo::new(a, b)
    }

    /// Whether `z ↦ A z` is injective on `Z^n / L`.
    pub fn induced_injective(&self, a: &IntMat) -> bool {
        let ar = a.to_rational();
        self.cosets.iter().filter(|z| {
            let zr: Vec<Rational> = z.iter().map(|x| Rational::from_integer(x.clone())).collect();
            self.to_local.mul_vec(&ar.mul_vec(&zr)).iter().all(|c| c.is_integer())
        })
        .count()
            == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberEntry {
    /// In `L`-coordinates.
    pub point: TorusPoint,
    /// Ambient coordinates of a representative.
    pub ambient: Vec<Rational>,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferReport {
    pub index: BigInt,
    pub down: Classification,
    pub fiber: Vec<FiberEntry>,
    pub induced_injective: bool,
    /// Every fiber point is eventually periodic, with an orbit projecting
    /// onto the orbit of `q`: preperiod at least, period a multiple.
    pub statement1: bool,
    /// Some fiber point is periodic iff `q` is.
    pub statement2: bool,
    /// With an injective induced map, every fiber point is periodic iff `q`
    /// is; `None` when the map is not injective.
    pub statement3: Option<bool>,
}

impl TransferReport {
    pub fn holds(&self) -> bool {
        self.statement1 && self.statement2 && self.statement3.unwrap_or(true)
    }
}

fn check_lift(f_up: &TorusEndo, f_down: &TorusEndo) -> Result<()> {
    if f_up.linear() != f_down.linear() {
        return Err(Error::LiftMismatch("linear parts differ".into()));
    }
    let integral_gap = f_up.translation().iter().zip(f_down.translation()).all(|(u, d)| {
        let g: QuadExt = u - d;
        g.is_rational() && g.rational_part().is_integer()
    });
    if !integral_gap {
        return Err(Error::LiftMismatch("translations differ mod Z^n".into()));
    }
    Ok(())
}

/// Classifies `q` downstairs and its whole fiber upstairs, and checks the
/// three transfer statements on that fiber.
pub fn cover_transfer(
    l_basis: &IntMat,
    f_up: &TorusEndo,
    f_down: &TorusEndo,
    q: &[Rational],
) -> Result<TransferReport> {
    check_lift(f_up, f_down)?;
    let cover = TorusCover::new(l_basis.clone())?;
    let local = cover.local_map(f_up)?;
    let q = TorusPoint::new(q.to_vec());
    let down = classify_only(f_down, q.coords())?;
    let fiber = cover
        .fiber(&q)
        .into_iter()
        .map(|w| {
            let classification = classify_only(&local, w.coords())?;
            Ok(FiberEntry { ambient: cover.to_ambient(&w), point: w, classification })
        })
        .collect::<Result<Vec<_>>>()?;
    let down_periodic = down.verdict.is_periodic();
    let induced_injective = cover.induced_injective(f_up.linear());
    let statement1 = fiber.len() as u64 == bigint_to_u64(cover.index())
        && fiber.iter().all(|e| {
            let v = e.classification.verdict;
            v.preperiod() >= down.verdict.preperiod() && v.period() % down.verdict.period() == 0
        });
    let statement2 = fiber.iter().any(|e| e.classification.verdict.is_periodic()) == down_periodic;
    let statement3 = induced_injective
        .then(|| fiber.iter().all(|e| e.classification.verdict.is_periodic() == down_periodic));
    Ok(TransferReport {
        index: cover.index().clone(),
        down,
        fiber,
        induced_injective,
        statement1,
        statement2,
        statement3,
    })
}

fn bigint_to_u64(x: &BigInt) -> u64 {
    use num_traits::ToPrimitive;
    x.to_u64().unwrap_or(u64::MAX)
}
