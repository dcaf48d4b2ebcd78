use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::classify::classify;
use super::endo::TorusEndo;
use super::point::TorusPoint;
use crate::error::{Error, Result};
use crate::exactmath::quad::{split_vector, QuadExt};
use crate::exactmath::rational::Rational;
use crate::exactmath::{rational_kernel, solve_integer, solve_mod_lattice, solve_rational, IntMat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PeriodicSearch {
    /// A periodic point of period dividing `k` exists.
    Yes(u64),
    Empty,
    UnknownUpTo(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TranslationPeriodicity {
    AllPointsPeriodic,
    Empty,
}

/// A point `x` with `f(x) ≡ x`, if one exists.
pub fn fixed_point(f: &TorusEndo) -> Result<Option<TorusPoint>> {
    let b = f.rational_translation()?;
    let m = f.linear().sub(&IntMat::identity(f.dim()));
    let c: Vec<Rational> = b.iter().map(|x| -x).collect();
    Ok(solve_mod_lattice(&m, &c).map(TorusPoint::new))
}

/// A point fixed by `f^k`.
pub fn periodic_point_of_period(f: &TorusEndo, k: u64) -> Result<Option<TorusPoint>> {
    if k == 0 {
        return Err(Error::Validation("period must be positive".into()));
    }
    fixed_point(&f.iterate(k))
}

/// Pure translations `x ↦ x + b` have periodic points exactly when `b` is
/// rational, and then every point is periodic.
pub fn translation_periodicity(b: &[QuadExt]) -> TranslationPeriodicity {
    if b.iter().all(QuadExt::is_rational) {
        TranslationPeriodicity::AllPointsPeriodic
    } else {
        TranslationPeriodicity::Empty
    }
}

/// Decides whether `f` has a periodic point.
///
/// * `det(A − I) ≠ 0`: a real fixed point exists, `Yes(1)`.
/// * rational `b`: the orbit of `0` is finite, so the answer is always
///   `Yes(k)` with `k` the least period found.
/// * `A = I`, irrational `b`: `Empty`.
/// * otherwise, irrational `b`: exact solvability test for each `k ≤ k_max`.
pub fn has_periodic_point(f: &TorusEndo, k_max: u64) -> Result<PeriodicSearch> {
    let n = f.dim();
    if !f.linear().sub(&IntMat::identity(n)).det().is_zero() {
        return Ok(PeriodicSearch::Yes(1));
    }
    if f.has_rational_translation() {
        let (c, _) = classify(f, &vec![Rational::zero(); n])?;
        let period = c.verdict.period() as u64;
        for k in 1..period.min(k_max.max(1)) {
            if periodic_point_of_period(f, k)?.is_some() {
                return Ok(PeriodicSearch::Yes(k));
            }
        }
        return Ok(PeriodicSearch::Yes(period));
    }
    if f.linear().is_identity() {
        return Ok(match translation_periodicity(f.translation()) {
            TranslationPeriodicity::AllPointsPeriodic => PeriodicSearch::Yes(1),
            TranslationPeriodicity::Empty => PeriodicSearch::Empty,
        });
    }
    let mut g = f.clone();
    for k in 1..=k_max {
        if real_periodic_solution(&g)?.is_some() {
            return Ok(PeriodicSearch::Yes(k));
        }
        g = TorusEndo::new(f.linear().mul(g.linear()), f.apply_real(g.translation()))?;
    }
    Ok(PeriodicSearch::UnknownUpTo(k_max))
}

/// A real fixed point of `f` (coordinates in the field of `b`), found by
/// solving `(A − I)x = z − b` with `z` integral.
pub fn real_periodic_solution(f: &TorusEndo) -> Result<Option<Vec<QuadExt>>> {
    let n = f.dim();
    let m = f.linear().sub(&IntMat::identity(n)).to_rational();
    let (c0, c1) = split_vector(f.translation());
    // Rows of `w` span the left kernel of `m`, so `m x = y` is solvable iff `w y = 0`.
    let left = rational_kernel(&m.transpose());
    let w: Vec<Vec<BigInt>> = left.basis().iter().map(|r| clear_denominators(r)).collect();
    let dot = |row: &[BigInt], v: &[Rational]| -> Rational {
        row.iter().zip(v).map(|(a, x)| Rational::from_integer(a.clone()) * x).sum()
    };
    if w.iter().any(|row| !dot(row, &c1).is_zero()) {
        return Ok(None);
    }
    let mut rhs = Vec::with_capacity(w.len());
    for row in &w {
        let r = dot(row, &c0);
        if !r.is_integer() {
            return Ok(None);
        }
        rhs.push(r.to_integer());
    }
    let z = if w.is_empty() {
        vec![BigInt::zero(); n]
    } else {
        let wm = IntMat::from_rows(w)?;
        match solve_integer(&wm, &rhs) {
            Some(z) => z,
            None => return Ok(None),
        }
    };
    let y0: Vec<Rational> = z.iter().zip(&c0).map(|(zi, c)| Rational::from_integer(zi.clone()) - c).collect();
    let y1: Vec<Rational> = c1.iter().map(|c| -c).collect();
    let x0 = solve_rational(&m, &y0).ok_or_else(|| Error::Inconsistent("rational part unsolvable".into()))?;
    let x1 = solve_rational(&m, &y1).ok_or_else(|| Error::Inconsistent("irrational part unsolvable".into()))?;
    let d = f.field();
    x0.into_iter()
        .zip(x1)
        .map(|(a, b)| match d {
            Some(d) if !b.is_zero() => QuadExt::new(a, b, d),
            _ => Ok(QuadExt::rational(a)),
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

pub(crate) fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let l = crate::exactmath::rational::denominator_lcm(v);
    v.iter().map(|x| (x * &l).to_integer()).collect()
}

/// The linear model of an affine map with a fixed point `g0`:
/// `f(x) = g0 + A(x − g0)`, so `x ↦ x − g0` conjugates `f` to `x ↦ A x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjugation {
    pub linear: TorusEndo,
    pub base_point: TorusPoint,
}

impl Conjugation {
    pub fn to_linear(&self, x: &TorusPoint) -> TorusPoint {
        shift(x, self.base_point.coords(), false)
    }

    pub fn from_linear(&self, y: &TorusPoint) -> TorusPoint {
        shift(y, self.base_point.coords(), true)
    }
}

fn shift(x: &TorusPoint, g: &[Rational], add: bool) -> TorusPoint {
    TorusPoint::new(
        x.coords()
            .iter()
            .zip(g)
            .map(|(a, b)| if add { a + b } else { a - b })
            .collect(),
    )
}

pub fn conjugate_to_linear(f: &TorusEndo) -> Result<Option<Conjugation>> {
    Ok(fixed_point(f)?.map(|g0| Conjugation { linear: f.linear_part(), base_point: g0 }))
}

/// Whether a real point satisfies `f(x) ≡ x (mod Z^n)`.
pub fn is_fixed_mod_lattice(f: &TorusEndo, x: &[QuadExt]) -> bool {
    f.apply_real(x).iter().zip(x).all(|(y, x)| {
        let d = y - x;
        d.is_rational() && d.rational_part().is_integer()
    })
}
