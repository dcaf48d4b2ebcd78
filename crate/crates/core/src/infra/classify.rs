use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::endo::InfraEndo;
use super::group::{BieberbachGroup, InfraPoint};
use super::lift::{fitting_lift, gamma_power_lift, InfraCover, LiftKind};
use crate::error::{Error, Result};
use crate::exactmath::rational::{denominator_lcm, Rational};
use crate::orbit::{trace_orbit, Classification, OrbitResult, Verdict};
use crate::torus::{classify_only, relative_order, TorusPoint};

/// Fiber of one cover over the classified point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCheck {
    pub kind: LiftKind,
    pub degree: BigInt,
    pub fiber: Vec<(TorusPoint, Verdict)>,
    pub deck_injective: bool,
    /// Each fiber point projects to `x`, and its orbit projects onto the
    /// orbit of `x`: preperiod at least, period a multiple.
    pub eper_lifts: bool,
    /// Some fiber point is periodic iff `x` is.
    pub per_projects: bool,
    /// With injective deck map: every fiber point is periodic iff `x` is.
    pub per_lifts: Option<bool>,
}

impl CoverCheck {
    pub fn holds(&self) -> bool {
        self.eper_lifts && self.per_projects && self.per_lifts.unwrap_or(true)
    }
}

#[derive(Debug, Clone)]
pub struct InfraReport {
    pub point: InfraPoint,
    pub classification: Classification,
    pub orbit: OrbitResult<InfraPoint>,
    /// The Fitting cover (absent for singular `A`) and the `Γ^{|F|}` cover.
    pub covers: Vec<CoverCheck>,
}

impl InfraReport {
    pub fn verdict(&self) -> Verdict {
        self.classification.verdict
    }

    pub fn consistent(&self) -> bool {
        self.covers.iter().all(CoverCheck::holds)
    }
}

/// Canonical representatives of the orbit have denominators dividing the
/// lcm of those of `x`, `b` and every `t_i`.
fn downstairs_bound(group: &BieberbachGroup, alpha: &InfraEndo, x: &[Rational]) -> u64 {
    let mut all: Vec<Rational> = x.to_vec();
    all.extend_from_slice(alpha.translation());
    for r in group.reps() {
        all.extend_from_slice(&r.translation);
    }
    num_traits::pow(denominator_lcm(&all), x.len()).to_u64().unwrap_or(u64::MAX).saturating_add(1)
}

/// Orbit of `Γ x` on `Γ \ R^n` alone.
pub fn classify_infra_only(group: &BieberbachGroup, alpha: &InfraEndo, x: &[Rational]) -> Result<(Classification, OrbitResult<InfraPoint>)> {
    let start = group.point(x)?;
    let t = trace_orbit(start, |p| alpha.step(group, p), downstairs_bound(group, alpha, x))?;
    let trace = t.states.iter().map(|p| relative_order(p.coords())).collect();
    let orbit = OrbitResult::from_trajectory(t);
    Ok((Classification { verdict: orbit.verdict(), relative_order_trace: trace }, orbit))
}

fn check_cover(group: &BieberbachGroup, cover: &InfraCover, x: &[Rational], down: Verdict) -> Result<CoverCheck> {
    let target = group.point(x)?;
    let fiber = cover
        .fiber(group, x)
        .into_par_iter()
        .map(|w| {
            let c = classify_only(cover.upstairs(), w.coords())?;
            let projects = group.point(&cover.project(&w))? == target;
            Ok((w, c.verdict, projects))
        })
        .collect::<Result<Vec<_>>>()?;
    let degree = cover.degree(group);
    let down_periodic = down.is_periodic();
    let eper_lifts = fiber.iter().all(|(_, v, projects)| {
        *projects && v.preperiod() >= down.preperiod() && v.period() % down.period() == 0
    });
    let per_projects = fiber.iter().any(|(_, v, _)| v.is_periodic()) == down_periodic;
    let per_lifts = cover
        .deck_injective()
        .then(|| fiber.iter().all(|(_, v, _)| v.is_periodic() == down_periodic));
    Ok(CoverCheck {
        kind: cover.kind,
        degree,
        fiber: fiber.into_iter().map(|(w, v, _)| (w, v)).collect(),
        deck_injective: cover.deck_injective(),
        eper_lifts,
        per_projects,
        per_lifts,
    })
}

/// Classifies `Γ x` downstairs and checks the verdict against the fibers of
/// both torus covers.
pub fn classify_infra(group: &BieberbachGroup, alpha: &InfraEndo, x: &[Rational]) -> Result<InfraReport> {
    let (classification, orbit) = classify_infra_only(group, alpha, x)?;
    let mut lifts = Vec::with_capacity(2);
    match fitting_lift(group, alpha) {
        Ok(c) => lifts.push(c),
        Err(Error::Singular(_)) => {}
        Err(e) => return Err(e),
    }
    lifts.push(gamma_power_lift(group, alpha)?);
    let covers = lifts
        .iter()
        .map(|c| check_cover(group, c, x, classification.verdict))
        .collect::<Result<Vec<_>>>()?;
    Ok(InfraReport { point: orbit.tail.first().or(orbit.cycle.first()).cloned().expect("nonempty orbit"), classification, orbit, covers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::{int, rat};
    use crate::exactmath::IntMat;
    use crate::infra::validate_endo;

    fn klein(a: &[&[i64]], b: Vec<Rational>) -> (BieberbachGroup, InfraEndo) {
        let k = BieberbachGroup::klein_bottle();
        let e = validate_endo(&k, IntMat::from_i64(a), b).unwrap();
        (k, e)
    }

    #[test]
    fn klein_bottle_examples() {
        let (k, e) = klein(&[&[3, 0], &[0, 2]], vec![int(0), int(0)]);
        let r = classify_infra(&k, &e, &[rat(1, 5), rat(1, 7)]).unwrap();
        assert!(r.verdict().is_periodic());
        assert!(r.consistent());
        assert_eq!(r.covers.len(), 2);
        let r = classify_infra(&k, &e, &[rat(1, 3), int(0)]).unwrap();
        assert!(!r.verdict().is_periodic());
        assert!(r.consistent());
        let r = classify_infra(&k, &e, &[int(0), int(0)]).unwrap();
        assert_eq!(r.verdict(), Verdict::Periodic { period: 1 });
    }

    #[test]
    fn torus_case_matches_torus_engine() {
        let t = BieberbachGroup::torus(2);
        let e = validate_endo(&t, IntMat::from_i64(&[&[2, 1], &[1, 1]]), vec![rat(1, 4), int(0)]).unwrap();
        let x = [rat(1, 6), rat(5, 6)];
        let r = classify_infra(&t, &e, &x).unwrap();
        assert_eq!(r.classification, classify_only(&e.torus_map(), &x).unwrap());
        assert!(r.consistent());
    }

    #[test]
    fn singular_linear_part_uses_gamma_power_cover_only() {
        let (k, e) = klein(&[&[1, 0], &[0, 0]], vec![int(0), int(0)]);
        let r = classify_infra(&k, &e, &[rat(1, 3), rat(1, 5)]).unwrap();
        assert_eq!(r.covers.len(), 1);
        assert_eq!(r.covers[0].kind, LiftKind::GammaPower);
        assert!(r.consistent());
    }
}
