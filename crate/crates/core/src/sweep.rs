//! Exhaustive sweeps over rational points of bounded denominator, producing
//! deterministic JSON reports.
//!
//! Work is split by denominator; each denominator is classified
//! independently and the results are merged in increasing order, so the
//! report does not depend on the number of workers.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactmath::rational::Rational;
use crate::fixture::{CoverFixture, Fixture, InfraFixture, NilFixture, TorusFixture};
use crate::infra::{classify_infra, LiftKind};
use crate::nil::{classify_nil, computeper_check, NilEndo};
use crate::orbit::Verdict;
use crate::torus::{
    classify, computeper_trace_check, cover_transfer, has_periodic_point, notper_trace_check, perd_sufficient,
    PeriodicSearch, TorusEndo,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Counterexamples kept per assertion; the failure count is always exact.
const MAX_COUNTEREXAMPLES: usize = 32;

/// Fixture-level claims checked by a scan in addition to the general results that
/// apply to every map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    /// A point is periodic iff its relative order is odd.
    PerIsOddDenominators,
    /// Every relative order up to the bound occurs on a periodic point.
    EveryOrderPeriodic,
    /// Over the origin exactly one fiber point is periodic.
    OriginFiberSinglePeriodic,
}

fn expectations_for(id: &str) -> &'static [Expectation] {
    match id {
        "A1" | "A3" => &[Expectation::PerIsOddDenominators],
        "A2" | "A4" => &[Expectation::EveryOrderPeriodic],
        "expand-cover" => &[Expectation::OriginFiberSinglePeriodic],
        _ => &[],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointRecord {
    pub point: Vec<String>,
    pub verdict: &'static str,
    pub preperiod: usize,
    pub period: usize,
    pub relative_order: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber: Option<Vec<PointRecord>>,
}

impl PointRecord {
    fn new(point: &[Rational], verdict: Verdict, relative_order: &BigInt) -> Self {
        Self {
            point: format_point(point),
            verdict: verdict.name(),
            preperiod: verdict.preperiod(),
            period: verdict.period(),
            relative_order: relative_order.to_string(),
            fiber: None,
        }
    }

    pub fn is_periodic(&self) -> bool {
        self.preperiod == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DenominatorTable {
    pub denominator: u64,
    pub points: Vec<PointRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub point: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssertionSummary {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    pub failures: u64,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub schema_version: u32,
    pub fixture: String,
    pub kind: &'static str,
    pub map: serde_json::Value,
    pub max_den: u64,
    pub tables: Vec<DenominatorTable>,
    pub assertions: Vec<AssertionSummary>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn assertion(&self, name: &str) -> Option<&AssertionSummary> {
        self.assertions.iter().find(|a| a.name == name)
    }

    pub fn records(&self) -> impl Iterator<Item = &PointRecord> {
        self.tables.iter().flat_map(|t| &t.points)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    pub max_den: u64,
    pub workers: usize,
}

pub fn format_point(v: &[Rational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// All `q ∈ [0, 1)^n` whose denominator lcm is exactly `d`, in
/// lexicographic order.
pub fn points_with_denominator(n: usize, d: u64) -> Vec<Vec<Rational>> {
    let dd = BigInt::from(d);
    let mut out = Vec::new();
    let mut k = vec![0u64; n];
    loop {
        let g = k.iter().fold(d, |acc, &x| acc.gcd(&x));
        if g == 1 {
            out.push(k.iter().map(|&x| Rational::new(x.into(), dd.clone())).collect());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            k[i] += 1;
            if k[i] < d {
                break;
            }
            k[i] = 0;
        }
    }
}

#[derive(Debug, Clone)]
struct Tally {
    name: &'static str,
    checked: u64,
    failures: u64,
    counterexamples: Vec<Counterexample>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { name, checked: 0, failures: 0, counterexamples: Vec::new() }
    }

    fn check(&mut self, ok: bool, point: &[Rational], detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(Counterexample { point: format_point(point), detail: detail() });
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failures += other.failures;
        let room = MAX_COUNTEREXAMPLES - self.counterexamples.len();
        self.counterexamples.extend(other.counterexamples.into_iter().take(room));
    }

    fn summary(self) -> AssertionSummary {
        AssertionSummary {
            name: self.name.to_string(),
            passed: self.failures == 0,
            checked: self.checked,
            failures: self.failures,
            counterexamples: self.counterexamples,
        }
    }
}

/// Per-denominator result: table rows plus one tally per assertion name.
struct Chunk {
    table: DenominatorTable,
    tallies: Vec<Tally>,
}

fn merge_chunks(names: &[&'static str], chunks: Vec<Chunk>) -> (Vec<DenominatorTable>, Vec<Tally>) {
    let mut totals: Vec<Tally> = names.iter().map(|n| Tally::new(n)).collect();
    let mut tables = Vec::with_capacity(chunks.len());
    for c in chunks {
        for t in c.tallies {
            let slot = totals.iter_mut().find(|x| x.name == t.name).expect("registered assertion");
            slot.merge(t);
        }
        tables.push(c.table);
    }
    (tables, totals)
}

fn run_parallel<T: Send>(workers: usize, job: impl Fn() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Inconsistent(format!("thread pool: {e}")))?;
    Ok(pool.install(job))
}

fn rational_matrix_json(m: &crate::exactmath::RatMat) -> serde_json::Value {
    json!(m.row_iter().map(format_point).collect::<Vec<_>>())
}

pub fn map_parameters(fixture: &Fixture) -> serde_json::Value {
    let torus = |f: &TorusEndo| {
        json!({
            "A": f.linear().row_iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "b": f.translation().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "det": f.det().to_string(),
        })
    };
    match fixture {
        Fixture::Torus(f) => torus(&f.map),
        Fixture::Cover(f) => {
            let mut v = torus(&f.map);
            v["cover_lattice"] =
                json!(f.lattice.row_iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
            v
        }
        Fixture::Nil(f) => json!({
            "dim": f.group.dim(),
            "endos": f.endos.iter().map(|(k, e)| json!({"name": k, "matrix": rational_matrix_json(e.matrix()), "det": e.det().to_string()})).collect::<Vec<_>>(),
        }),
        Fixture::Infra(f) => json!({
            "holonomy_order": f.group.holonomy_order(),
            "A": f.endo.linear().row_iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "b": format_point(f.endo.translation()),
        }),
    }
}

/// Exhaustive classification of all points with denominator `≤ max_den`.
///
/// For nil fixtures the first endomorphism (by name) is used unless
/// `endo` names another one; points are then grid points of the adapted
/// coordinates, tabulated by their denominator.
pub fn scan(fixture: &Fixture, opts: ScanOptions, endo: Option<&str>) -> Result<ScanReport> {
    if opts.max_den == 0 {
        return Err(Error::Validation("max_den must be at least 1".into()));
    }
    let expectations = expectations_for(fixture.id());
    let (tables, tallies) = match fixture {
        Fixture::Torus(f) => scan_torus(f, opts, expectations)?,
        Fixture::Cover(f) => scan_cover(f, opts, expectations)?,
        Fixture::Nil(f) => scan_nil(f, f.endo(endo)?, opts)?,
        Fixture::Infra(f) => scan_infra(f, opts)?,
    };
    Ok(ScanReport {
        schema_version: SCHEMA_VERSION,
        fixture: fixture.id().to_string(),
        kind: fixture.kind(),
        map: map_parameters(fixture),
        max_den: opts.max_den,
        tables,
        assertions: tallies.into_iter().map(Tally::summary).collect(),
    })
}

fn scan_torus(
    f: &TorusFixture,
    opts: ScanOptions,
    expectations: &[Expectation],
) -> Result<(Vec<DenominatorTable>, Vec<Tally>)> {
    let map = &f.map;
    if !map.has_rational_translation() {
        return Err(Error::IrrationalTranslation);
    }
    let perd_applies = map.is_linear() && !map.is_singular();
    let names = ["subeper", "perD", "notper", "computeper", "per_is_odd_denominators", "every_order_periodic"];
    let chunks = run_parallel(opts.workers, || {
        (1..=opts.max_den)
            .into_par_iter()
            .map(|d| {
                let mut subeper = Tally::new("subeper");
                let mut perd = Tally::new("perD");
                let mut notper = Tally::new("notper");
                let mut computeper = Tally::new("computeper");
                let mut odd = Tally::new("per_is_odd_denominators");
                let mut every = Tally::new("every_order_periodic");
                let mut points = Vec::new();
                let mut found_periodic = false;
                for q in points_with_denominator(map.dim(), d) {
                    let (c, orbit) = match classify(map, &q) {
                        Ok(r) => r,
                        Err(e) => {
                            subeper.check(false, &q, || e.to_string());
                            continue;
                        }
                    };
                    subeper.check(true, &q, String::new);
                    let v = c.verdict;
                    found_periodic |= v.is_periodic();
                    if perd_applies && perd_sufficient(map, &q).unwrap_or(false) {
                        perd.check(v.is_periodic(), &q, || format!("gcd(det, {d}) = 1 but verdict {v}"));
                    }
                    if v.is_periodic() {
                        notper.check(notper_trace_check(&orbit), &q, || "relative order varies on cycle".into());
                        computeper.check(computeper_trace_check(&orbit), &q, || "prime support varies on cycle".into());
                    }
                    if expectations.contains(&Expectation::PerIsOddDenominators) {
                        odd.check(v.is_periodic() == (d % 2 == 1), &q, || format!("ord {d}, verdict {v}"));
                    }
                    points.push(PointRecord::new(&q, v, &BigInt::from(d)));
                }
                if expectations.contains(&Expectation::EveryOrderPeriodic) {
                    let witness = vec![Rational::new(1.into(), BigInt::from(d)); map.dim()];
                    every.check(found_periodic, &witness, || format!("no periodic point of relative order {d}"));
                }
                Chunk { table: DenominatorTable { denominator: d, points }, tallies: vec![subeper, perd, notper, computeper, odd, every] }
            })
            .collect::<Vec<_>>()
    })?;
    let (tables, tallies) = merge_chunks(&names, chunks);
    Ok((tables, keep_relevant(tallies, perd_applies, expectations)))
}

fn keep_relevant(tallies: Vec<Tally>, perd_applies: bool, expectations: &[Expectation]) -> Vec<Tally> {
    tallies
        .into_iter()
        .filter(|t| match t.name {
            "perD" => perd_applies,
            "per_is_odd_denominators" => expectations.contains(&Expectation::PerIsOddDenominators),
            "every_order_periodic" => expectations.contains(&Expectation::EveryOrderPeriodic),
            "origin_fiber_single_periodic" => expectations.contains(&Expectation::OriginFiberSinglePeriodic),
            _ => true,
        })
        .collect()
}

fn scan_cover(
    f: &CoverFixture,
    opts: ScanOptions,
    expectations: &[Expectation],
) -> Result<(Vec<DenominatorTable>, Vec<Tally>)> {
    let names = ["eper_lifts", "per_projects", "per_lifts_when_injective", "origin_fiber_single_periodic"];
    let chunks = run_parallel(opts.workers, || {
        (1..=opts.max_den)
            .into_par_iter()
            .map(|d| -> Result<Chunk> {
                let mut s1 = Tally::new("eper_lifts");
                let mut s2 = Tally::new("per_projects");
                let mut s3 = Tally::new("per_lifts_when_injective");
                let mut origin = Tally::new("origin_fiber_single_periodic");
                let mut points = Vec::new();
                for q in points_with_denominator(f.map.dim(), d) {
                    let r = cover_transfer(&f.lattice, &f.map, &f.map, &q)?;
                    s1.check(r.statement1, &q, || "fiber orbit does not project onto downstairs orbit".into());
                    s2.check(r.statement2, &q, || "periodicity of fiber and base disagree".into());
                    if let Some(ok) = r.statement3 {
                        s3.check(ok, &q, || "injective induced map but fiber not uniformly periodic".into());
                    }
                    let periodic_in_fiber = r.fiber.iter().filter(|e| e.classification.verdict.is_periodic()).count();
                    if d == 1 && expectations.contains(&Expectation::OriginFiberSinglePeriodic) {
                        origin.check(periodic_in_fiber == 1, &q, || format!("{periodic_in_fiber} periodic fiber points"));
                    }
                    let mut rec = PointRecord::new(&q, r.down.verdict, &BigInt::from(d));
                    rec.fiber = Some(
                        r.fiber
                            .iter()
                            .map(|e| {
                                PointRecord::new(&e.ambient, e.classification.verdict, &e.point.relative_order())
                            })
                            .collect(),
                    );
                    points.push(rec);
                }
                Ok(Chunk { table: DenominatorTable { denominator: d, points }, tallies: vec![s1, s2, s3, origin] })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let (tables, tallies) = merge_chunks(&names, chunks);
    Ok((tables, keep_relevant(tallies, false, expectations)))
}

fn scan_infra(f: &InfraFixture, opts: ScanOptions) -> Result<(Vec<DenominatorTable>, Vec<Tally>)> {
    let names = ["fitting_cover", "gamma_power_cover", "reduc_per_lifts"];
    let chunks = run_parallel(opts.workers, || {
        (1..=opts.max_den)
            .into_par_iter()
            .map(|d| -> Result<Chunk> {
                let mut fit = Tally::new("fitting_cover");
                let mut gp = Tally::new("gamma_power_cover");
                let mut reduc = Tally::new("reduc_per_lifts");
                let mut points = Vec::new();
                for x in points_with_denominator(f.group.dim(), d) {
                    let r = classify_infra(&f.group, &f.endo, &x)?;
                    for c in &r.covers {
                        let t = match c.kind {
                            LiftKind::Fitting => &mut fit,
                            LiftKind::GammaPower => &mut gp,
                        };
                        t.check(c.holds(), &x, || format!("{:?} cover disagrees with verdict {}", c.kind, r.verdict()));
                        if let Some(ok) = c.per_lifts {
                            reduc.check(ok, &x, || format!("{:?} fiber of a periodic point not all periodic", c.kind));
                        }
                    }
                    let ord = crate::torus::relative_order(r.point.coords());
                    points.push(PointRecord::new(&x, r.verdict(), &ord));
                }
                Ok(Chunk { table: DenominatorTable { denominator: d, points }, tallies: vec![fit, gp, reduc] })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(merge_chunks(&names, chunks))
}

fn nil_det(endo: &NilEndo) -> Option<BigInt> {
    endo.integer_det().ok().filter(|d| !d.is_zero())
}

/// Canonical adapted-coordinate grid points with denominator exactly `d`.
fn nil_grid(f: &NilFixture, d: u64) -> Vec<Vec<Rational>> {
    let mut seen = BTreeSet::new();
    points_with_denominator(f.group.dim(), d)
        .into_iter()
        .filter(|w| seen.insert(f.lattice.canonical_adapted(w)))
        .collect()
}

fn scan_nil(f: &NilFixture, endo: &NilEndo, opts: ScanOptions) -> Result<(Vec<DenominatorTable>, Vec<Tally>)> {
    let det = nil_det(endo);
    let names = ["subeper", "perD", "computeper"];
    let chunks = run_parallel(opts.workers, || {
        (1..=opts.max_den)
            .into_par_iter()
            .map(|d| -> Result<Chunk> {
                let mut subeper = Tally::new("subeper");
                let mut perd = Tally::new("perD");
                let mut computeper = Tally::new("computeper");
                let mut points = Vec::new();
                for w in nil_grid(f, d) {
                    let x = f.lattice.exp_coords(&w);
                    let g = f.group.element(x.clone())?;
                    let (c, orbit) = match classify_nil(endo, &f.lattice, &g) {
                        Ok(r) => r,
                        Err(e) => {
                            subeper.check(false, &x, || e.to_string());
                            continue;
                        }
                    };
                    subeper.check(true, &x, String::new);
                    let v = c.verdict;
                    let ord = c.relative_order_trace[0].clone();
                    if let Some(det) = &det {
                        if det.gcd(&ord).is_one() {
                            perd.check(v.is_periodic(), &x, || format!("gcd(D, {ord}) = 1 but verdict {v}"));
                        }
                    }
                    if v.is_periodic() {
                        computeper.check(computeper_check(&f.lattice, &orbit)?, &x, || {
                            "prime support varies on cycle".into()
                        });
                    }
                    points.push(PointRecord::new(&x, v, &ord));
                }
                Ok(Chunk { table: DenominatorTable { denominator: d, points }, tallies: vec![subeper, perd, computeper] })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let (tables, tallies) = merge_chunks(&names, chunks);
    Ok((tables, tallies.into_iter().filter(|t| t.name != "perD" || det.is_some()).collect()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellSummary {
    pub m: u64,
    pub cells: u64,
    pub hit: u64,
    /// Lower corners `k/m` of cells without a periodic point found.
    pub missing: Vec<Vec<u64>>,
    /// One periodic point per hit cell, in cell order.
    pub witnesses: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub schema_version: u32,
    pub fixture: String,
    pub kind: &'static str,
    pub det: String,
    pub m_max: u64,
    /// The map has no periodic point at all.
    pub per_empty: bool,
    pub levels: Vec<CellSummary>,
}

impl DensityReport {
    pub fn passed(&self) -> bool {
        self.per_empty || self.levels.iter().all(|l| l.missing.is_empty())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Cells of side `1/m` searched for a periodic point among points of
/// denominator up to this multiple of `m`.
const DENSITY_SEARCH_FACTOR: u64 = 4;

fn cell_points(corner: &[u64], m: u64, d: u64) -> Vec<Vec<Rational>> {
    // Numerators k with k/d ∈ [c/m, (c+1)/m), i.e. c·d ≤ k·m < (c+1)·d.
    let ranges: Vec<(u64, u64)> = corner.iter().map(|&c| ((c * d).div_ceil(m), ((c + 1) * d).div_ceil(m))).collect();
    let mut out = Vec::new();
    let mut k: Vec<u64> = ranges.iter().map(|r| r.0).collect();
    if ranges.iter().any(|r| r.0 >= r.1) {
        return out;
    }
    loop {
        out.push(k.iter().map(|&x| Rational::new(x.into(), BigInt::from(d))).collect());
        let mut i = k.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            k[i] += 1;
            if k[i] < ranges[i].1 {
                break;
            }
            k[i] = ranges[i].0;
        }
    }
}

fn all_corners(n: usize, m: u64) -> Vec<Vec<u64>> {
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut c = vec![0; n];
            for slot in c.iter_mut().rev() {
                *slot = idx % m;
                idx /= m;
            }
            c
        })
        .collect()
}

/// For each `m ≤ m_max` coprime to the determinant, checks that every cell
/// `Π [k_i/m, (k_i+1)/m)` contains a periodic point. Nil cells live in
/// canonical adapted coordinates.
pub fn density(fixture: &Fixture, m_max: u64, workers: usize, endo: Option<&str>) -> Result<DensityReport> {
    let (dim, det, per_empty): (usize, BigInt, bool) = match fixture {
        Fixture::Torus(f) => {
            let empty = !f.map.has_rational_translation()
                && has_periodic_point(&f.map, crate::torus::DEFAULT_PERIOD_SEARCH)? == PeriodicSearch::Empty;
            if !empty && !f.map.has_rational_translation() {
                return Err(Error::IrrationalTranslation);
            }
            (f.map.dim(), f.map.det().clone(), empty)
        }
        Fixture::Nil(f) => (f.group.dim(), f.endo(endo)?.integer_det()?, false),
        Fixture::Cover(_) | Fixture::Infra(_) => {
            return Err(Error::Validation(format!("density is defined for torus and nil fixtures, not {}", fixture.kind())))
        }
    };
    let is_periodic = |p: &[Rational]| -> Result<bool> {
        match fixture {
            Fixture::Torus(f) => Ok(classify(&f.map, p)?.0.verdict.is_periodic()),
            Fixture::Nil(f) => {
                let g = f.group.element(f.lattice.exp_coords(p))?;
                Ok(classify_nil(f.endo(endo)?, &f.lattice, &g)?.0.verdict.is_periodic())
            }
            _ => unreachable!("rejected above"),
        }
    };
    let admissible: Vec<u64> = (2..=m_max).filter(|&m| det.abs().gcd(&BigInt::from(m)).is_one()).collect();
    let levels = if per_empty {
        Vec::new()
    } else {
        run_parallel(workers, || {
            admissible
                .iter()
                .map(|&m| -> Result<CellSummary> {
                    let found = all_corners(dim, m)
                        .into_par_iter()
                        .map(|corner| -> Result<(Vec<u64>, Option<Vec<Rational>>)> {
                            for d in 1..=DENSITY_SEARCH_FACTOR * m {
                                for p in cell_points(&corner, m, d) {
                                    if is_periodic(&p)? {
                                        return Ok((corner, Some(p)));
                                    }
                                }
                            }
                            Ok((corner, None))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let cells = found.len() as u64;
                    let mut missing = Vec::new();
                    let mut witnesses = Vec::new();
                    for (corner, w) in found {
                        match w {
                            Some(p) => witnesses.push(format_point(&p)),
                            None => missing.push(corner),
                        }
                    }
                    Ok(CellSummary { m, cells, hit: cells - missing.len() as u64, missing, witnesses })
                })
                .collect::<Result<Vec<_>>>()
        })??
    };
    Ok(DensityReport {
        schema_version: SCHEMA_VERSION,
        fixture: fixture.id().to_string(),
        kind: fixture.kind(),
        det: det.to_string(),
        m_max,
        per_empty,
        levels,
    })
}

/// Number of points `points_with_denominator(n, d)` returns.
pub fn count_with_denominator(n: usize, d: u64) -> u64 {
    // Jordan's totient J_n(d) = d^n Π_{p | d} (1 − p^{−n}).
    let mut result = BigInt::from(d).pow(n as u32);
    for p in crate::exactmath::rational::prime_support(&BigInt::from(d)) {
        result = result / p.pow(n as u32) * (p.pow(n as u32) - BigInt::one());
    }
    result.to_u64().expect("small")
}
