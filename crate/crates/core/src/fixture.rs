//! JSON fixtures for tori, class-2 nilmanifolds, flat Bieberbach groups and
//! torus covers. Fractions are `"p/q"` strings; a real-quadratic entry is
//! `{"a": "p/q", "b": "p/q", "d": int}` meaning `a + b√d`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exactmath::quad::{common_field, QuadExt};
use crate::exactmath::rational::{parse_rational, Rational};
use crate::exactmath::{IntMat, RatMat};
use crate::infra::{validate_endo, BieberbachGroup, HolonomyRep, InfraEndo};
use crate::nil::{make_endo, Class2Group, LatticeSubgroup, NilEndo};
use crate::torus::TorusEndo;

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Rational(String),
    Quad { a: String, b: String, d: i64 },
}

impl RawEntry {
    fn parse(&self) -> Result<QuadExt> {
        match self {
            RawEntry::Rational(s) => Ok(QuadExt::rational(parse_rational(s)?)),
            RawEntry::Quad { a, b, d } => QuadExt::new(parse_rational(a)?, parse_rational(b)?, *d),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTorus {
    id: Option<String>,
    n: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    b: Vec<RawEntry>,
    #[serde(default)]
    points: Vec<Vec<RawEntry>>,
    cover_lattice: Option<Vec<Vec<i64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNil {
    id: Option<String>,
    dim: usize,
    bracket: BTreeMap<String, Vec<String>>,
    lattice_basis: Vec<Vec<String>>,
    #[serde(default)]
    endos: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRep {
    #[serde(rename = "F")]
    f: Vec<Vec<i64>>,
    t: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAffine {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    b: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInfra {
    id: Option<String>,
    n: usize,
    reps: Vec<RawRep>,
    endo: RawAffine,
}

#[derive(Debug, Clone)]
pub struct TorusFixture {
    pub id: String,
    pub map: TorusEndo,
    pub points: Vec<Vec<QuadExt>>,
}

/// `f = g = A` on `L \ R^n` and `Z^n \ R^n`.
#[derive(Debug, Clone)]
pub struct CoverFixture {
    pub id: String,
    pub map: TorusEndo,
    pub lattice: IntMat,
    pub points: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone)]
pub struct NilFixture {
    pub id: String,
    pub group: Class2Group,
    pub lattice: LatticeSubgroup,
    /// Sorted by name.
    pub endos: Vec<(String, NilEndo)>,
}

impl NilFixture {
    pub fn endo(&self, name: Option<&str>) -> Result<&NilEndo> {
        match name {
            Some(name) => self
                .endos
                .iter()
                .find(|(k, _)| k == name)
                .map(|(_, e)| e)
                .ok_or_else(|| Error::Parse { what: "endomorphism name", input: name.to_string() }),
            None => self
                .endos
                .first()
                .map(|(_, e)| e)
                .ok_or_else(|| Error::Parse { what: "nil fixture without endomorphisms", input: self.id.clone() }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct InfraFixture {
    pub id: String,
    pub group: BieberbachGroup,
    pub endo: InfraEndo,
}

#[derive(Debug, Clone)]
pub enum Fixture {
    Torus(TorusFixture),
    Cover(CoverFixture),
    Nil(NilFixture),
    Infra(InfraFixture),
}

impl Fixture {
    pub fn id(&self) -> &str {
        match self {
            Fixture::Torus(f) => &f.id,
            Fixture::Cover(f) => &f.id,
            Fixture::Nil(f) => &f.id,
            Fixture::Infra(f) => &f.id,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Fixture::Torus(_) => "torus",
            Fixture::Cover(_) => "cover",
            Fixture::Nil(_) => "nil",
            Fixture::Infra(_) => "infra",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Fixture::Torus(f) => f.map.dim(),
            Fixture::Cover(f) => f.map.dim(),
            Fixture::Nil(f) => f.group.dim(),
            Fixture::Infra(f) => f.group.dim(),
        }
    }
}

fn bad(what: &'static str, detail: impl ToString) -> Error {
    Error::Parse { what, input: detail.to_string() }
}

fn int_matrix(rows: Vec<Vec<i64>>, n: usize, what: &'static str) -> Result<IntMat> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Shape(format!("{what} must be {n}x{n}")));
    }
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Ok(IntMat::from_i64(&refs))
}

fn rational_row(row: &[String]) -> Result<Vec<Rational>> {
    row.iter().map(|s| parse_rational(s)).collect()
}

fn rational_matrix(rows: &[Vec<String>], n: usize, what: &'static str) -> Result<RatMat> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Shape(format!("{what} must be {n}x{n}")));
    }
    RatMat::from_rows(rows.iter().map(|r| rational_row(r)).collect::<Result<_>>()?)
}

fn rational_points(points: &[Vec<QuadExt>]) -> Result<Vec<Vec<Rational>>> {
    points
        .iter()
        .map(|p| p.iter().map(|x| x.to_rational().ok_or(Error::IrrationalPoint)).collect())
        .collect()
}

fn torus_from_raw(raw: RawTorus) -> Result<Fixture> {
    let id = raw.id.unwrap_or_else(|| "torus".into());
    let n = raw.n;
    let a = int_matrix(raw.a, n, "A")?;
    let b = raw.b.iter().map(RawEntry::parse).collect::<Result<Vec<_>>>()?;
    let points = raw
        .points
        .iter()
        .map(|p| {
            if p.len() != n {
                return Err(Error::Shape(format!("points must have {n} coordinates")));
            }
            p.iter().map(RawEntry::parse).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    common_field(b.iter().chain(points.iter().flatten()))?;
    let map = TorusEndo::new(a, b)?;
    match raw.cover_lattice {
        None => Ok(Fixture::Torus(TorusFixture { id, map, points })),
        Some(l) => {
            if !map.has_rational_translation() {
                return Err(Error::IrrationalTranslation);
            }
            let lattice = int_matrix(l, n, "cover_lattice")?;
            let points = rational_points(&points)?;
            Ok(Fixture::Cover(CoverFixture { id, map, lattice, points }))
        }
    }
}

fn parse_pair(key: &str) -> Result<(usize, usize)> {
    let (i, j) = key.split_once(',').ok_or_else(|| bad("bracket key", key))?;
    let i = i.trim().parse().map_err(|_| bad("bracket key", key))?;
    let j = j.trim().parse().map_err(|_| bad("bracket key", key))?;
    Ok((i, j))
}

fn nil_from_raw(raw: RawNil) -> Result<Fixture> {
    let id = raw.id.unwrap_or_else(|| "nil".into());
    let brackets = raw
        .bracket
        .iter()
        .map(|(k, v)| {
            let (i, j) = parse_pair(k)?;
            Ok((i, j, rational_row(v)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let group = Class2Group::from_brackets(raw.dim, &brackets)?;
    let basis = raw.lattice_basis.iter().map(|r| rational_row(r)).collect::<Result<Vec<_>>>()?;
    let lattice = LatticeSubgroup::new(&group, &basis)?;
    let endos = raw
        .endos
        .iter()
        .map(|(name, m)| Ok((name.clone(), make_endo(&group, rational_matrix(m, raw.dim, "endomorphism")?, &lattice)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Fixture::Nil(NilFixture { id, group, lattice, endos }))
}

fn infra_from_raw(raw: RawInfra) -> Result<Fixture> {
    let id = raw.id.unwrap_or_else(|| "infra".into());
    let n = raw.n;
    let reps = raw
        .reps
        .into_iter()
        .map(|r| {
            let translation = rational_row(&r.t)?;
            if translation.len() != n {
                return Err(Error::Shape(format!("translation parts must have {n} entries")));
            }
            Ok(HolonomyRep { linear: int_matrix(r.f, n, "F")?, translation })
        })
        .collect::<Result<Vec<_>>>()?;
    let group = BieberbachGroup::new(reps)?;
    let endo = validate_endo(&group, int_matrix(raw.endo.a, n, "A")?, rational_row(&raw.endo.b)?)?;
    Ok(Fixture::Infra(InfraFixture { id, group, endo }))
}

/// Parses and validates a fixture; the kind is inferred from its keys.
pub fn parse_fixture(json: &str) -> Result<Fixture> {
    let value: serde_json::Value = serde_json::from_str(json).map_err(|e| bad("fixture JSON", e))?;
    let obj = value.as_object().ok_or_else(|| bad("fixture", "top level must be an object"))?;
    if obj.contains_key("reps") {
        infra_from_raw(serde_json::from_value(value).map_err(|e| bad("Bieberbach fixture", e))?)
    } else if obj.contains_key("bracket") {
        nil_from_raw(serde_json::from_value(value).map_err(|e| bad("nil fixture", e))?)
    } else {
        torus_from_raw(serde_json::from_value(value).map_err(|e| bad("torus fixture", e))?)
    }
}

pub fn load_fixture(path: &Path) -> Result<Fixture> {
    let text = std::fs::read_to_string(path).map_err(|e| bad("fixture file", format!("{}: {e}", path.display())))?;
    parse_fixture(&text)
}

/// Fixtures compiled into the library, by file stem.
pub const SHIPPED: &[(&str, &str)] = &[
    ("a1", include_str!("../fixtures/a1.json")),
    ("a2", include_str!("../fixtures/a2.json")),
    ("a3", include_str!("../fixtures/a3.json")),
    ("a4", include_str!("../fixtures/a4.json")),
    ("identity", include_str!("../fixtures/identity.json")),
    ("sqrt2_translation", include_str!("../fixtures/sqrt2_translation.json")),
    ("klein_bottle", include_str!("../fixtures/klein_bottle.json")),
    ("heisenberg", include_str!("../fixtures/heisenberg.json")),
    ("phi2", include_str!("../fixtures/phi2.json")),
    ("expand_cover", include_str!("../fixtures/expand_cover.json")),
];

pub fn shipped(name: &str) -> Result<Fixture> {
    let (_, json) = SHIPPED.iter().find(|(k, _)| *k == name).ok_or_else(|| bad("shipped fixture", name))?;
    parse_fixture(json)
}
