//! Exact orbit classification of rational points.
//!
//! With `L = lcm(den q, den b)` the orbit of `q` stays inside `(1/L)Z^n / Z^n`,
//! so the state is the residue vector `L·x mod L`. Small moduli run on `i128`;
//! everything else on `BigInt`.

use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::endo::TorusEndo;
use super::point::TorusPoint;
use crate::error::{Error, Result};
use crate::exactmath::rational::{denominator_lcm, Rational};
use crate::orbit::{trace_orbit, Classification, OrbitResult, Trajectory, Verdict};

/// Moduli up to this size run on `i128`: residues and reduced matrix
/// entries are below `2^60`, so a row of up to 64 products cannot overflow.
const FAST_MODULUS_BITS: u64 = 60;
const FAST_MAX_DIM: usize = 64;

struct ResidueSystem {
    modulus: BigInt,
    matrix: Vec<Vec<BigInt>>,
    shift: Vec<BigInt>,
    start: Vec<BigInt>,
}

impl ResidueSystem {
    fn new(f: &TorusEndo, q: &[Rational]) -> Result<Self> {
        if q.len() != f.dim() {
            return Err(Error::Shape(format!("point has dimension {}, map {}", q.len(), f.dim())));
        }
        let b = f.rational_translation()?;
        let modulus = denominator_lcm(q).lcm(&denominator_lcm(&b));
        let scaled = |v: &[Rational]| -> Vec<BigInt> {
            v.iter()
                .map(|x| (x * &modulus).to_integer().mod_floor(&modulus))
                .collect()
        };
        let a = f.linear();
        let matrix = (0..a.rows())
            .map(|i| a.row(i).iter().map(|x| x.mod_floor(&modulus)).collect())
            .collect();
        Ok(Self { shift: scaled(&b), start: scaled(q), matrix, modulus })
    }

    /// Number of states, saturating at `u64::MAX`.
    fn state_count(&self) -> u64 {
        let n = self.start.len() as u32;
        num_traits::pow(self.modulus.clone(), n as usize).to_u64().unwrap_or(u64::MAX)
    }

    fn trajectory(&self) -> Result<Trajectory<Vec<BigInt>>> {
        let bound = self.state_count();
        if self.modulus.bits() <= FAST_MODULUS_BITS && self.start.len() <= FAST_MAX_DIM {
            let small = |v: &[BigInt]| -> Vec<i128> { v.iter().map(|x| x.to_i128().unwrap()).collect() };
            let matrix: Vec<Vec<i128>> = self.matrix.iter().map(|r| small(r)).collect();
            let t = run(&matrix, &small(&self.shift), &self.modulus.to_i128().unwrap(), small(&self.start), bound)?;
            Ok(t.map(|v| v.into_iter().map(BigInt::from).collect()))
        } else {
            run(&self.matrix, &self.shift, &self.modulus, self.start.clone(), bound)
        }
    }

    fn point(&self, v: Vec<BigInt>) -> TorusPoint {
        TorusPoint::new(v.into_iter().map(|x| Rational::new(x, self.modulus.clone())).collect())
    }

    fn order(&self, v: &[BigInt]) -> BigInt {
        let g = v.iter().fold(self.modulus.clone(), |acc, x| acc.gcd(x));
        &self.modulus / g
    }
}

fn run<T>(matrix: &[Vec<T>], shift: &[T], modulus: &T, start: Vec<T>, bound: u64) -> Result<Trajectory<Vec<T>>>
where
    T: Integer + Clone + Hash,
{
    let step = |v: &Vec<T>| -> Vec<T> {
        matrix
            .iter()
            .zip(shift)
            .map(|(row, s)| {
                row.iter()
                    .zip(v)
                    .fold(s.clone(), |acc, (a, x)| acc + a.clone() * x.clone())
                    .mod_floor(modulus)
            })
            .collect()
    };
    trace_orbit(start, step, bound)
}

/// Image of `x` under `f`, reduced mod `Z^n`.
pub fn step(f: &TorusEndo, x: &TorusPoint) -> Result<TorusPoint> {
    f.step(x)
}

/// Preperiod, period and cycle of the orbit of `q`, plus the relative
/// order of every orbit point.
pub fn classify(f: &TorusEndo, q: &[Rational]) -> Result<(Classification, OrbitResult<TorusPoint>)> {
    let sys = ResidueSystem::new(f, q)?;
    let t = sys.trajectory()?;
    let trace = t.states.iter().map(|v| sys.order(v)).collect();
    let orbit = OrbitResult::from_trajectory(t.map(|v| sys.point(v)));
    let c = Classification { verdict: orbit.verdict(), relative_order_trace: trace };
    Ok((c, orbit))
}

/// Same as [`classify`] without materializing the orbit points.
pub fn classify_only(f: &TorusEndo, q: &[Rational]) -> Result<Classification> {
    let sys = ResidueSystem::new(f, q)?;
    let t = sys.trajectory()?;
    let trace = t.states.iter().map(|v| sys.order(v)).collect();
    Ok(Classification {
        verdict: Verdict::from_counts(t.preperiod, t.period()),
        relative_order_trace: trace,
    })
}

pub fn is_periodic(f: &TorusEndo, q: &[Rational]) -> Result<bool> {
    Ok(classify_only(f, q)?.verdict.is_periodic())
}

/// Upper bound `ord(q)^n` on the number of orbit points when `f` is linear.
pub fn orbit_bound(q: &[Rational]) -> BigInt {
    num_traits::pow(denominator_lcm(q), q.len()).max(BigInt::one())
}
