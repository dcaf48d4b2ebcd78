//! Orbits of self-maps of finite sets: preperiod, period, cycle.
//!
//! Every classifier in the crate reduces to iterating a map on canonical
//! representatives of a finite set and recording the first repeat.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};

/// States visited from a start point up to (excluding) the first repeat.
/// `states[preperiod..]` is the cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory<S> {
    pub states: Vec<S>,
    pub preperiod: usize,
}

impl<S> Trajectory<S> {
    pub fn period(&self) -> usize {
        self.states.len() - self.preperiod
    }

    pub fn map<U>(self, f: impl FnMut(S) -> U) -> Trajectory<U> {
        Trajectory { states: self.states.into_iter().map(f).collect(), preperiod: self.preperiod }
    }
}

/// Iterates `step` from `start` until a state repeats. Fails with
/// [`Error::OrbitBound`] if more than `max_steps` distinct states appear,
/// which for a map on a finite set of that size cannot happen.
pub fn trace_orbit<S, F>(start: S, mut step: F, max_steps: u64) -> Result<Trajectory<S>>
where
    S: Hash + Eq + Clone,
    F: FnMut(&S) -> S,
{
    let mut seen: HashMap<S, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut current = start;
    loop {
        if let Some(&i) = seen.get(&current) {
            return Ok(Trajectory { states, preperiod: i });
        }
        if states.len() as u64 >= max_steps {
            return Err(Error::OrbitBound(max_steps));
        }
        seen.insert(current.clone(), states.len());
        let next = step(&current);
        states.push(current);
        current = next;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Periodic { period: usize },
    EventuallyPeriodic { preperiod: usize, period: usize },
}

impl Verdict {
    pub fn from_counts(preperiod: usize, period: usize) -> Self {
        if preperiod == 0 {
            Verdict::Periodic { period }
        } else {
            Verdict::EventuallyPeriodic { preperiod, period }
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Verdict::Periodic { .. })
    }

    pub fn preperiod(&self) -> usize {
        match *self {
            Verdict::Periodic { .. } => 0,
            Verdict::EventuallyPeriodic { preperiod, .. } => preperiod,
        }
    }

    pub fn period(&self) -> usize {
        match *self {
            Verdict::Periodic { period } | Verdict::EventuallyPeriodic { period, .. } => period,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Periodic { .. } => "Periodic",
            Verdict::EventuallyPeriodic { .. } => "EventuallyPeriodic",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Verdict::Periodic { period } => write!(f, "Periodic period={period}"),
            Verdict::EventuallyPeriodic { preperiod, period } => {
                write!(f, "EventuallyPeriodic preperiod={preperiod} period={period}")
            }
        }
    }
}

/// Verdict plus the relative order of every point along the orbit
/// (tail first, then cycle).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub relative_order_trace: Vec<BigInt>,
}

impl Classification {
    pub fn cycle_orders(&self) -> &[BigInt] {
        &self.relative_order_trace[self.verdict.preperiod()..]
    }
}

/// Tail and cycle of an orbit. `cycle[i]` maps to `cycle[(i + 1) % period]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitResult<P> {
    pub preperiod: usize,
    pub period: usize,
    pub tail: Vec<P>,
    pub cycle: Vec<P>,
}

impl<P> OrbitResult<P> {
    pub fn from_trajectory(t: Trajectory<P>) -> Self {
        let preperiod = t.preperiod;
        let mut tail = t.states;
        let cycle = tail.split_off(preperiod);
        Self { preperiod, period: cycle.len(), tail, cycle }
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::from_counts(self.preperiod, self.period)
    }

    pub fn points(&self) -> impl Iterator<Item = &P> {
        self.tail.iter().chain(&self.cycle)
    }
}
