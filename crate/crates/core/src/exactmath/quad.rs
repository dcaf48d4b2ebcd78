//! Elements `a + b·√d` of a real quadratic field.
//!
//! A value with `b = 0` may be tagged with `d = 0`, meaning "plain rational,
//! field not fixed yet"; it combines with any field. Combining two values
//! from different fields panics, so callers validate inputs with
//! [`common_field`] at their API boundary.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: i64,
}

fn is_square_free(d: i64) -> bool {
    if d < 2 {
        return false;
    }
    let mut p = 2i64;
    while p * p <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: i64) -> Result<Self> {
        if !is_square_free(d) {
            return Err(Error::BadRadicand(d));
        }
        Ok(Self { a, b, d })
    }

    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::zero(), d: 0 }
    }

    /// `√d` itself.
    pub fn sqrt(d: i64) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    /// Radicand, or `None` for an untagged rational.
    pub fn field(&self) -> Option<i64> {
        (self.d != 0).then_some(self.d)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self { a: &self.a * k, b: &self.b * k, d: self.d }
    }

    /// `a² − d·b²`; nonzero for every nonzero element since `√d ∉ Q`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(self.d.into()) * &self.b * &self.b
    }

    pub fn conj(&self) -> Self {
        Self { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Self { a: &self.a / &n, b: -&self.b / &n, d: self.d })
    }

    fn join(&self, other: &Self) -> i64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (d, e) if d == e => d,
            (d, e) => panic!("{}", Error::MixedFields(d, e)),
        }
    }
}

/// The single field shared by `values`, or an error when two differ.
pub fn common_field<'a>(values: impl IntoIterator<Item = &'a QuadExt>) -> Result<Option<i64>> {
    let mut field = None;
    for v in values {
        match (field, v.field()) {
            (_, None) => {}
            (None, Some(d)) => field = Some(d),
            (Some(d), Some(e)) if d != e => return Err(Error::MixedFields(d, e)),
            _ => {}
        }
    }
    Ok(field)
}

/// Splits a vector into its rational and `√d` coefficient vectors.
pub fn split_vector(v: &[QuadExt]) -> (Vec<Rational>, Vec<Rational>) {
    v.iter().map(|x| (x.a.clone(), x.b.clone())).unzip()
}

pub fn rational_vector(v: &[QuadExt]) -> Option<Vec<Rational>> {
    v.iter().map(QuadExt::to_rational).collect()
}

impl From<Rational> for QuadExt {
    fn from(a: Rational) -> Self {
        Self::rational(a)
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        QuadExt::is_zero(self)
    }
}

impl One for QuadExt {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, o: &QuadExt) -> QuadExt {
        let d = self.join(o);
        QuadExt { a: &self.a + &o.a, b: &self.b + &o.b, d }
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &QuadExt) -> QuadExt {
        let d = self.join(o);
        QuadExt { a: &self.a - &o.a, b: &self.b - &o.b, d }
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, o: &QuadExt) -> QuadExt {
        let d = self.join(o);
        let dd = Rational::from_integer(d.into());
        QuadExt {
            a: &self.a * &o.a + dd * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            d,
        }
    }
}

impl<'a> Div<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn div(self, o: &QuadExt) -> QuadExt {
        self * &o.inv().expect("division by zero in quadratic field")
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -&self.a, b: -&self.b, d: self.d }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QuadExt {
            type Output = QuadExt;
            fn $m(self, o: QuadExt) -> QuadExt {
                (&self).$m(&o)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl<'a> Sub<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &QuadExt) -> QuadExt {
        &self - o
    }
}

impl<'a> Add<&'a QuadExt> for QuadExt {
    type Output = QuadExt;
    fn add(self, o: &QuadExt) -> QuadExt {
        &self + o
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", format_rational(&self.a))
        } else {
            write!(f, "{} + {}*sqrt({})", format_rational(&self.a), format_rational(&self.b), self.d)
        }
    }
}
