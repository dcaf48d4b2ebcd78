//! Characteristic polynomials and the cyclotomic orders that can occur as
//! eigenvalue orders of an `n×n` rational matrix.

use std::fmt;

use num_traits::{One, Zero};

use super::matrix::RatMat;
use super::rational::{format_rational, Rational};

/// Polynomial with rational coefficients, `coeffs[i]` multiplying `x^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<Rational>,
}

impl Poly {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self { coeffs: coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{}*x", format_rational(c))?,
                _ => write!(f, "{}*x^{}", format_rational(c), i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Monic `det(x·I − M)` by the Faddeev–LeVerrier recurrence.
pub fn charpoly(m: &RatMat) -> Poly {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut aux = RatMat::zeros(n, n);
    for k in 1..=n {
        // aux_k = M·aux_{k−1} + c_{n−k+1}·I
        aux = m.mul(&aux).add(&RatMat::identity(n).scale(&coeffs[n - k + 1]));
        let trace = (0..n).fold(Rational::zero(), |acc, i| acc + &m.mul(&aux)[(i, i)]);
        coeffs[n - k] = -trace / Rational::from_integer((k as i64).into());
    }
    Poly { coeffs }
}

pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Every `d` with `φ(d) <= n`, increasing. Uses `φ(d) >= sqrt(d/2)`, so
/// no such `d` exceeds `2n²`.
pub fn root_of_unity_orders(n: u64) -> Vec<u64> {
    assert!(n >= 1);
    (1..=2 * n * n).filter(|&d| totient(d) <= n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::int;

    #[test]
    fn charpoly_examples() {
        assert_eq!(charpoly(&RatMat::from_i64(&[&[3, 1], &[1, 1]])), Poly::from_i64(&[2, -4, 1]));
        assert_eq!(charpoly(&RatMat::identity(2)), Poly::from_i64(&[1, -2, 1]));
        assert_eq!(charpoly(&RatMat::from_i64(&[&[0, -1], &[1, 0]])), Poly::from_i64(&[1, 0, 1]));
    }

    #[test]
    fn charpoly_constant_term_is_signed_det() {
        let m = RatMat::from_i64(&[&[2, -1, 3], &[0, 4, 1], &[5, 2, -2]]);
        let p = charpoly(&m);
        assert_eq!(p.eval(&int(0)), -m.det());
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn orders_small_n() {
        assert_eq!(root_of_unity_orders(1), vec![1, 2]);
        assert_eq!(root_of_unity_orders(2), vec![1, 2, 3, 4, 6]);
        assert_eq!(root_of_unity_orders(4), vec![1, 2, 3, 4, 5, 6, 8, 10, 12]);
    }
}
