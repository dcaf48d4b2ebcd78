use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactmath::rational::{denominator_lcm, frac, Rational};

/// Rational point of `R^n / Z^n`, stored with every coordinate in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    coords: Vec<Rational>,
}

impl TorusPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self { coords: coords.iter().map(frac).collect() }
    }

    pub fn origin(n: usize) -> Self {
        Self { coords: vec![Rational::zero(); n] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn relative_order(&self) -> BigInt {
        relative_order(&self.coords)
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Least `s > 0` with `s·q ∈ Z^n`.
pub fn relative_order(q: &[Rational]) -> BigInt {
    denominator_lcm(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;

    #[test]
    fn normalizes_into_unit_cube() {
        let p = TorusPoint::new(vec![rat(-1, 3), rat(7, 2), rat(1, 1)]);
        assert_eq!(p.coords(), &[rat(2, 3), rat(1, 2), rat(0, 1)]);
        assert_eq!(p.to_string(), "(2/3, 1/2, 0)");
    }

    #[test]
    fn relative_orders() {
        assert_eq!(relative_order(&[rat(1, 3), rat(1, 6)]), BigInt::from(6));
        assert_eq!(relative_order(&[rat(0, 1), rat(0, 1)]), BigInt::from(1));
        assert_eq!(relative_order(&[rat(2, 5), rat(3, 7)]), BigInt::from(35));
    }
}
