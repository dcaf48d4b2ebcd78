//! Rational subspaces of `Q^n` in reduced row-echelon form.
//!
//! A rational basis also spans the real subspace `H^R = H ⊗ R`, so real
//! membership questions for vectors over `Q(√d)` reduce to rational ones.

use num_traits::{One, Zero};

use super::matrix::RatMat;
use super::quad::{split_vector, QuadExt};
use super::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubspaceQ {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

/// In-place RREF of the rows; returns pivot columns. Zero rows are dropped.
fn rref(rows: &mut Vec<Vec<Rational>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        let Some(p) = (prow..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(p, prow);
        let pv = rows[prow][col].clone();
        if !pv.is_one() {
            for x in rows[prow].iter_mut() {
                *x = &*x / &pv;
            }
        }
        let pivot_row = rows[prow].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == prow || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &f * y;
            }
        }
        pivots.push(col);
        prow += 1;
    }
    rows.truncate(prow);
    pivots
}

impl SubspaceQ {
    pub fn zero(dim: usize) -> Self {
        Self { ambient_dim: dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        Self::span(dim, RatMat::identity(dim).to_rows())
    }

    pub fn span(dim: usize, vectors: Vec<Vec<Rational>>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == dim), "vector length differs from ambient dimension");
        let mut rows = vectors;
        let pivots = rref(&mut rows, dim);
        Self { ambient_dim: dim, basis: rows, pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Pivot column of each basis vector.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Self::span(self.ambient_dim, v)
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Component of `v` along the coordinate complement (the non-pivot
    /// coordinate axes), i.e. `v` reduced modulo this subspace.
    pub fn reduce<T>(&self, v: &[T]) -> Vec<T>
    where
        T: Clone + for<'a> std::ops::Sub<&'a T, Output = T>,
        Rational: Scale<T>,
    {
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let coeff = w[p].clone();
            for (x, r) in w.iter_mut().zip(row) {
                *x = x.clone() - &r.scale(&coeff);
            }
        }
        w
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Membership of a vector over `Q(√d)` in the real span `H ⊗ R`.
    pub fn contains_real(&self, v: &[QuadExt]) -> bool {
        let (a, b) = split_vector(v);
        self.contains(&a) && self.contains(&b)
    }
}

/// Multiplication of a scalar of type `T` by a rational coefficient.
pub trait Scale<T> {
    fn scale(&self, x: &T) -> T;
}

impl Scale<Rational> for Rational {
    fn scale(&self, x: &Rational) -> Rational {
        self * x
    }
}

impl Scale<QuadExt> for Rational {
    fn scale(&self, x: &QuadExt) -> QuadExt {
        x.scale(self)
    }
}

pub fn rational_kernel(m: &RatMat) -> SubspaceQ {
    let n = m.cols();
    let mut rows = m.to_rows();
    let pivots = rref(&mut rows, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); n];
            v[fc] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[r][fc].clone();
            }
            v
        })
        .collect();
    SubspaceQ::span(n, basis)
}

pub fn rational_image(m: &RatMat) -> SubspaceQ {
    SubspaceQ::span(m.rows(), m.transpose().to_rows())
}

/// A particular rational solution of `m·x = c`, if the system is consistent.
pub fn solve_rational(m: &RatMat, c: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.cols();
    let mut rows: Vec<Vec<Rational>> = m
        .row_iter()
        .zip(c)
        .map(|(r, ci)| {
            let mut row = r.to_vec();
            row.push(ci.clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows, n + 1);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = rows[r][n].clone();
    }
    Some(x)
}
