//! Hermite and Smith normal forms over Z and the lattice computations
//! built on them.
//!
//! Pivot rule for both forms: the nonzero entry of smallest absolute value,
//! ties broken by lowest row index (then lowest column index for SNF).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMat;
use super::rational::{denominator_lcm, Rational};

/// `h = u · m` with `h` in row Hermite normal form and `u` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hnf {
    pub h: IntMat,
    pub u: IntMat,
    pub rank: usize,
}

/// `s = u · m · v` diagonal with `s[i][i] | s[i+1][i+1]`, `u`, `v` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub s: IntMat,
    pub u: IntMat,
    pub v: IntMat,
    pub rank: usize,
}

impl Snf {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

fn row_axpy(m: &mut IntMat, target: usize, q: &BigInt, src: usize) {
    for c in 0..m.cols() {
        let v = &m[(target, c)] - q * &m[(src, c)];
        m[(target, c)] = v;
    }
}

fn col_axpy(m: &mut IntMat, target: usize, q: &BigInt, src: usize) {
    for r in 0..m.rows() {
        let v = &m[(r, target)] - q * &m[(r, src)];
        m[(r, target)] = v;
    }
}

fn negate_row(m: &mut IntMat, r: usize) {
    for c in 0..m.cols() {
        let v = -&m[(r, c)];
        m[(r, c)] = v;
    }
}

pub fn hnf(m: &IntMat) -> Hnf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMat::identity(rows);
    let mut prow = 0;
    for col in 0..cols {
        if prow == rows {
            break;
        }
        let mut found = false;
        loop {
            let pivot = (prow..rows)
                .filter(|&i| !h[(i, col)].is_zero())
                .min_by(|&a, &b| h[(a, col)].abs().cmp(&h[(b, col)].abs()).then(a.cmp(&b)));
            let Some(p) = pivot else { break };
            found = true;
            h.swap_rows(p, prow);
            u.swap_rows(p, prow);
            let mut clean = true;
            for i in prow + 1..rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = h[(i, col)].div_floor(&h[(prow, col)]);
                row_axpy(&mut h, i, &q, prow);
                row_axpy(&mut u, i, &q, prow);
                clean &= h[(i, col)].is_zero();
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h[(prow, col)].is_negative() {
            negate_row(&mut h, prow);
            negate_row(&mut u, prow);
        }
        for i in 0..prow {
            let q = h[(i, col)].div_floor(&h[(prow, col)]);
            if !q.is_zero() {
                row_axpy(&mut h, i, &q, prow);
                row_axpy(&mut u, i, &q, prow);
            }
        }
        prow += 1;
    }
    Hnf { h, u, rank: prow }
}

/// Smallest-|.| nonzero entry of the trailing block starting at `(t, t)`.
fn min_entry(s: &IntMat, t: usize, only_cross: bool) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            if only_cross && i != t && j != t {
                continue;
            }
            if s[(i, j)].is_zero() {
                continue;
            }
            if best.map_or(true, |(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

pub fn snf(m: &IntMat) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_entry(&s, t, false) else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                row_axpy(&mut s, i, &q, t);
                row_axpy(&mut u, i, &q, t);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                col_axpy(&mut s, j, &q, t);
                col_axpy(&mut v, j, &q, t);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                let (pi, pj) = min_entry(&s, t, true).expect("pivot row/column is nonzero");
                s.swap_rows(t, pi);
                u.swap_rows(t, pi);
                s.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&s[(t, t)])));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut s, t, &minus_one, i);
                    row_axpy(&mut u, t, &minus_one, i);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            negate_row(&mut s, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }
    Snf { s, u, v, rank: t }
}

/// A rational `x` with `m·x ≡ c (mod Z^rows)`, if any real solution exists.
///
/// Writing `s = u·m·v`, the congruence becomes `s·y ≡ u·c` with `x = v·y`;
/// coordinates with a nonzero invariant factor are solved exactly, the
/// remaining equations require the corresponding entry of `u·c` to be
/// integral.
pub fn solve_mod_lattice(m: &IntMat, c: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(m.rows(), c.len(), "right-hand side has wrong length");
    let f = snf(m);
    let uc = f.u.to_rational().mul_vec(c);
    let mut y = vec![Rational::zero(); m.cols()];
    for (i, rhs) in uc.iter().enumerate() {
        if i < f.rank {
            y[i] = rhs / Rational::from_integer(f.s[(i, i)].clone());
        } else if !rhs.is_integer() {
            return None;
        }
    }
    Some(f.v.to_rational().mul_vec(&y))
}

/// An integer `z` with `m·z = c`, if one exists.
pub fn solve_integer(m: &IntMat, c: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), c.len(), "right-hand side has wrong length");
    let f = snf(m);
    let uc = f.u.mul_vec(c);
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, rhs) in uc.iter().enumerate() {
        if i < f.rank {
            let (q, r) = rhs.div_rem(&f.s[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !rhs.is_zero() {
            return None;
        }
    }
    Some(f.v.mul_vec(&y))
}

/// Canonical Z-basis (HNF rows) of the group generated by rational
/// vectors of length `dim`.
pub fn rational_lattice_basis(gens: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    if gens.is_empty() {
        return Vec::new();
    }
    let den = gens.iter().fold(BigInt::one(), |acc, g| acc.lcm(&denominator_lcm(g)));
    let scaled: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| g.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    let m = IntMat::from_rows(scaled).expect("generators share a length");
    assert_eq!(m.cols(), dim);
    let h = hnf(&m);
    (0..h.rank)
        .map(|i| h.h.row(i).iter().map(|x| Rational::new(x.clone(), den.clone())).collect())
        .collect()
}

/// Coordinates of `v` in the (rational, linearly independent) row basis,
/// if `v` lies in its rational span.
pub fn coordinates_in_basis(basis: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    use super::matrix::RatMat;
    if basis.is_empty() {
        return v.iter().all(Zero::is_zero).then(Vec::new);
    }
    let bt = RatMat::from_rows(basis.to_vec()).ok()?.transpose();
    let k = bt.cols();
    let aug: Vec<Vec<Rational>> = (0..bt.rows())
        .map(|r| {
            let mut row = bt.row(r).to_vec();
            row.push(v[r].clone());
            row
        })
        .collect();
    let mut a = RatMat::from_rows(aug).ok()?;
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..k {
        let Some(p) = (prow..a.rows()).find(|&r| !a[(r, col)].is_zero()) else { continue };
        a.swap_rows(p, prow);
        let pv = a[(prow, col)].clone();
        for j in 0..=k {
            a[(prow, j)] = &a[(prow, j)] / &pv;
        }
        for i in 0..a.rows() {
            if i != prow && !a[(i, col)].is_zero() {
                let f = a[(i, col)].clone();
                for j in 0..=k {
                    a[(i, j)] = &a[(i, j)] - &f * &a[(prow, j)];
                }
            }
        }
        pivots.push(col);
        prow += 1;
    }
    if (prow..a.rows()).any(|r| !a[(r, k)].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[(r, k)].clone();
    }
    Some(x)
}

/// `[Z^n : L]` for the row lattice `L`, or `None` if the index is infinite.
pub fn lattice_index(basis: &IntMat) -> Option<BigInt> {
    let h = hnf(basis);
    if h.rank < basis.cols() {
        return None;
    }
    Some((0..h.rank).fold(BigInt::one(), |acc, i| acc * &h.h[(i, i)]))
}

/// Representatives of `Z^n / L` for a full-rank row lattice `L`, in
/// lexicographic order: `{z : 0 <= z_j < h_jj}` for the HNF `h` of `L`.
pub fn coset_representatives(basis: &IntMat) -> Option<Vec<Vec<BigInt>>> {
    let n = basis.cols();
    let h = hnf(basis);
    if h.rank < n {
        return None;
    }
    let diag: Vec<BigInt> = (0..n).map(|i| h.h[(i, i)].clone()).collect();
    let mut reps = vec![Vec::new()];
    for d in &diag {
        let mut next = Vec::new();
        for prefix in &reps {
            let mut z = BigInt::zero();
            while &z < d {
                let mut p: Vec<BigInt> = prefix.clone();
                p.push(z.clone());
                next.push(p);
                z += 1;
            }
        }
        reps = next;
    }
    Some(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::{int, rat};

    fn is_unimodular(u: &IntMat) -> bool {
        u.det().abs().is_one()
    }

    #[test]
    fn hnf_identity_is_fixed() {
        let i = IntMat::identity(2);
        let h = hnf(&i);
        assert_eq!(h.h, i);
        assert_eq!(h.rank, 2);
    }

    #[test]
    fn hnf_rank_one() {
        let h = hnf(&IntMat::from_i64(&[&[2, 4], &[1, 2]]));
        assert_eq!(h.rank, 1);
        assert_eq!(h.h, IntMat::from_i64(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn hnf_triangular_with_reduced_columns() {
        let m = IntMat::from_i64(&[&[2, 0], &[1, 1]]);
        let h = hnf(&m);
        assert_eq!(h.h, IntMat::from_i64(&[&[1, 1], &[0, 2]]));
        assert_eq!(h.u.mul(&m), h.h);
        assert!(is_unimodular(&h.u));
    }

    #[test]
    fn snf_examples() {
        let s = snf(&IntMat::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.s, IntMat::from_i64(&[&[1, 0], &[0, 6]]));
        let s = snf(&IntMat::from_i64(&[&[2, 1], &[1, 1]]));
        assert_eq!(s.s, IntMat::identity(2));
        let z = IntMat::zeros(2, 3);
        let s = snf(&z);
        assert_eq!(s.s, z);
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn solve_mod_lattice_examples() {
        let m = IntMat::from_i64(&[&[1, 1], &[1, 0]]);
        let c = vec![rat(-1, 2), int(0)];
        let x = solve_mod_lattice(&m, &c).unwrap();
        let mx = m.to_rational().mul_vec(&x);
        assert!(mx.iter().zip(&c).all(|(a, b)| (a - b).is_integer()));
        assert_eq!(crate::exactmath::rational::frac_vec(&x), vec![int(0), rat(1, 2)]);

        let c = vec![rat(1, 3), rat(-2, 7)];
        assert_eq!(solve_mod_lattice(&IntMat::identity(2), &c).unwrap(), c);

        assert!(solve_mod_lattice(&IntMat::zeros(2, 2), &[rat(1, 2), int(0)]).is_none());
        assert!(solve_mod_lattice(&IntMat::zeros(2, 2), &[int(3), int(-1)]).is_some());
    }

    #[test]
    fn solve_integer_examples() {
        let m = IntMat::from_i64(&[&[2, 0], &[0, 0]]);
        assert!(solve_integer(&m, &[BigInt::from(1), BigInt::zero()]).is_none());
        let z = solve_integer(&m, &[BigInt::from(4), BigInt::zero()]).unwrap();
        assert_eq!(m.mul_vec(&z), vec![BigInt::from(4), BigInt::zero()]);
    }

    #[test]
    fn index_and_cosets() {
        let l = IntMat::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(lattice_index(&l), Some(BigInt::from(6)));
        assert_eq!(coset_representatives(&l).unwrap().len(), 6);
        assert_eq!(lattice_index(&IntMat::from_i64(&[&[1, 1], &[2, 2]])), None);
    }

    #[test]
    fn rational_lattice_merges_generators() {
        let b = rational_lattice_basis(&[vec![int(1)], vec![rat(1, 3)], vec![rat(1, 2)]], 1);
        assert_eq!(b, vec![vec![rat(1, 6)]]);
        let x = coordinates_in_basis(&[vec![int(1), int(1)], vec![int(0), int(2)]], &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![int(3), int(1)]);
        assert!(coordinates_in_basis(&[vec![int(1), int(1)]], &[int(1), int(0)]).is_none());
    }
}
