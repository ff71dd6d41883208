//! Dense exact-rational linear algebra: row reduction, inverses, nullspaces
//! and uniquely-determined solves.

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduces `m` in place to reduced row echelon form and returns the pivot
/// columns. Only the first `ncols` columns are used for pivoting, so an
/// augmented block to the right is carried along.
pub fn rref(m: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rational::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (x, y) in other.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    rref(&mut a, ncols).len()
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of `{x : m x = 0}` where `m` has `ncols` columns.
pub fn nullspace(m: &Matrix, ncols: usize) -> Vec<Vec<Rational>> {
    let mut a = m.clone();
    let pivots = rref(&mut a, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveFailure {
    /// The coefficient matrix has a nontrivial kernel.
    Underdetermined { rank: usize, unknowns: usize },
    Inconsistent,
}

/// Solves `a X = b` for `X` (`a` is `m x n`, `b` is `m x k`) requiring the
/// solution to be unique and the system consistent.
pub fn solve_unique(a: &Matrix, b: &Matrix, n: usize) -> Result<Matrix, SolveFailure> {
    let k = b.first().map_or(0, Vec::len);
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| {
            let mut r = ra.clone();
            r.extend(rb.iter().cloned());
            r
        })
        .collect();
    let pivots = rref(&mut aug, n);
    if pivots.len() < n {
        return Err(SolveFailure::Underdetermined {
            rank: pivots.len(),
            unknowns: n,
        });
    }
    if aug[n..].iter().any(|r| r[n..].iter().any(|x| !x.is_zero())) {
        return Err(SolveFailure::Inconsistent);
    }
    Ok(aug.into_iter().take(n).map(|r| r[n..n + k].to_vec()).collect())
}

pub fn mat_vec(m: &Matrix, v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|r| crate::rational::dot(r, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn inverse_of_g2_cartan() {
        let c = m(&[&[2, -1], &[-3, 2]]);
        let inv = inverse(&c).unwrap();
        assert_eq!(inv, vec![vec![int(2), int(1)], vec![int(3), int(2)]]);
        let b2 = m(&[&[2, -1], &[-2, 2]]);
        let inv = inverse(&b2).unwrap();
        assert_eq!(inv[0], vec![int(1), rat(1, 2)]);
    }

    #[test]
    fn singular_has_no_inverse_and_a_kernel() {
        let s = m(&[&[1, 2], &[2, 4]]);
        assert!(inverse(&s).is_none());
        let ns = nullspace(&s, 2);
        assert_eq!(ns, vec![vec![int(-2), int(1)]]);
        assert_eq!(rank(&s), 1);
    }

    #[test]
    fn unique_solve_detects_kernel_and_inconsistency() {
        let a = m(&[&[1, 1]]);
        let b = m(&[&[3]]);
        assert!(matches!(
            solve_unique(&a, &b, 2),
            Err(SolveFailure::Underdetermined { rank: 1, unknowns: 2 })
        ));
        let a = m(&[&[1], &[1]]);
        let b = m(&[&[1], &[2]]);
        assert_eq!(solve_unique(&a, &b, 1), Err(SolveFailure::Inconsistent));
        let b = m(&[&[2], &[2]]);
        assert_eq!(solve_unique(&a, &b, 1).unwrap(), m(&[&[2]]));
    }
}
