//! Exact Gaussian elimination over a [`Field`].
//!
//! Matrices are row-major `Vec<Vec<Elem>>`. Kernel bases are echelon
//! normalized: one vector per free column, with a 1 in that column and zeros
//! in the other free columns, so results are deterministic.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

pub type Matrix = Vec<Vec<Elem>>;

/// Reduced row echelon form; returns the pivot column of each nonzero row.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c]
            .inv()
            .expect("pivot must be invertible over a field");
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    if !m[r][j].is_zero() {
                        let t = f.clone() * m[r][j].clone();
                        m[i][j] -= &t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{x : m x = 0}` for an `r x ncols` matrix.
pub fn kernel(field: &Field, m: &Matrix, ncols: usize) -> Vec<Vec<Elem>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

/// A particular solution of `a x = b` (free variables set to zero).
pub fn solve(field: &Field, a: &Matrix, b: &[Elem]) -> Result<Vec<Elem>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    if aug.is_empty() {
        return Ok(vec![field.zero(); ncols]);
    }
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return Err(Error::NoSolution);
    }
    let mut x = vec![field.zero(); ncols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][ncols].clone();
    }
    Ok(x)
}

pub fn inverse(field: &Field, m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn mat_vec(m: &Matrix, v: &[Elem]) -> Vec<Elem> {
    m.iter()
        .map(|row| {
            let mut acc = v[0].field().zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a.clone() * b.clone());
                }
            }
            acc
        })
        .collect()
}

pub fn dot(a: &[Elem], b: &[Elem]) -> Elem {
    let mut acc = a[0].field().zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x.clone() * y.clone());
        }
    }
    acc
}

/// Greedily pick vectors that are independent of the previously picked ones.
pub fn independent_subset(vectors: &[Vec<Elem>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Matrix = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        rows.push(v.clone());
        if rank(&rows) == chosen.len() + 1 {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    chosen
}

/// Extend independent `vectors` to a basis of `field^n` using standard basis vectors.
pub fn extend_to_basis(field: &Field, vectors: &[Vec<Elem>], n: usize) -> Vec<Vec<Elem>> {
    let mut all: Vec<Vec<Elem>> = vectors.to_vec();
    for i in 0..n {
        let mut e = vec![field.zero(); n];
        e[i] = field.one();
        all.push(e);
    }
    independent_subset(&all)
        .into_iter()
        .map(|i| all[i].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;

    #[test]
    fn kernel_examples() {
        let f = Field::rationals();
        let id = vec![vec![f.one(), f.zero()], vec![f.zero(), f.one()]];
        assert!(kernel(&f, &id, 2).is_empty());
        let f2 = Field::finite(2).unwrap();
        let z = vec![vec![f2.zero(), f2.zero()], vec![f2.zero(), f2.zero()]];
        assert_eq!(kernel(&f2, &z, 2).len(), 2);
    }

    #[test]
    fn solve_examples() {
        let f = Field::rationals();
        let a = vec![vec![f.one(), f.one()], vec![f.zero(), f.zero()]];
        let x = solve(&f, &a, &[f.one(), f.zero()]).unwrap();
        assert_eq!(x, vec![f.one(), f.zero()]);
        assert_eq!(solve(&f, &a, &[f.one(), f.one()]), Err(Error::NoSolution));
        let m = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]];
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(inv, vec![vec![q(1, 1), q(-1, 1)], vec![q(-1, 1), q(2, 1)]]);
    }
}
