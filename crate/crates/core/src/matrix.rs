//! Small exact matrices over [`ExactScalar`].
//!
//! Reduction is plain Gauss-Jordan over the field; determinants and square
//! solves go through fraction-free Bareiss elimination.

use num_traits::{One, Zero};

use crate::poly::scalar_det_bareiss;
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: Vec<Vec<ExactScalar>>,
    pub ncols: usize,
}

impl Mat {
    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols));
        Mat { rows, ncols }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Mat {
            rows: vec![vec![ExactScalar::zero(); ncols]; nrows],
            ncols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.ncols {
            if row >= self.rows.len() {
                break;
            }
            let Some(p) = (row..self.rows.len()).find(|&r| !self.rows[r][col].is_zero()) else {
                continue;
            };
            self.rows.swap(row, p);
            let inv = self.rows[row][col].inv();
            for c in col..self.ncols {
                self.rows[row][c] = self.rows[row][c].clone() * &inv;
            }
            for r in 0..self.rows.len() {
                if r != row && !self.rows[r][col].is_zero() {
                    let factor = self.rows[r][col].clone();
                    for c in col..self.ncols {
                        let t = factor.clone() * &self.rows[row][c];
                        self.rows[r][c] -= t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<ExactScalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.ncols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![ExactScalar::zero(); self.ncols];
            vec[free] = ExactScalar::one();
            for (col, slot) in pivot_set.iter().enumerate() {
                if let Some(r) = slot {
                    vec[col] = -m.rows[*r][free].clone();
                }
            }
            basis.push(vec);
        }
        basis
    }

    pub fn det(&self) -> ExactScalar {
        assert_eq!(self.nrows(), self.ncols, "determinant of non-square matrix");
        scalar_det_bareiss(self.rows.clone())
    }
}

/// Solve a square system by fraction-free forward elimination followed by
/// back substitution. Returns `None` when the matrix is singular.
pub fn solve_square(a: &Mat, b: &[ExactScalar]) -> Option<Vec<ExactScalar>> {
    let n = a.nrows();
    assert_eq!(a.ncols, n);
    assert_eq!(b.len(), n);
    if n == 0 {
        return Some(Vec::new());
    }
    let mut m: Vec<Vec<ExactScalar>> = a
        .rows
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    // Bareiss elimination on the augmented matrix.
    let mut prev = ExactScalar::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero())?;
            m.swap(k, swap);
        }
        for i in k + 1..n {
            for j in k + 1..=n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / prev.clone();
            }
            m[i][k] = ExactScalar::zero();
        }
        prev = m[k][k].clone();
    }
    if m[n - 1][n - 1].is_zero() {
        return None;
    }
    let mut x = vec![ExactScalar::zero(); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone();
        for j in i + 1..n {
            acc -= m[i][j].clone() * &x[j];
        }
        x[i] = acc / m[i][i].clone();
    }
    Some(x)
}

/// Canonical form of a row span: reduced echelon rows of the matrix.
/// Two matrices span the same subspace iff their canonical forms agree.
pub fn row_span_canonical(rows: Vec<Vec<ExactScalar>>) -> Vec<Vec<ExactScalar>> {
    let mut m = Mat::from_rows(rows);
    let pivots = m.rref();
    m.rows.truncate(pivots.len());
    m.rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    #[test]
    fn rref_and_rank() {
        let mut m = Mat::from_rows(vec![
            vec![s(1), s(2), s(3)],
            vec![s(2), s(4), s(6)],
            vec![s(0), s(1), s(1)],
        ]);
        let pivots = m.rref();
        assert_eq!(pivots, vec![0, 1]);
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let m = Mat::from_rows(vec![vec![s(1), s(2), s(3)], vec![s(0), s(1), s(1)]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        for row in &m.rows {
            let dot = row
                .iter()
                .zip(&ns[0])
                .fold(ExactScalar::zero(), |acc, (a, b)| acc + a * b);
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn det_and_solve() {
        let a = Mat::from_rows(vec![
            vec![s(2), s(1), s(-1)],
            vec![s(-3), s(-1), s(2)],
            vec![s(-2), s(1), s(2)],
        ]);
        assert_eq!(a.det(), s(-1));
        let x = solve_square(&a, &[s(8), s(-11), s(-3)]).unwrap();
        assert_eq!(x, vec![s(2), s(3), s(-1)]);
        let singular = Mat::from_rows(vec![vec![s(1), s(2)], vec![s(2), s(4)]]);
        assert!(solve_square(&singular, &[s(1), s(1)]).is_none());
        assert!(singular.det().is_zero());
    }

    #[test]
    fn span_canonical_is_basis_independent() {
        let a = row_span_canonical(vec![vec![s(1), s(1), s(0)], vec![s(0), s(1), s(1)]]);
        let b = row_span_canonical(vec![vec![s(1), s(2), s(1)], vec![s(2), s(3), s(1)]]);
        assert_eq!(a, b);
    }
}
