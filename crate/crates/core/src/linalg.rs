//! Dense Gauss-Jordan elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::BigRational;

/// Row-major rational matrix with a fixed column count.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    cols: usize,
    rows: Vec<Vec<BigRational>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            cols,
            rows: vec![vec![BigRational::zero(); cols]; rows],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigRational>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        Matrix { cols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.rows[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigRational) {
        self.rows[r][c] = value;
    }

    /// Reduces in place to reduced row echelon form and returns the pivot
    /// columns. Pivots are taken left to right, first nonzero row wins.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows.len() {
                break;
            }
            let Some(found) = (row..self.rows.len()).find(|&r| !self.rows[r][col].is_zero())
            else {
                continue;
            };
            self.rows.swap(row, found);
            let inv = self.rows[row][col].recip();
            for v in self.rows[row].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = self.rows[row].clone();
            for (r, other) in self.rows.iter_mut().enumerate() {
                if r == row || other[col].is_zero() {
                    continue;
                }
                let factor = other[col].clone();
                for (v, p) in other.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *v -= &factor * p;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }
}

/// Solves `a x = b`. Free variables are set to zero, so the returned
/// solution is supported on the pivot columns chosen left to right.
/// Returns `None` when the system is inconsistent.
pub fn solve(a: &Matrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(a.nrows(), b.len());
    let n = a.ncols();
    let rows = a
        .rows
        .iter()
        .zip(b)
        .map(|(r, rhs)| {
            let mut r = r.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut aug = Matrix::from_rows(n + 1, rows);
    let pivots = aug.rref();
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        debug_assert!(aug.rows[r][c].is_one());
        x[c] = aug.rows[r][n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[i64]]) -> Matrix {
        let cols = rows[0].len();
        Matrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]).rank(), 2);
        assert_eq!(m(&[&[0, 0], &[0, 0]]).rank(), 0);
    }

    #[test]
    fn solve_prefers_leftmost_pivots() {
        // x0 + x1 = 1, underdetermined: x0 = 1, x1 = 0.
        let a = m(&[&[1, 1]]);
        assert_eq!(solve(&a, &[int(1)]).unwrap(), vec![int(1), int(0)]);
        // zero column is skipped: x1 = 1/2
        let a = m(&[&[0, 2, 1]]);
        assert_eq!(solve(&a, &[int(1)]).unwrap(), vec![int(0), ratio(1, 2), int(0)]);
    }

    #[test]
    fn inconsistent_system() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&a, &[int(1), int(3)]).is_none());
    }

    #[test]
    fn square_solve() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![ratio(4, 5), ratio(7, 5)]);
    }
}
