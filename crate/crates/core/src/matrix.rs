//! Dense exact rational matrices.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_rational, parse_rational, Q};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix has {found} entries, expected {rows}x{cols}")]
    Shape { rows: usize, cols: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow { row: usize, expected: usize, found: usize },
    #[error("entry ({row},{col}): {msg}")]
    Entry { row: usize, col: usize, msg: String },
}

/// Row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Q>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Shape { rows, cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self, MatrixError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(MatrixError::RaggedRow { row: i + 1, expected: ncols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Self { rows: nrows, cols: ncols, data })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| crate::rational::q(x)).collect())
            .collect();
        Self::from_rows(rows).expect("rectangular literal")
    }

    /// Parses rows of `"p/q"` strings; errors name the 1-based row and column.
    pub fn from_str_rows(rows: &[Vec<String>]) -> Result<Self, MatrixError> {
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .map(|(j, s)| {
                        parse_rational(s).map_err(|msg| MatrixError::Entry { row: i + 1, col: j + 1, msg })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(parsed)
    }

    pub fn to_str_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// First `(row, col)` (0-based) where `A[i][j] != A[j][i]`.
    pub fn first_asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    /// Submatrix keeping the listed columns (0-based), in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out[(i, k)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Principal submatrix on the listed indices (0-based).
    pub fn principal(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Exact determinant by Gaussian elimination over the rationals.
    pub fn determinant(&self) -> Q {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Q::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Q::zero();
            };
            if pivot != col {
                a.swap_rows(pivot, col);
                det = -det;
            }
            let p = a[(col, col)].clone();
            det *= &p;
            for r in (col + 1)..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = &a[(r, col)] / &p;
                for c in col..n {
                    let delta = &factor * &a[(col, c)];
                    a[(r, c)] -= delta;
                }
            }
        }
        det
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| !a[(r, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(pivot, rank);
            let p = a[(rank, col)].clone();
            for r in (rank + 1)..self.rows {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = &a[(r, col)] / &p;
                for c in col..self.cols {
                    let delta = &factor * &a[(rank, c)];
                    a[(r, c)] -= delta;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Quadratic form `u^T A u`.
    pub fn quadratic_form(&self, u: &[Q]) -> Q {
        assert!(self.is_square() && u.len() == self.rows);
        let mut acc = Q::zero();
        for i in 0..self.rows {
            if u[i].is_zero() {
                continue;
            }
            let mut row = Q::zero();
            for j in 0..self.cols {
                if !u[j].is_zero() {
                    row += &self[(i, j)] * &u[j];
                }
            }
            acc += &u[i] * row;
        }
        acc
    }

    /// Solves `A x = b` for square nonsingular `A`; `None` if singular.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert!(self.is_square() && b.len() == self.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut rhs = b.to_vec();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            a.swap_rows(pivot, col);
            rhs.swap(pivot, col);
            let p = a[(col, col)].clone();
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = &a[(r, col)] / &p;
                for c in col..n {
                    let delta = &factor * &a[(col, c)];
                    a[(r, c)] -= delta;
                }
                let delta = &factor * &rhs[col];
                rhs[r] -= delta;
            }
        }
        Some((0..n).map(|i| &rhs[i] / &a[(i, i)]).collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

/// JSON shape used by matrix inputs: rows of `"p/q"` strings (integers allowed).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixJson(pub Vec<Vec<crate::rational::QString>>);

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<RationalMatrix, MatrixError> {
        let rows: Vec<Vec<String>> = self.0.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
        RationalMatrix::from_str_rows(&rows)
    }

    pub fn from_matrix(m: &RationalMatrix) -> Self {
        MatrixJson(
            m.to_str_rows()
                .into_iter()
                .map(|r| r.into_iter().map(crate::rational::QString).collect())
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn determinant_small_cases() {
        let a = RationalMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.determinant(), q(-2));
        let b = RationalMatrix::from_i64_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]);
        assert_eq!(b.determinant(), q(-5));
        let mut c = RationalMatrix::identity(2);
        c[(0, 0)] = frac(1, 2);
        c[(1, 1)] = frac(2, 3);
        assert_eq!(c.determinant(), frac(1, 3));
    }

    #[test]
    fn rank_detects_dependence() {
        let a = RationalMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        assert_eq!(RationalMatrix::identity(4).rank(), 4);
        assert_eq!(RationalMatrix::zeros(3, 3).rank(), 0);
    }

    #[test]
    fn parse_errors_name_the_entry() {
        let rows = vec![vec!["1".to_string(), "1/2".into()], vec!["0.5".into(), "1".into()]];
        let err = RationalMatrix::from_str_rows(&rows).unwrap_err();
        assert!(matches!(err, MatrixError::Entry { row: 2, col: 1, .. }));
    }

    #[test]
    fn solve_recovers_solution() {
        let a = RationalMatrix::from_i64_rows(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let x = vec![q(1), frac(-1, 2), q(3)];
        let b: Vec<Q> = (0..3).map(|i| (0..3).map(|j| &a[(i, j)] * &x[j]).sum()).collect();
        assert_eq!(a.solve(&b).unwrap(), x);
        assert!(RationalMatrix::zeros(2, 2).solve(&[q(1), q(1)]).is_none());
    }

    #[test]
    fn quadratic_form_matches_expansion() {
        let g = RationalMatrix::from_i64_rows(&[&[1, 2], &[2, 1]]);
        assert_eq!(g.quadratic_form(&[q(1), q(-1)]), q(-2));
    }
}
