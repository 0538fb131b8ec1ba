//! Exact linear algebra over commutative rings: rationals and truncated series.
//!
//! Determinants are computed division-free (Laplace expansion memoised over
//! column subsets), so they are valid over the non-domain rings `A_M`.
//! Solving requires a unit determinant and goes through the adjugate.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::TruncatedSeries;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// The operations the matrix routines need from a coefficient ring.
pub trait RingElement: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_element(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Inverse of a unit; `Error::NonUnit` otherwise.
    fn unit_inverse(&self) -> Result<Self>;
}

impl RingElement for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_element(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn unit_inverse(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::NonUnit("0".into()))
        } else {
            Ok(self.recip())
        }
    }
}

impl RingElement for TruncatedSeries {
    fn zero_like(&self) -> Self {
        TruncatedSeries::zero_like(self)
    }
    fn one_like(&self) -> Self {
        TruncatedSeries::one_like(self)
    }
    fn is_zero_element(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn unit_inverse(&self) -> Result<Self> {
        self.invert_unit()
    }
}

/// Dense row-major matrix over a commutative ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

pub type SeriesMatrix = Matrix<TruncatedSeries>;

impl<T: RingElement> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::DimensionMismatch("matrix with no rows".into()));
        }
        let c = rows[0].len();
        if c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged or empty matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: RingElement>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn swap_rows(&self, a: usize, b: usize) -> Self {
        let mut rows = self.to_rows();
        rows.swap(a, b);
        Matrix::from_rows(rows).expect("shape preserved")
    }

    fn one(&self) -> T {
        self.entries[0].one_like()
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    /// Determinant of the submatrix on the given rows and columns
    /// (equal-length index lists; the empty minor is 1).
    pub fn subdeterminant(&self, rows: &[usize], cols: &[usize]) -> T {
        assert_eq!(rows.len(), cols.len(), "subdeterminant needs a square selection");
        assert!(cols.len() < 64);
        let mut memo: HashMap<u64, T> = HashMap::new();
        let full = if cols.is_empty() { 0 } else { u64::MAX >> (64 - cols.len()) };
        self.laplace(rows, cols, full, &mut memo)
    }

    // Expands along rows[k] where k = number of columns already consumed.
    fn laplace(&self, rows: &[usize], cols: &[usize], mask: u64, memo: &mut HashMap<u64, T>) -> T {
        if mask == 0 {
            return self.one();
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let k = rows.len() - mask.count_ones() as usize;
        let row = rows[k];
        let mut acc = self.entries[0].zero_like();
        let mut sign_positive = true;
        for (pos, &c) in cols.iter().enumerate() {
            if mask & (1 << pos) == 0 {
                continue;
            }
            let a = self.get(row, c);
            if !a.is_zero_element() {
                let sub = self.laplace(rows, cols, mask & !(1 << pos), memo);
                let term = a.mul_ref(&sub);
                acc = if sign_positive { acc.add_ref(&term) } else { acc.sub_ref(&term) };
            }
            sign_positive = !sign_positive;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    pub fn determinant(&self) -> Result<T> {
        self.require_square()?;
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.subdeterminant(&idx, &idx))
    }

    /// Determinant with row `r` and column `c` removed.
    pub fn minor(&self, r: usize, c: usize) -> T {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != c).collect();
        self.subdeterminant(&rows, &cols)
    }

    /// For each column `c`, the determinant with row `r` and column `c`
    /// deleted. A 1x1 matrix yields the empty minor `[1]`.
    pub fn row_deleted_minors(&self, r: usize) -> Result<Vec<T>> {
        self.require_square()?;
        if r >= self.rows {
            return Err(Error::InvalidParameter(format!(
                "row {r} out of range for a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok((0..self.cols).map(|c| self.minor(r, c)).collect())
    }

    pub fn adjugate(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        Ok(Matrix::from_fn(n, n, |i, j| {
            let m = self.minor(j, i);
            if (i + j) % 2 == 0 {
                m
            } else {
                m.neg_ref()
            }
        }))
    }

    /// Inverse via adjugate divided by the (unit) determinant.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.determinant()?;
        let inv_det = det.unit_inverse()?;
        Ok(self.adjugate()?.map(|a| a.mul_ref(&inv_det)))
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(v[0].zero_like(), |acc, (a, x)| acc.add_ref(&a.mul_ref(x)))
            })
            .collect())
    }

    pub fn mul_mat(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(self.entries[0].zero_like(), |acc, k| {
                acc.add_ref(&self.get(i, k).mul_ref(other.get(k, j)))
            })
        }))
    }

    /// Exact solution of `A x = b`; the determinant must be a unit.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        self.require_square()?;
        self.inverse()?.mul_vec(b)
    }
}

/// Rank of a list of rational vectors (rows), by fraction-based elimination.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    echelon(rows.to_vec()).len()
}

fn echelon(mut rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let width = rows.first().map_or(0, |r| r.len());
    let mut col = 0;
    while col < width && !rows.is_empty() {
        if let Some(p) = rows.iter().position(|r| !r[col].is_zero()) {
            let pivot = rows.swap_remove(p);
            for r in rows.iter_mut() {
                if !r[col].is_zero() {
                    let f = &r[col] / &pivot[col];
                    for (x, y) in r.iter_mut().zip(&pivot) {
                        *x -= &f * y;
                    }
                }
            }
            out.push(pivot);
        }
        col += 1;
    }
    out
}

/// Solves `sum_k x_k * columns[k] = target` over the rationals, returning one
/// solution (free variables set to zero) or `None` when inconsistent.
pub fn solve_rational_columns(columns: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let n = columns.len();
    let m = target.len();
    // Augmented rows: [A | b], A is m x n.
    let mut rows: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][n].clone();
    }
    Some(x)
}
