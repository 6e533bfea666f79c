use rayon::prelude::*;

use super::field::Field;
use crate::error::{input_err, Result};

/// Dense row-major matrix over an exact field.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Result of row reduction.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    /// The reduced matrix, rows past `rank` are zero.
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Rref<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the null space: one vector per non-pivot column `c`, equal
    /// to `e_c - sum_r rref[r][c] e_{pivot_r}`.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.matrix.field;
        let cols = self.matrix.cols;
        let mut is_pivot = vec![false; cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..cols)
            .filter(|&c| !is_pivot[c])
            .map(|c| {
                let mut v = vec![f.zero(); cols];
                v[c] = f.one();
                for (r, &p) in self.pivots.iter().enumerate() {
                    v[p] = f.neg(self.matrix.get(r, c));
                }
                v
            })
            .collect()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.matrix.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.matrix.cols).filter(|&c| !is_pivot[c]).collect()
    }
}

const PAR_THRESHOLD: usize = 1 << 16;

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (k, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(input_err!("row {k} has length {} but expected {cols}", r.len()));
            }
            data.extend(r);
        }
        Ok(Matrix { field: field.clone(), rows: n, cols, data })
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (r, x) in col.iter().enumerate() {
                if !field.is_zero(x) {
                    m.set(r, c, x.clone());
                }
            }
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<F>) -> Result<Matrix<F>> {
        if self.cols != other.rows {
            return Err(input_err!(
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            ));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        let oc = other.cols;
        let compute = |(r, out_row): (usize, &mut [F::Elem])| {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if !f.is_zero(a) {
                    f.axpy(out_row, a, other.row(k));
                }
            }
        };
        if oc > 0 {
            if self.rows * self.cols * oc > PAR_THRESHOLD {
                out.data.par_chunks_mut(oc).enumerate().for_each(compute);
            } else {
                out.data.chunks_mut(oc).enumerate().for_each(compute);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        debug_assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = f.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    /// Submatrix of the given rows and columns, in order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Reduced row-echelon form with leftmost-nonzero pivots.
    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelon_in_place(false).len()
    }

    pub fn rref_in_place(&mut self) -> Vec<usize> {
        self.echelon_in_place(true)
    }

    /// Gaussian elimination. With `reduced`, entries above pivots are
    /// cleared too.
    fn echelon_in_place(&mut self, reduced: bool) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..cols {
            if rank == self.rows {
                break;
            }
            let Some(pr) = (rank..self.rows).find(|&r| !f.is_zero(self.get(r, c))) else {
                continue;
            };
            if pr != rank {
                for k in c..cols {
                    self.data.swap(pr * cols + k, rank * cols + k);
                }
            }
            let inv = f.inv(self.get(rank, c));
            f.scale(&mut self.data[rank * cols + c..(rank + 1) * cols], &inv);

            let (before, rest) = self.data.split_at_mut(rank * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            let pivot_tail = &pivot_row[c..];
            let eliminate = |row: &mut [F::Elem]| {
                let x = row[c].clone();
                if !f.is_zero(&x) {
                    let factor = f.neg(&x);
                    f.axpy(&mut row[c..], &factor, pivot_tail);
                }
            };
            let work = (self.rows - rank) * (cols - c);
            if work > PAR_THRESHOLD {
                after.par_chunks_mut(cols).for_each(eliminate);
                if reduced {
                    before.par_chunks_mut(cols).for_each(eliminate);
                }
            } else {
                after.chunks_mut(cols).for_each(eliminate);
                if reduced {
                    before.chunks_mut(cols).for_each(eliminate);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        pivots
    }
}
