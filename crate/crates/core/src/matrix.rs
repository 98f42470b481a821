//! Dense integer matrices with arbitrary-precision entries.
//!
//! Convergent products, basis changes and Bratteli incidence matrices all
//! outgrow machine integers quickly, so everything here is `BigInt`-backed.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from rows, which must all have the same length.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Domain("ragged matrix rows".into()));
        }
        Ok(IntMatrix {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Domain(format!(
                "matrix product shape mismatch: {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let cur = out.get(r, c) + a * b;
                        out.set(r, c, cur);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if self.cols != v.len() {
            return Err(Error::Domain(format!(
                "matrix-vector shape mismatch: {}x{} * {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Domain("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.data.clone();
        let at = |m: &Vec<BigInt>, r: usize, c: usize| m[r * n + c].clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if at(&m, k, k).is_zero() {
                // pivot search
                let swap = (k + 1..n).find(|&r| !at(&m, r, k).is_zero());
                match swap {
                    Some(r) => {
                        for c in 0..n {
                            m.swap(k * n + c, r * n + c);
                        }
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = at(&m, i, j) * at(&m, k, k) - at(&m, i, k) * at(&m, k, j);
                    m[i * n + j] = num / &prev;
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = at(&m, k, k);
        }
        Ok(sign * at(&m, n - 1, n - 1))
    }

    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.det()?.abs().is_one())
    }
}
