//! Dense linear algebra over a prime field F_p with runtime modulus.
//!
//! Characteristics in this crate are tiny (single machine words), so
//! elements are plain `u64` residues in `[0, p)` and all reductions go
//! through the [`Fp`] field descriptor.  Matrices are dense row-major;
//! the sizes that appear in practice are a few hundred on a side.

use crate::arith::is_prime;
use std::fmt;

/// Field descriptor for F_p.  All scalar arithmetic funnels through here
/// so there is exactly one place where reduction happens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Fp {
        assert!(is_prime(p), "modulus {p} is not prime");
        Fp { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.p);
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        a * b % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "zero is not invertible");
        self.pow(a, self.p - 2)
    }
}

/// Dense matrix over F_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> FpMatrix {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Fp, n: usize) -> FpMatrix {
        let mut m = FpMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from rows of raw residues; entries are reduced mod p.
    pub fn from_rows(field: Fp, rows: &[Vec<i64>]) -> FpMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| field.reduce(x)))
            .collect();
        FpMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(v < self.field.p);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Row-major entries; used for canonical comparisons.
    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.cols);
        debug_assert!(row.iter().all(|&v| v < self.field.p));
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.field, other.field, "mismatched fields");
        assert_eq!(self.cols, other.rows, "mismatched shapes");
        let f = self.field;
        let mut out = FpMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "mismatched shapes");
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// In-place reduced row echelon form.  Returns the pivot columns in
    /// order; the rank is their count.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let found = (pivot_row..self.rows).find(|&i| self.get(i, col) != 0);
            let Some(src) = found else { continue };
            self.swap_rows(src, pivot_row);
            let scale = f.inv(self.get(pivot_row, col));
            self.scale_row(pivot_row, scale);
            for i in 0..self.rows {
                if i != pivot_row {
                    let factor = self.get(i, col);
                    if factor != 0 {
                        self.add_scaled_row(i, pivot_row, f.neg(factor));
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    pub fn det(&self) -> u64 {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let f = self.field;
        let mut m = self.clone();
        let n = m.rows;
        let mut det = 1u64;
        for col in 0..n {
            let Some(src) = (col..n).find(|&i| m.get(i, col) != 0) else {
                return 0;
            };
            if src != col {
                m.swap_rows(src, col);
                det = f.neg(det);
            }
            let pivot = m.get(col, col);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot);
            for i in col + 1..n {
                let factor = m.get(i, col);
                if factor != 0 {
                    m.add_scaled_row(i, col, f.neg(f.mul(factor, inv)));
                }
            }
        }
        det
    }

    /// Inverse; `None` when singular.
    pub fn inverse(&self) -> Option<FpMatrix> {
        assert_eq!(self.rows, self.cols, "inverse needs a square matrix");
        let n = self.rows;
        let mut aug = FpMatrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(k, &c)| c != k) {
            return None;
        }
        let mut out = FpMatrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j));
            }
        }
        Some(out)
    }

    /// Block-diagonal sum of `k` copies of `self`.
    pub fn block_power(&self, k: usize) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.field, self.rows * k, self.cols * k);
        for b in 0..k {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    out.set(b * self.rows + i, b * self.cols + j, self.get(i, j));
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, s: u64) {
        let f = self.field;
        for j in 0..self.cols {
            let v = f.mul(self.get(i, j), s);
            self.set(i, j, v);
        }
    }

    /// row_i += s * row_src
    fn add_scaled_row(&mut self, i: usize, src: usize, s: u64) {
        let f = self.field;
        for j in 0..self.cols {
            let v = f.add(self.get(i, j), f.mul(s, self.get(src, j)));
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "FpMatrix mod {} ({}x{})", self.field.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(out, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}
