//! Dense row-major matrices and LU factorization with partial pivoting.

use std::ops::{Index, IndexMut};

use rayon::prelude::*;

use crate::{Error, Result};

/// Below this order the elimination runs on the calling thread.
const PARALLEL_MIN_ORDER: usize = 96;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Usage(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds the matrix row by row in parallel; `f(i, row)` fills row `i`.
    pub fn from_rows_par(rows: usize, cols: usize, f: impl Fn(usize, &mut [f64]) + Sync) -> Self {
        let mut data = vec![0.0; rows * cols];
        if cols > 0 {
            data.par_chunks_mut(cols).enumerate().for_each(|(i, row)| f(i, row));
        }
        Self { rows, cols, data }
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

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Usage(format!(
                "cannot multiply {}x{} matrix by vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let rows: Vec<f64> = if self.rows * self.cols >= 1 << 16 {
            (0..self.rows).into_par_iter().map(|i| dot(self.row(i), x)).collect()
        } else {
            (0..self.rows).map(|i| dot(self.row(i), x)).collect()
        };
        Ok(rows)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = other.cols;
        Ok(Self::from_rows_par(self.rows, n, |i, out| {
            for (k, a) in self.row(i).iter().enumerate() {
                if *a != 0.0 {
                    axpy(*a, other.row(k), out);
                }
            }
        }))
    }

    /// `self ← self + s · other`.
    pub fn add_scaled(&mut self, s: f64, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    // Four independent partial sums let the compiler vectorize the loop.
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for l in 0..4 {
            acc[l] += x[l] * y[l];
        }
    }
    let tail: f64 = ra.iter().zip(rb).map(|(x, y)| x * y).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// `P A = L U` with unit lower-triangular `L`, both packed in one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LuFactorization {
    lu: DenseMatrix,
    /// Row `i` of `P A` is row `perm[i]` of `A`.
    perm: Vec<usize>,
    sign: f64,
}

/// Factors a square matrix; fails on an exactly zero pivot.
pub fn lu_factor(a: &DenseMatrix) -> Result<LuFactorization> {
    if !a.is_square() {
        return Err(Error::Usage(format!(
            "LU needs a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    if a.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::Usage("matrix has non-finite entries".into()));
    }
    let n = a.rows;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, lu[(i, k)].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax == 0.0 {
            return Err(Error::Singular { pivot: k });
        }
        if p != k {
            swap_rows(&mut lu, p, k);
            perm.swap(p, k);
            sign = -sign;
        }
        let (head, tail) = lu.data.split_at_mut((k + 1) * n);
        let pivot_row = &head[k * n..];
        let pivot = pivot_row[k];
        let eliminate = |row: &mut [f64]| {
            let l = row[k] / pivot;
            row[k] = l;
            if l != 0.0 {
                axpy(-l, &pivot_row[k + 1..], &mut row[k + 1..]);
            }
        };
        if n - k > PARALLEL_MIN_ORDER {
            tail.par_chunks_mut(n).for_each(eliminate);
        } else {
            tail.chunks_mut(n).for_each(eliminate);
        }
    }
    Ok(LuFactorization { lu, perm, sign })
}

fn swap_rows(m: &mut DenseMatrix, a: usize, b: usize) {
    let n = m.cols;
    let (lo, hi) = (a.min(b), a.max(b));
    let (first, second) = m.data.split_at_mut(hi * n);
    first[lo * n..(lo + 1) * n].swap_with_slice(&mut second[..n]);
}

impl LuFactorization {
    pub fn order(&self) -> usize {
        self.lu.rows
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn determinant(&self) -> f64 {
        (0..self.order()).map(|i| self.lu[(i, i)]).product::<f64>() * self.sign
    }

    /// `min |u_kk| / max |u_kk|`, a cheap indicator of near-singularity.
    pub fn pivot_ratio(&self) -> f64 {
        let diag = (0..self.order()).map(|i| self.lu[(i, i)].abs());
        let (lo, hi) = diag.fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
        if hi == 0.0 {
            0.0
        } else {
            lo / hi
        }
    }

    /// Unit lower factor `L`.
    pub fn lower(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.order(), self.order(), |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.lu[(i, j)],
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Less => 0.0,
        })
    }

    pub fn upper(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.order(), self.order(), |i, j| if j >= i { self.lu[(i, j)] } else { 0.0 })
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.order();
        if b.len() != n {
            return Err(Error::Usage(format!(
                "right-hand side has length {}, system has order {n}",
                b.len()
            )));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            x[i] -= dot(&row[..i], &x[..i]);
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s = dot(&row[i + 1..], &x[i + 1..]);
            x[i] = (x[i] - s) / row[i];
        }
        Ok(x)
    }

    /// Solves `A X = B` for all columns at once, sweeping whole rows of `B`.
    pub fn solve_matrix(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.order();
        if b.rows != n {
            return Err(Error::Usage(format!(
                "right-hand side has {} rows, system has order {n}",
                b.rows
            )));
        }
        let m = b.cols;
        let mut x = DenseMatrix::zeros(n, m);
        for (i, &p) in self.perm.iter().enumerate() {
            x.row_mut(i).copy_from_slice(b.row(p));
        }
        if m == 0 {
            return Ok(x);
        }
        for i in 1..n {
            let (done, rest) = x.data.split_at_mut(i * m);
            let target = &mut rest[..m];
            for (j, &l) in self.lu.row(i)[..i].iter().enumerate() {
                if l != 0.0 {
                    axpy(-l, &done[j * m..(j + 1) * m], target);
                }
            }
        }
        for i in (0..n).rev() {
            let (head, solved) = x.data.split_at_mut((i + 1) * m);
            let target = &mut head[i * m..];
            let row = self.lu.row(i);
            for (off, &u) in row[i + 1..].iter().enumerate() {
                if u != 0.0 {
                    axpy(-u, &solved[off * m..(off + 1) * m], target);
                }
            }
            let d = 1.0 / row[i];
            target.iter_mut().for_each(|v| *v *= d);
        }
        Ok(x)
    }
}

/// Solves `A x = b` with an existing factorization.
pub fn lu_solve(f: &LuFactorization, rhs: &[f64]) -> Result<Vec<f64>> {
    f.solve(rhs)
}

pub fn invert(a: &DenseMatrix) -> Result<DenseMatrix> {
    let f = lu_factor(a)?;
    f.solve_matrix(&DenseMatrix::identity(a.rows))
}
