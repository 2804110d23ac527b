//! Scalar abstraction over binary64 and double-double, plus the small dense kernels the
//! moment and Gram computations need in either precision.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use twofloat::TwoFloat;

use crate::Matrix;

pub(crate) trait Real:
    Copy + Debug + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_f64(v: f64) -> Self;
    /// Pair `(hi, lo)` with `hi + lo` the value.
    fn split(self) -> (f64, f64);
    fn div(self, other: Self) -> Self;
    fn sqrt(self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn hi(self) -> f64 {
        self.split().0
    }
    fn from_parts(hi: f64, lo: f64) -> Self {
        Self::from_f64(hi) + Self::from_f64(lo)
    }
}

impl Real for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn split(self) -> (f64, f64) {
        (self, 0.0)
    }
    fn div(self, other: Self) -> Self {
        self / other
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn from_parts(hi: f64, _lo: f64) -> Self {
        hi
    }
}

impl Real for TwoFloat {
    fn from_f64(v: f64) -> Self {
        TwoFloat::from(v)
    }
    fn split(self) -> (f64, f64) {
        (TwoFloat::hi(&self), TwoFloat::lo(&self))
    }
    // twofloat's division is only accurate to about 2^-53, so refine once.
    fn div(self, other: Self) -> Self {
        let q = self / other;
        let r = self - q * other;
        q + r.hi() / other.hi()
    }
    fn sqrt(self) -> Self {
        TwoFloat::sqrt(self)
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Dense<S> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<S>,
}

impl<S: Real> Dense<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::from_f64(1.0);
        }
        m
    }

    pub fn from_parts(hi: &Matrix, lo: Option<&Matrix>) -> Self {
        let (rows, cols) = hi.shape();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(S::from_parts(hi[(i, j)], lo.map_or(0.0, |l| l[(i, j)])));
            }
        }
        Dense { rows, cols, data }
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).hi())
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn add(&self, o: &Self) -> Self {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| *a + *b).collect();
        Dense { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| *a - *b).collect();
        Dense { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx] + a * o.get(k, j);
                }
            }
        }
        out
    }

    pub fn symmetrize(&self) -> Self {
        let half = S::from_f64(0.5);
        let data = self.add(&self.transpose()).data.into_iter().map(|v| v * half).collect();
        Dense { rows: self.rows, cols: self.cols, data }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut b = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                b.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        b
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }
}

/// Solves `h y = rhs` for symmetric positive definite `h` by Cholesky. The diagonal is
/// first equilibrated with powers of two so the scaling itself is exact. Returns `None`
/// if a pivot is not positive.
pub(crate) fn cholesky_solve<S: Real>(h: &Dense<S>, rhs: &Dense<S>) -> Option<Dense<S>> {
    let n = h.rows;
    let mut scale = Vec::with_capacity(n);
    for i in 0..n {
        let d = h.get(i, i).hi();
        if d.is_nan() || d <= 0.0 || d.is_infinite() {
            return None;
        }
        scale.push(S::from_f64((-0.5 * d.log2()).round().exp2()));
    }
    let mut l = Dense::<S>::zeros(n, n);
    for j in 0..n {
        let mut d = h.get(j, j) * scale[j] * scale[j];
        for k in 0..j {
            d = d - l.get(j, k) * l.get(j, k);
        }
        if d.hi().is_nan() || d.hi() <= 0.0 || d.hi().is_infinite() {
            return None;
        }
        let djj = d.sqrt();
        l.set(j, j, djj);
        for i in j + 1..n {
            let mut s = h.get(i, j) * scale[i] * scale[j];
            for k in 0..j {
                s = s - l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, s.div(djj));
        }
    }
    let mut out = Dense::<S>::zeros(n, rhs.cols);
    let mut y = vec![S::zero(); n];
    for c in 0..rhs.cols {
        for i in 0..n {
            let mut s = rhs.get(i, c) * scale[i];
            for (k, yk) in y.iter().enumerate().take(i) {
                s = s - l.get(i, k) * *yk;
            }
            y[i] = s.div(l.get(i, i));
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for (k, yk) in y.iter().enumerate().skip(i + 1) {
                s = s - l.get(k, i) * *yk;
            }
            y[i] = s.div(l.get(i, i));
        }
        for i in 0..n {
            out.set(i, c, y[i] * scale[i]);
        }
    }
    Some(out)
}
