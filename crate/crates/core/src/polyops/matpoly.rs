use std::fmt;

use nalgebra::DMatrix;

use super::poly::Poly;
use crate::error::{MbpError, Result};
use crate::Matrix;

/// Polynomial with `N x N` real matrix coefficients; `coeffs[k]` multiplies `x^k`.
///
/// Trailing all-zero coefficients are trimmed, so the zero polynomial has no
/// coefficients and [`MatrixPolynomial::degree`] returns `None` for it.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial {
    n: usize,
    coeffs: Vec<Matrix>,
}

impl MatrixPolynomial {
    pub fn new(n: usize, coeffs: Vec<Matrix>) -> Result<Self> {
        for c in &coeffs {
            if c.nrows() != n || c.ncols() != n {
                return Err(MbpError::SizeMismatch { left: n, right: c.nrows().max(c.ncols()) });
            }
        }
        Ok(Self::from_coeffs_unchecked(n, coeffs))
    }

    pub(crate) fn from_coeffs_unchecked(n: usize, mut coeffs: Vec<Matrix>) -> Self {
        while coeffs.last().is_some_and(|c| c.iter().all(|&v| v == 0.0)) {
            coeffs.pop();
        }
        MatrixPolynomial { n, coeffs }
    }

    pub fn zero(n: usize) -> Self {
        MatrixPolynomial { n, coeffs: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(DMatrix::identity(n, n))
    }

    pub fn constant(c: Matrix) -> Self {
        let n = c.nrows();
        Self::from_coeffs_unchecked(n, vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: Matrix, k: usize) -> Self {
        let n = c.nrows();
        let mut coeffs = vec![DMatrix::zeros(n, n); k + 1];
        coeffs[k] = c;
        Self::from_coeffs_unchecked(n, coeffs)
    }

    /// Scalar polynomial times the identity.
    pub fn scalar(n: usize, p: &Poly) -> Self {
        let id = DMatrix::<f64>::identity(n, n);
        Self::from_coeffs_unchecked(n, p.coeffs().iter().map(|&c| &id * c).collect())
    }

    /// Diagonal matrix polynomial with the given scalar entries.
    pub fn diagonal(entries: &[Poly]) -> Self {
        let n = entries.len();
        let deg = entries.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
        let coeffs = (0..deg)
            .map(|k| DMatrix::from_fn(n, n, |i, j| if i == j { entries[i].coeff(k) } else { 0.0 }))
            .collect();
        Self::from_coeffs_unchecked(n, coeffs)
    }

    /// `I + A x`
    pub fn unipotent_linear(a: &Matrix) -> Self {
        let n = a.nrows();
        Self::from_coeffs_unchecked(n, vec![DMatrix::identity(n, n), a.clone()])
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Matrix] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Matrix {
        self.coeffs.get(k).cloned().unwrap_or_else(|| DMatrix::zeros(self.n, self.n))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient, zero matrix for the zero polynomial.
    pub fn leading(&self) -> Matrix {
        self.coeffs.last().cloned().unwrap_or_else(|| DMatrix::zeros(self.n, self.n))
    }

    /// Scalar entry `(i, j)` as a polynomial.
    pub fn entry(&self, i: usize, j: usize) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c[(i, j)]).collect())
    }

    pub fn eval(&self, x: f64) -> Matrix {
        let mut acc = DMatrix::zeros(self.n, self.n);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(MbpError::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::from_coeffs_unchecked(
            self.n,
            (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_coeffs_unchecked(self.n, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Coefficient-wise convolution.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.n));
        }
        let mut out = vec![DMatrix::zeros(self.n, self.n); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self::from_coeffs_unchecked(self.n, out))
    }

    /// `C * P` for a constant matrix `C`.
    pub fn left_mul(&self, c: &Matrix) -> Self {
        Self::from_coeffs_unchecked(self.n, self.coeffs.iter().map(|p| c * p).collect())
    }

    /// `P * C` for a constant matrix `C`.
    pub fn right_mul(&self, c: &Matrix) -> Self {
        Self::from_coeffs_unchecked(self.n, self.coeffs.iter().map(|p| p * c).collect())
    }

    /// `x^k * P`
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![DMatrix::zeros(self.n, self.n); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::from_coeffs_unchecked(self.n, coeffs)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs_unchecked(
            self.n,
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect(),
        )
    }

    /// `m`-th formal derivative.
    pub fn nth_derivative(&self, m: usize) -> Self {
        (0..m).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn transpose(&self) -> Self {
        Self::from_coeffs_unchecked(self.n, self.coeffs.iter().map(|c| c.transpose()).collect())
    }

    /// Largest absolute coefficient entry.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().flat_map(|c| c.iter()).fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest Frobenius norm over the coefficients.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Max absolute entrywise difference, padding the shorter polynomial with zeros.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|k| (self.coeff(k) - other.coeff(k)).amax())
            .fold(0.0, f64::max)
    }

    pub fn is_diagonal(&self) -> bool {
        self.off_diagonal_max() == 0.0
    }

    /// Largest absolute off-diagonal entry over all coefficients.
    pub fn off_diagonal_max(&self) -> f64 {
        let mut m = 0.0f64;
        for c in &self.coeffs {
            for i in 0..self.n {
                for j in 0..self.n {
                    if i != j {
                        m = m.max(c[(i, j)].abs());
                    }
                }
            }
        }
        m
    }

    /// Zeroes entries with magnitude at most `tol` and re-trims.
    pub fn chop(&self, tol: f64) -> Self {
        Self::from_coeffs_unchecked(
            self.n,
            self.coeffs
                .iter()
                .map(|c| c.map(|v| if v.abs() <= tol { 0.0 } else { v }))
                .collect(),
        )
    }

    /// Degree after discarding coefficients whose entries are all at most `tol`.
    pub fn effective_degree(&self, tol: f64) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.amax() > tol)
    }
}

/// Inverse of a unipotent matrix polynomial `T = I + N(x)` with `N(0) = 0` and `N(x)`
/// nilpotent, by the terminating series `sum_k (-N)^k`.
pub fn unipotent_inverse(t: &MatrixPolynomial) -> Result<MatrixPolynomial> {
    let n = t.size();
    let id = MatrixPolynomial::identity(n);
    if t.is_zero() || (t.coeff(0) - DMatrix::<f64>::identity(n, n)).amax() != 0.0 {
        return Err(MbpError::NotUnipotent);
    }
    let nil = t.sub(&id)?.scale(-1.0);
    let mut sum = id.clone();
    let mut term = id;
    // a nilpotent N x N matrix over the polynomial ring vanishes by its N-th power
    for _ in 0..n {
        term = term.mul(&nil)?;
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term)?;
    }
    if !term.is_zero() {
        return Err(MbpError::NotUnipotent);
    }
    let scale = 1.0 + t.max_abs();
    let left = t.mul(&sum)?;
    let right = sum.mul(t)?;
    let idp = MatrixPolynomial::identity(n);
    if left.max_abs_diff(&idp) > 1e-12 * scale || right.max_abs_diff(&idp) > 1e-12 * scale {
        return Err(MbpError::NotUnipotent);
    }
    Ok(sum)
}

impl fmt::Display for MatrixPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        write!(f, "]")
    }
}
