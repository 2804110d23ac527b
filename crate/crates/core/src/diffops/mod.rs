//! Differential operators `D = sum_j d^j F_j(x)` acting on the right of matrix
//! polynomials: `P . D = sum_j P^{(j)}(x) F_j(x)`.

mod adjoint;
mod builders;

pub use adjoint::{formal_adjoint_diagonal, RatDiffOp, RatMatrix};
pub use builders::{
    bochner_parts, build_bochner_operator, build_classical_operator, build_tilde_operator,
    correction_matrix, BochnerParts,
};

use nalgebra::DMatrix;

use crate::error::{MbpError, Result};
use crate::polyops::{unipotent_inverse, MatrixPolynomial, Poly};
use crate::weights::Family;
use crate::Matrix;

#[derive(Clone, Debug, PartialEq)]
pub struct PolyDiffOp {
    n: usize,
    coeffs: Vec<MatrixPolynomial>,
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Falling factorial `[n]_i = n (n-1) ... (n-i+1)`.
pub fn falling_factorial(n: usize, i: usize) -> f64 {
    if i > n {
        return 0.0;
    }
    (0..i).fold(1.0, |acc, k| acc * (n - k) as f64)
}

impl PolyDiffOp {
    pub fn new(n: usize, coeffs: Vec<MatrixPolynomial>) -> Result<Self> {
        for c in &coeffs {
            if c.size() != n {
                return Err(MbpError::SizeMismatch { left: n, right: c.size() });
            }
        }
        Ok(Self::from_coeffs_unchecked(n, coeffs))
    }

    pub(crate) fn from_coeffs_unchecked(n: usize, mut coeffs: Vec<MatrixPolynomial>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyDiffOp { n, coeffs }
    }

    pub fn zero(n: usize) -> Self {
        PolyDiffOp { n, coeffs: Vec::new() }
    }

    /// Zero-order operator, right multiplication by `c`.
    pub fn constant(c: Matrix) -> Self {
        let n = c.nrows();
        Self::from_coeffs_unchecked(n, vec![MatrixPolynomial::constant(c)])
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(DMatrix::identity(n, n))
    }

    /// Zero-order operator, right multiplication by a matrix polynomial.
    pub fn multiplication(p: MatrixPolynomial) -> Self {
        let n = p.size();
        Self::from_coeffs_unchecked(n, vec![p])
    }

    /// `d^j F`.
    pub fn single(j: usize, f: MatrixPolynomial) -> Self {
        let n = f.size();
        let mut coeffs = vec![MatrixPolynomial::zero(n); j + 1];
        coeffs[j] = f;
        Self::from_coeffs_unchecked(n, coeffs)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[MatrixPolynomial] {
        &self.coeffs
    }

    /// Coefficient of `d^j`.
    pub fn coeff(&self, j: usize) -> MatrixPolynomial {
        self.coeffs.get(j).cloned().unwrap_or_else(|| MatrixPolynomial::zero(self.n))
    }

    /// `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(MbpError::SizeMismatch { left: self.n, right: n });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_size(other.n)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|j| self.coeff(j).add(&other.coeff(j))).collect::<Result<_>>()?;
        Ok(Self::from_coeffs_unchecked(self.n, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_coeffs_unchecked(self.n, self.coeffs.iter().map(|c| c.scale(s)).collect())
    }

    /// `P . D = sum_j P^{(j)} F_j`.
    pub fn apply_right(&self, p: &MatrixPolynomial) -> Result<MatrixPolynomial> {
        self.check_size(p.size())?;
        let mut acc = MatrixPolynomial::zero(self.n);
        let mut deriv = p.clone();
        for f in &self.coeffs {
            if deriv.is_zero() {
                break;
            }
            acc = acc.add(&deriv.mul(f)?)?;
            deriv = deriv.derivative();
        }
        Ok(acc)
    }

    /// The product `self o other`, ordered so that `P . (D1 o D2) = (P . D1) . D2`.
    ///
    /// Coefficient of `d^m` is `sum_{i+k=m} sum_{j>=k} C(j,k) F_i^{(j-k)} G_j`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_size(other.n)?;
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Self::zero(self.n));
        }
        let mut out = vec![MatrixPolynomial::zero(self.n); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, f) in self.coeffs.iter().enumerate() {
            // derivs[d] = F_i^{(d)}
            let mut derivs = vec![f.clone()];
            for (j, g) in other.coeffs.iter().enumerate() {
                while derivs.len() <= j {
                    let next = derivs.last().expect("nonempty").derivative();
                    derivs.push(next);
                }
                for k in 0..=j {
                    let d = &derivs[j - k];
                    if d.is_zero() {
                        continue;
                    }
                    let term = d.mul(g)?.scale(binomial(j, k));
                    out[i + k] = out[i + k].add(&term)?;
                }
            }
        }
        Ok(Self::from_coeffs_unchecked(self.n, out))
    }

    /// `D^m`, with `D^0` the identity.
    pub fn power(&self, m: usize) -> Result<Self> {
        let mut acc = Self::identity(self.n);
        for _ in 0..m {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// `T o D o T^{-1}` with `T`, `T^{-1}` acting as zero-order operators, so that
    /// `P . result = ((P T) . D) T^{-1}`.
    pub fn conjugate_by_unipotent(&self, t: &MatrixPolynomial) -> Result<Self> {
        self.check_size(t.size())?;
        let t_inv = unipotent_inverse(t)?;
        let mut t_derivs = vec![t.clone()];
        let mut out = Vec::with_capacity(self.coeffs.len());
        for k in 0..self.coeffs.len() {
            let mut h = MatrixPolynomial::zero(self.n);
            for j in k..self.coeffs.len() {
                while t_derivs.len() <= j - k {
                    let next = t_derivs.last().expect("nonempty").derivative();
                    t_derivs.push(next);
                }
                let td = &t_derivs[j - k];
                if td.is_zero() || self.coeffs[j].is_zero() {
                    continue;
                }
                h = h.add(&td.mul(&self.coeffs[j])?.scale(binomial(j, k)))?;
            }
            out.push(h.mul(&t_inv)?);
        }
        Ok(Self::from_coeffs_unchecked(self.n, out))
    }

    pub fn is_diagonal(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_diagonal())
    }

    pub fn off_diagonal_max(&self) -> f64 {
        self.coeffs.iter().map(|c| c.off_diagonal_max()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    /// Max absolute coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len).map(|j| self.coeff(j).max_abs_diff(&other.coeff(j))).fold(0.0, f64::max)
    }

    /// Zeroes entries with magnitude at most `tol` and re-trims.
    pub fn chop(&self, tol: f64) -> Self {
        Self::from_coeffs_unchecked(self.n, self.coeffs.iter().map(|c| c.chop(tol)).collect())
    }

    /// First `j` whose coefficient has degree above `j`, ignoring entries at most `tol`.
    pub fn degree_violation(&self, tol: f64) -> Option<(usize, usize)> {
        self.coeffs.iter().enumerate().find_map(|(j, f)| match f.effective_degree(tol) {
            Some(d) if d > j => Some((j, d)),
            _ => None,
        })
    }

    /// Closed-form eigenvalues `Lambda_n = sum_i [n]_i F_i^i` for `0 <= n <= n_max`.
    pub fn eigenvalue_sequence(&self, n_max: usize) -> Result<EigenvalueSequence> {
        let tol = 1e-10 * (1.0 + self.max_abs());
        if let Some((order, degree)) = self.degree_violation(tol) {
            return Err(MbpError::DegreeViolation { order, degree });
        }
        let tops: Vec<Matrix> = self.coeffs.iter().enumerate().map(|(i, f)| f.coeff(i)).collect();
        let values = (0..=n_max)
            .map(|n| {
                tops.iter()
                    .enumerate()
                    .fold(DMatrix::zeros(self.n, self.n), |acc, (i, top)| acc + top * falling_factorial(n, i))
            })
            .collect();
        Ok(EigenvalueSequence { values })
    }
}

/// `Lambda_n(D)` for `n = 0..=n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueSequence {
    values: Vec<Matrix>,
}

impl EigenvalueSequence {
    pub fn get(&self, n: usize) -> Option<&Matrix> {
        self.values.get(n)
    }

    pub fn values(&self) -> &[Matrix] {
        &self.values
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }
}

/// Outcome of comparing the top coefficient of an even-order operator with `c rho^m I`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingAnalysis {
    /// Half the order.
    pub m: usize,
    /// Least-squares scalar `c`.
    pub scale: f64,
    /// Max-norm of `F_{2m} - c rho^m I`.
    pub residual: f64,
    pub is_rho_power: bool,
}

/// Fits the leading coefficient of `d` against `c rho(x)^m I`; scale-invariant threshold
/// `residual < 1e-9 (1 + |c|)`.
pub fn leading_coefficient_analysis(d: &PolyDiffOp, family: Family) -> Result<LeadingAnalysis> {
    let order = d.order().ok_or(MbpError::ZeroOperator)?;
    if order % 2 == 1 {
        return Err(MbpError::OddOrder { order });
    }
    let m = order / 2;
    let top = d.coeff(order);
    let target = MatrixPolynomial::scalar(d.size(), &family.rho().pow(m));
    // least squares over all coefficient entries
    let len = top.coeffs().len().max(target.coeffs().len());
    let (mut num, mut den) = (0.0, 0.0);
    for k in 0..len {
        let (f, t) = (top.coeff(k), target.coeff(k));
        num += f.dot(&t);
        den += t.dot(&t);
    }
    let scale = num / den;
    let residual = top.max_abs_diff(&target.scale(scale));
    Ok(LeadingAnalysis { m, scale, residual, is_rho_power: residual < 1e-9 * (1.0 + scale.abs()) })
}

/// Scalar polynomial `rho^m` for a family, re-exported for callers that evaluate it.
pub fn rho_power(family: Family, m: usize) -> Poly {
    family.rho().pow(m)
}
