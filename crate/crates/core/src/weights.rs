//! Classical scalar weights, the conjugated matrix weights `W = T W~ T^T` built from
//! them, and their moments in closed form.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use twofloat::TwoFloat;

use crate::error::{MbpError, Result, SpecViolation};
use crate::polyops::{MatrixPolynomial, Poly};
use crate::real::Real;
use crate::Matrix;

pub const DEFAULT_WORKING_TOLERANCE: f64 = 1e-9;

/// Highest Jacobi moment order computed in binary64.
pub const JACOBI_MAX_MOMENT_ORDER: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Hermite,
    Laguerre,
    Jacobi,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Hermite => "hermite",
            Family::Laguerre => "laguerre",
            Family::Jacobi => "jacobi",
        }
    }

    /// Coefficient of the second derivative in the classical operator: `1`, `x`, `1 - x^2`.
    pub fn rho(self) -> Poly {
        match self {
            Family::Hermite => Poly::constant(1.0),
            Family::Laguerre => Poly::x(),
            Family::Jacobi => Poly::new(vec![1.0, 0.0, -1.0]),
        }
    }

    /// Open support interval.
    pub fn support(self) -> (f64, f64) {
        match self {
            Family::Hermite => (f64::NEG_INFINITY, f64::INFINITY),
            Family::Laguerre => (0.0, f64::INFINITY),
            Family::Jacobi => (-1.0, 1.0),
        }
    }
}

/// `e^{-x^2 + 2bx}`, `e^{-x} x^alpha` or `(1-x)^alpha (1+x)^beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarWeightSpec {
    Hermite { b: f64 },
    Laguerre { alpha: f64 },
    Jacobi { alpha: f64, beta: f64 },
}

impl ScalarWeightSpec {
    pub fn family(&self) -> Family {
        match self {
            ScalarWeightSpec::Hermite { .. } => Family::Hermite,
            ScalarWeightSpec::Laguerre { .. } => Family::Laguerre,
            ScalarWeightSpec::Jacobi { .. } => Family::Jacobi,
        }
    }

    pub fn rho(&self) -> Poly {
        self.family().rho()
    }

    /// Integrability conditions; every violation is listed.
    pub fn param_violations(&self, row: usize) -> Vec<SpecViolation> {
        let mut out = Vec::new();
        let mut check = |param: &'static str, value: f64, lower: Option<f64>| {
            let bad = !value.is_finite() || lower.is_some_and(|l| value <= l);
            if bad {
                out.push(SpecViolation::ParamOutOfRange { row, param, value });
            }
        };
        match *self {
            ScalarWeightSpec::Hermite { b } => check("b", b, None),
            ScalarWeightSpec::Laguerre { alpha } => check("alpha", alpha, Some(-1.0)),
            ScalarWeightSpec::Jacobi { alpha, beta } => {
                check("alpha", alpha, Some(-1.0));
                check("beta", beta, Some(-1.0));
            }
        }
        out
    }

    pub fn check_params(&self) -> Result<()> {
        match self.param_violations(0).first() {
            None => Ok(()),
            Some(v) => Err(MbpError::ParamOutOfRange(v.to_string())),
        }
    }

    /// Weight value at an interior point of the support.
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ScalarWeightSpec::Hermite { b } => (-x * x + 2.0 * b * x).exp(),
            ScalarWeightSpec::Laguerre { alpha } => (-x).exp() * x.powf(alpha),
            ScalarWeightSpec::Jacobi { alpha, beta } => (1.0 - x).powf(alpha) * (1.0 + x).powf(beta),
        }
    }
}

/// Moment `int x^k w(x) dx` over the support.
pub fn scalar_moment(w: &ScalarWeightSpec, k: usize) -> Result<f64> {
    Ok(scalar_moments(w, k)?[k])
}

/// Moments `m_0..=m_kmax` of a classical scalar weight.
///
/// Hermite and Laguerre use their exact two- and one-step recurrences. Jacobi uses
/// the integration-by-parts recurrence
/// `(k + alpha + beta + 2) m_{k+1} = k m_{k-1} + (beta - alpha) m_k`, which avoids
/// the alternating binomial sum (see [`jacobi_moment_binomial`]).
pub fn scalar_moments(w: &ScalarWeightSpec, kmax: usize) -> Result<Vec<f64>> {
    scalar_moments_in::<f64>(w, kmax)
}

pub(crate) fn scalar_moments_in<S: Real>(w: &ScalarWeightSpec, kmax: usize) -> Result<Vec<S>> {
    w.check_params()?;
    let mut m: Vec<S> = Vec::with_capacity(kmax + 1);
    let f = S::from_f64;
    match *w {
        ScalarWeightSpec::Hermite { b } => {
            m.push(f(PI.sqrt() * (b * b).exp()));
            for k in 0..kmax {
                let prev = if k == 0 { S::zero() } else { m[k - 1] };
                m.push(f(b) * m[k] + f(0.5 * k as f64) * prev);
            }
        }
        ScalarWeightSpec::Laguerre { alpha } => {
            m.push(f(libm::tgamma(alpha + 1.0)));
            for k in 1..=kmax {
                m.push((f(alpha) + f(k as f64)) * m[k - 1]);
            }
        }
        ScalarWeightSpec::Jacobi { alpha, beta } => {
            if kmax > JACOBI_MAX_MOMENT_ORDER {
                return Err(MbpError::ParamOutOfRange(format!(
                    "Jacobi moments are limited to order {JACOBI_MAX_MOMENT_ORDER}, requested {kmax}"
                )));
            }
            m.push(f(jacobi_mass(alpha, beta)));
            let gap = f(beta) - f(alpha);
            for k in 0..kmax {
                let kf = f(k as f64);
                let prev = if k == 0 { S::zero() } else { m[k - 1] };
                let den = kf + f(alpha) + f(beta) + f(2.0);
                m.push((kf * prev + gap * m[k]).div(den));
            }
        }
    }
    if let Some(k) = m.iter().position(|v| !v.hi().is_finite()) {
        return Err(MbpError::MomentOverflow { k });
    }
    Ok(m)
}

fn beta_fn(a: f64, b: f64) -> f64 {
    let direct = libm::tgamma(a) * libm::tgamma(b) / libm::tgamma(a + b);
    if direct.is_finite() && direct > 0.0 {
        direct
    } else {
        (libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)).exp()
    }
}

fn jacobi_mass(alpha: f64, beta: f64) -> f64 {
    2f64.powf(alpha + beta + 1.0) * beta_fn(alpha + 1.0, beta + 1.0)
}

/// Hermite moment by expanding `x^k = ((x - b) + b)^k` around the centre of the Gaussian.
pub fn hermite_moment_binomial(b: f64, k: usize) -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        if j % 2 == 0 {
            sum += binom * b.powi((k - j) as i32) * libm::tgamma((j as f64 + 1.0) / 2.0);
        }
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    (b * b).exp() * sum
}

/// Jacobi moment from `2^{a+b+1} sum_j C(k,j) (-2)^j B(alpha+j+1, beta+1)` with
/// Kahan-compensated summation. Loses roughly `log10(3^k)` digits to cancellation.
pub fn jacobi_moment_binomial(alpha: f64, beta: f64, k: usize) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut binom = 1.0f64;
    for j in 0..=k {
        let term = binom
            * (-2.0f64).powi(j as i32)
            * beta_fn(alpha + j as f64 + 1.0, beta + 1.0);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    2f64.powf(alpha + beta + 1.0) * sum
}

/// Parameters of `W(x) = T(x) W~(x) T(x)^T` with `T = I + A x`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixWeightSpec {
    pub family: Family,
    pub size: usize,
    pub rows: Vec<ScalarWeightSpec>,
    pub a: Vec<f64>,
    pub working_tolerance: f64,
}

fn distance_to_integer(v: f64) -> f64 {
    (v - v.round()).abs()
}

impl MatrixWeightSpec {
    pub fn new(family: Family, rows: Vec<ScalarWeightSpec>, a: Vec<f64>) -> Self {
        MatrixWeightSpec {
            family,
            size: rows.len(),
            rows,
            a,
            working_tolerance: DEFAULT_WORKING_TOLERANCE,
        }
    }

    pub fn hermite(b: &[f64], a: &[f64]) -> Self {
        Self::new(Family::Hermite, b.iter().map(|&b| ScalarWeightSpec::Hermite { b }).collect(), a.to_vec())
    }

    pub fn laguerre(alpha: &[f64], a: &[f64]) -> Self {
        Self::new(
            Family::Laguerre,
            alpha.iter().map(|&alpha| ScalarWeightSpec::Laguerre { alpha }).collect(),
            a.to_vec(),
        )
    }

    pub fn jacobi(params: &[(f64, f64)], a: &[f64]) -> Self {
        Self::new(
            Family::Jacobi,
            params.iter().map(|&(alpha, beta)| ScalarWeightSpec::Jacobi { alpha, beta }).collect(),
            a.to_vec(),
        )
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.working_tolerance = tol;
        self
    }

    /// Every violated condition, in a fixed order. Empty iff the spec is valid.
    pub fn violations(&self) -> Vec<SpecViolation> {
        let tol = self.working_tolerance;
        let mut out = Vec::new();
        if !(tol > 0.0 && tol.is_finite()) {
            out.push(SpecViolation::BadTolerance { value: tol });
        }
        if self.rows.len() != self.size {
            out.push(SpecViolation::LengthMismatch { what: "rows", expected: self.size, found: self.rows.len() });
        }
        let expected_a = self.size.saturating_sub(1);
        if self.a.len() != expected_a {
            out.push(SpecViolation::LengthMismatch { what: "a", expected: expected_a, found: self.a.len() });
        }
        for (row, w) in self.rows.iter().enumerate() {
            if w.family() != self.family {
                out.push(SpecViolation::FamilyMismatch { row });
            }
            out.extend(w.param_violations(row));
        }
        for (index, &a) in self.a.iter().enumerate() {
            if a == 0.0 || !a.is_finite() {
                out.push(SpecViolation::ZeroNilpotentEntry { index });
            }
        }
        for i in 0..self.rows.len() {
            for j in i + 1..self.rows.len() {
                let reason = match (self.rows[i], self.rows[j]) {
                    (ScalarWeightSpec::Hermite { b: bi }, ScalarWeightSpec::Hermite { b: bj }) => {
                        ((bi - bj).abs() <= tol).then(|| format!("b_i = b_j = {bi}"))
                    }
                    (ScalarWeightSpec::Laguerre { alpha: ai }, ScalarWeightSpec::Laguerre { alpha: aj }) => {
                        (distance_to_integer(ai - aj) <= tol)
                            .then(|| format!("alpha_i - alpha_j = {} is an integer", ai - aj))
                    }
                    (
                        ScalarWeightSpec::Jacobi { alpha: ai, beta: bi },
                        ScalarWeightSpec::Jacobi { alpha: aj, beta: bj },
                    ) => (distance_to_integer(ai - aj) <= tol && distance_to_integer(bi - bj) <= tol)
                        .then(|| {
                            format!(
                                "alpha_i - alpha_j = {} and beta_i - beta_j = {} are both integers",
                                ai - aj,
                                bi - bj
                            )
                        }),
                    _ => None,
                };
                if let Some(reason) = reason {
                    out.push(SpecViolation::RationalRatioViolation { i, j, reason });
                }
            }
        }
        out.extend(self.jacobi_sum_violations());
        out
    }

    /// Rows breaking `alpha_1 + beta_1 = alpha_j + beta_j + 1 + (-1)^j` (1-based `j`).
    pub fn jacobi_sum_violations(&self) -> Vec<SpecViolation> {
        let params: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter_map(|w| match *w {
                ScalarWeightSpec::Jacobi { alpha, beta } => Some((alpha, beta)),
                _ => None,
            })
            .collect();
        if self.family != Family::Jacobi || params.is_empty() {
            return Vec::new();
        }
        let s1 = params[0].0 + params[0].1;
        params
            .iter()
            .enumerate()
            .skip(1)
            .filter_map(|(row, &(a, b))| {
                let sign = if (row + 1) % 2 == 0 { 1.0 } else { -1.0 };
                let expected = s1 - 1.0 - sign;
                ((a + b - expected).abs() > self.working_tolerance)
                    .then_some(SpecViolation::JacobiSumViolation { row, expected, found: a + b })
            })
            .collect()
    }

    pub fn validate(&self) -> Result<ValidatedSpec> {
        validate_spec(self)
    }
}

pub fn validate_spec(spec: &MatrixWeightSpec) -> Result<ValidatedSpec> {
    let v = spec.violations();
    if v.is_empty() {
        Ok(ValidatedSpec(spec.clone()))
    } else {
        Err(MbpError::InvalidSpec(v))
    }
}

/// A [`MatrixWeightSpec`] that passed validation, or one explicitly let through with
/// [`ValidatedSpec::new_unchecked`] to build control cases.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedSpec(MatrixWeightSpec);

impl ValidatedSpec {
    /// Skips validation; only structural lengths are checked. Used for reducible or
    /// degenerate control weights.
    pub fn new_unchecked(spec: MatrixWeightSpec) -> Result<Self> {
        if spec.rows.len() != spec.size || spec.size == 0 {
            return Err(MbpError::LengthMismatch { expected: spec.size, found: spec.rows.len() });
        }
        if spec.a.len() + 1 != spec.size {
            return Err(MbpError::LengthMismatch { expected: spec.size - 1, found: spec.a.len() });
        }
        for w in &spec.rows {
            w.check_params()?;
        }
        Ok(ValidatedSpec(spec))
    }

    pub fn spec(&self) -> &MatrixWeightSpec {
        &self.0
    }

    pub fn family(&self) -> Family {
        self.0.family
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn rows(&self) -> &[ScalarWeightSpec] {
        &self.0.rows
    }

    pub fn nilpotent(&self) -> Matrix {
        nilpotent_matrix(&self.0.a, self.0.size).expect("lengths checked at construction")
    }

    /// `T(x) = I + A x`.
    pub fn unipotent_factor(&self) -> MatrixPolynomial {
        MatrixPolynomial::unipotent_linear(&self.nilpotent())
    }

    /// Diagonal weight `W~(x)`.
    pub fn tilde_weight(&self, x: f64) -> Matrix {
        let d: Vec<f64> = self.rows().iter().map(|w| w.eval(x)).collect();
        Matrix::from_diagonal(&nalgebra::DVector::from_vec(d))
    }

    pub fn support(&self) -> (f64, f64) {
        self.family().support()
    }
}

/// `A = sum a_{2j-1} E_{2j-1,2j} + sum a_{2j} E_{2j+1,2j}`: odd-indexed entries sit on the
/// superdiagonal, even-indexed ones on the subdiagonal. Always satisfies `A^2 = 0`.
pub fn nilpotent_matrix(a: &[f64], n: usize) -> Result<Matrix> {
    if a.len() + 1 != n {
        return Err(MbpError::LengthMismatch { expected: n.saturating_sub(1), found: a.len() });
    }
    let mut m = DMatrix::zeros(n, n);
    for (idx, &v) in a.iter().enumerate() {
        if idx % 2 == 0 {
            m[(idx, idx + 1)] = v;
        } else {
            m[(idx + 1, idx)] = v;
        }
    }
    Ok(m)
}

/// Matrix moments `M_0..=M_K` of a weight.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    n: usize,
    entries: Vec<Matrix>,
    tails: Vec<Matrix>,
}

impl MomentTable {
    pub fn new(n: usize, entries: Vec<Matrix>) -> Result<Self> {
        if entries.is_empty() {
            return Err(MbpError::MomentTableTooSmall { needed: 0, available: 0 });
        }
        for m in &entries {
            if m.nrows() != n || m.ncols() != n {
                return Err(MbpError::SizeMismatch { left: n, right: m.nrows() });
            }
        }
        let tails = vec![DMatrix::zeros(n, n); entries.len()];
        Ok(MomentTable { n, entries, tails })
    }

    /// Table whose exact moments are `entries[k] + tails[k]`, the tails holding the
    /// rounding error of the binary64 entries.
    pub fn with_tails(n: usize, entries: Vec<Matrix>, tails: Vec<Matrix>) -> Result<Self> {
        let mut t = Self::new(n, entries)?;
        if tails.len() != t.entries.len() {
            return Err(MbpError::LengthMismatch { expected: t.entries.len(), found: tails.len() });
        }
        for m in &tails {
            if m.nrows() != n || m.ncols() != n {
                return Err(MbpError::SizeMismatch { left: n, right: m.nrows() });
            }
        }
        t.tails = tails;
        Ok(t)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Highest available order `K`.
    pub fn max_order(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn get(&self, k: usize) -> Result<&Matrix> {
        self.entries.get(k).ok_or(MbpError::MomentTableTooSmall { needed: k, available: self.max_order() })
    }

    pub fn entries(&self) -> &[Matrix] {
        &self.entries
    }

    pub fn tails(&self) -> &[Matrix] {
        &self.tails
    }

    /// Block Hankel matrix `(M_{i+j})_{0 <= i,j <= m}`.
    pub fn block_hankel(&self, m: usize) -> Result<Matrix> {
        self.get(2 * m)?;
        let n = self.n;
        let mut h = DMatrix::zeros((m + 1) * n, (m + 1) * n);
        for i in 0..=m {
            for j in 0..=m {
                h.view_mut((i * n, j * n), (n, n)).copy_from(&self.entries[i + j]);
            }
        }
        Ok(h)
    }

    /// Symmetry of every `M_k` (relative `tol`) and positive definiteness of every
    /// block Hankel matrix that fits in the table.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        for m in &self.entries {
            let scale = m.amax().max(f64::MIN_POSITIVE);
            if (m - m.transpose()).amax() > tol * scale {
                return Err(MbpError::SingularGram { n: 0 });
            }
        }
        for m in 0..=self.max_order() / 2 {
            if self.block_hankel(m)?.cholesky().is_none() {
                return Err(MbpError::SingularGram { n: m });
            }
        }
        Ok(())
    }
}

/// `M_k = M~_k + A M~_{k+1} + M~_{k+1} A^T + A M~_{k+2} A^T` with `M~_k` the diagonal
/// matrix of scalar moments.
pub fn matrix_moments(spec: &ValidatedSpec, kmax: usize) -> Result<MomentTable> {
    let n = spec.size();
    // carried in double-double so the entries are correctly rounded and the tails usable
    let scalar: Vec<Vec<TwoFloat>> = spec
        .rows()
        .iter()
        .map(|w| scalar_moments_in::<TwoFloat>(w, kmax + 2))
        .collect::<Result<_>>()?;
    let a = spec.nilpotent();
    let mut entries = Vec::with_capacity(kmax + 1);
    let mut tails = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let mut hi = DMatrix::zeros(n, n);
        let mut lo = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut v = TwoFloat::from(0.0);
                if i == j {
                    v += scalar[i][k];
                }
                v += scalar[j][k + 1] * a[(i, j)] + scalar[i][k + 1] * a[(j, i)];
                for l in 0..n {
                    v += scalar[l][k + 2] * (a[(i, l)] * a[(j, l)]);
                }
                let (h, t) = v.split();
                if !h.is_finite() {
                    return Err(MbpError::MomentOverflow { k });
                }
                hi[(i, j)] = h;
                lo[(i, j)] = t;
            }
        }
        entries.push(hi);
        tails.push(lo);
    }
    MomentTable::with_tails(n, entries, tails)
}

/// `W(x) = T(x) W~(x) T(x)^T` at an interior point.
pub fn evaluate_weight(spec: &ValidatedSpec, x: f64) -> Result<Matrix> {
    let (lo, hi) = spec.support();
    if !(x > lo && x < hi) {
        return Err(MbpError::OutOfSupport { x, lo, hi });
    }
    let t = spec.unipotent_factor().eval(x);
    let w = &t * spec.tilde_weight(x) * t.transpose();
    Ok((&w + w.transpose()) * 0.5)
}
