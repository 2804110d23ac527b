use nalgebra::{DMatrix, DVector};

use super::PolyDiffOp;
use crate::error::{MbpError, Result};
use crate::polyops::{log_derivative_pair, MatrixPolynomial, Poly};
use crate::weights::{Family, ScalarWeightSpec, ValidatedSpec};
use crate::Matrix;

/// Classical scalar operator `d^2 rho + d (w rho)'/w` as a 1x1 operator.
pub fn build_classical_operator(w: &ScalarWeightSpec) -> Result<PolyDiffOp> {
    let first = log_derivative_pair(w)?.weighted.as_poly().expect("polynomial for classical weights");
    Ok(PolyDiffOp::from_coeffs_unchecked(
        1,
        vec![
            MatrixPolynomial::zero(1),
            MatrixPolynomial::scalar(1, &first),
            MatrixPolynomial::scalar(1, &w.rho()),
        ],
    ))
}

/// `D~ = d^2 rho I + d diag((w_j rho)'/w_j)`.
pub fn build_tilde_operator(spec: &ValidatedSpec) -> Result<PolyDiffOp> {
    let n = spec.size();
    let firsts = spec
        .rows()
        .iter()
        .map(|w| Ok(log_derivative_pair(w)?.weighted.as_poly().expect("polynomial for classical weights")))
        .collect::<Result<Vec<Poly>>>()?;
    Ok(PolyDiffOp::from_coeffs_unchecked(
        n,
        vec![
            MatrixPolynomial::zero(n),
            MatrixPolynomial::diagonal(&firsts),
            MatrixPolynomial::scalar(n, &spec.family().rho()),
        ],
    ))
}

/// `K = sum_j E_{2j,2j}`: ones on the even (1-based) diagonal positions.
fn even_projector(n: usize) -> Matrix {
    DMatrix::from_diagonal(&DVector::from_fn(n, |i, _| if i % 2 == 1 { 1.0 } else { 0.0 }))
}

fn jacobi_sum(spec: &ValidatedSpec) -> f64 {
    match spec.rows()[0] {
        ScalarWeightSpec::Jacobi { alpha, beta } => alpha + beta,
        _ => unreachable!("jacobi family rows"),
    }
}

/// The constant `K~`: `2K`, `K` or `(alpha_1 + beta_1) K`.
pub fn correction_matrix(spec: &ValidatedSpec) -> Matrix {
    let k = even_projector(spec.size());
    match spec.family() {
        Family::Hermite => k * 2.0,
        Family::Laguerre => k,
        Family::Jacobi => k * jacobi_sum(spec),
    }
}

/// Everything that goes into the second-order operator of a weight.
#[derive(Clone, Debug, PartialEq)]
pub struct BochnerParts {
    pub nilpotent: Matrix,
    pub unipotent: MatrixPolynomial,
    pub tilde: PolyDiffOp,
    pub correction: Matrix,
    pub operator: PolyDiffOp,
}

impl BochnerParts {
    /// `D~ + K~`.
    pub fn shifted_tilde(&self) -> PolyDiffOp {
        self.tilde
            .add(&PolyDiffOp::constant(self.correction.clone()))
            .expect("same size")
    }
}

fn diag_of(spec: &ValidatedSpec, f: impl Fn(&ScalarWeightSpec) -> f64) -> Matrix {
    DMatrix::from_diagonal(&DVector::from_iterator(spec.size(), spec.rows().iter().map(f)))
}

/// Second-order operator in closed form:
///
/// * Hermite: `d^2 I + d(2A + B - 2x + x[A,B]) + AB + 2K`
/// * Laguerre: `d^2 x I + d(B - x + 2xA + x[A,B]) + AB + K`
/// * Jacobi: `d^2 (1-x^2) I + d(2A + B + x([A,B] + 2K - (s+2) I)) + AB + s K`, `s = alpha_1 + beta_1`
///
/// The result is checked against `T (D~ + K~) T^{-1}`.
pub fn build_bochner_operator(spec: &ValidatedSpec) -> Result<PolyDiffOp> {
    Ok(bochner_parts(spec)?.operator)
}

pub fn bochner_parts(spec: &ValidatedSpec) -> Result<BochnerParts> {
    if let Some(v) = spec.spec().jacobi_sum_violations().first() {
        let row = match v {
            crate::error::SpecViolation::JacobiSumViolation { row, .. } => *row,
            _ => 0,
        };
        return Err(MbpError::JacobiSumViolation { row: row + 1 });
    }
    let n = spec.size();
    let id = DMatrix::<f64>::identity(n, n);
    let a = spec.nilpotent();
    let k = even_projector(n);
    let (rho, f1_lin, f0) = match spec.family() {
        Family::Hermite => {
            let b = diag_of(spec, |w| match *w {
                ScalarWeightSpec::Hermite { b } => 2.0 * b,
                _ => unreachable!(),
            });
            let comm = &a * &b - &b * &a;
            let f1 = (MatrixPolynomial::constant(&a * 2.0 + &b), -&id * 2.0 + comm);
            let f0 = &a * &b + &k * 2.0;
            (Family::Hermite.rho(), f1, f0)
        }
        Family::Laguerre => {
            let b = diag_of(spec, |w| match *w {
                ScalarWeightSpec::Laguerre { alpha } => alpha + 1.0,
                _ => unreachable!(),
            });
            let comm = &a * &b - &b * &a;
            let f1 = (MatrixPolynomial::constant(b.clone()), -&id + &a * 2.0 + comm);
            let f0 = &a * &b + &k;
            (Family::Laguerre.rho(), f1, f0)
        }
        Family::Jacobi => {
            let s = jacobi_sum(spec);
            let b = diag_of(spec, |w| match *w {
                ScalarWeightSpec::Jacobi { alpha, beta } => beta - alpha,
                _ => unreachable!(),
            });
            let comm = &a * &b - &b * &a;
            let f1 = (MatrixPolynomial::constant(&a * 2.0 + &b), comm + &k * 2.0 - &id * (s + 2.0));
            let f0 = &a * &b + &k * s;
            (Family::Jacobi.rho(), f1, f0)
        }
    };
    let f1 = f1_lin.0.add(&MatrixPolynomial::monomial(f1_lin.1, 1))?;
    let operator = PolyDiffOp::from_coeffs_unchecked(
        n,
        vec![MatrixPolynomial::constant(f0), f1, MatrixPolynomial::scalar(n, &rho)],
    );

    let tilde = build_tilde_operator(spec)?;
    let correction = correction_matrix(spec);
    let unipotent = spec.unipotent_factor();
    let parts = BochnerParts { nilpotent: a, unipotent, tilde, correction, operator };
    let conj = parts.shifted_tilde().conjugate_by_unipotent(&parts.unipotent)?;
    let residual = conj.max_abs_diff(&parts.operator);
    if residual > 1e-12 * (1.0 + parts.operator.max_abs()) {
        return Err(MbpError::ConstructionMismatch { residual });
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::MatrixWeightSpec;

    fn poly(c: &[f64]) -> Poly {
        Poly::new(c.to_vec())
    }

    #[test]
    fn classical_operators() {
        let h = build_classical_operator(&ScalarWeightSpec::Hermite { b: 0.5 }).unwrap();
        assert_eq!(h.coeff(2).entry(0, 0), poly(&[1.0]));
        assert_eq!(h.coeff(1).entry(0, 0), poly(&[1.0, -2.0]));
        let l = build_classical_operator(&ScalarWeightSpec::Laguerre { alpha: 0.5 }).unwrap();
        assert_eq!(l.coeff(2).entry(0, 0), poly(&[0.0, 1.0]));
        assert_eq!(l.coeff(1).entry(0, 0), poly(&[1.5, -1.0]));
        let j = build_classical_operator(&ScalarWeightSpec::Jacobi { alpha: 0.5, beta: 1.5 }).unwrap();
        assert_eq!(j.coeff(2).entry(0, 0), poly(&[1.0, 0.0, -1.0]));
        assert_eq!(j.coeff(1).entry(0, 0), poly(&[1.0, -4.0]));
        assert!(j.coeff(0).is_zero());
    }

    #[test]
    fn tilde_reduces_to_classical_for_one_row() {
        let spec = ValidatedSpec::new_unchecked(MatrixWeightSpec::laguerre(&[0.75], &[])).unwrap();
        assert_eq!(
            build_tilde_operator(&spec).unwrap(),
            build_classical_operator(&ScalarWeightSpec::Laguerre { alpha: 0.75 }).unwrap()
        );
    }

    #[test]
    fn hermite_tilde_diagonal() {
        let spec = MatrixWeightSpec::hermite(&[1.0, -2.0, 0.5], &[1.0, 1.0]).validate().unwrap();
        let t = build_tilde_operator(&spec).unwrap();
        assert_eq!(t.coeff(1).entry(0, 0), poly(&[2.0, -2.0]));
        assert_eq!(t.coeff(1).entry(1, 1), poly(&[-4.0, -2.0]));
        assert_eq!(t.coeff(1).entry(2, 2), poly(&[1.0, -2.0]));
        assert!(t.is_diagonal());
    }

    #[test]
    fn jacobi_sum_required() {
        let spec = ValidatedSpec::new_unchecked(MatrixWeightSpec::jacobi(&[(0.5, 0.5), (0.25, 0.5)], &[1.0])).unwrap();
        assert_eq!(build_bochner_operator(&spec), Err(MbpError::JacobiSumViolation { row: 2 }));
    }
}
