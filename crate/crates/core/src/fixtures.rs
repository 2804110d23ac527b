//! Named parameter sets used by the test suites, benches and the CLI fixture files.

use crate::weights::MatrixWeightSpec;

/// `b = (1, 0)`, `a = 1`.
pub fn hermite_2x2() -> MatrixWeightSpec {
    MatrixWeightSpec::hermite(&[1.0, 0.0], &[1.0])
}

/// `alpha = 0.3`, `beta = 1.7`, `a = 1`.
pub fn laguerre_2x2() -> MatrixWeightSpec {
    MatrixWeightSpec::laguerre(&[0.3, 1.7], &[1.0])
}

/// `alpha_1 + beta_1 = alpha_2 + beta_2 + 2`, all parameters dyadic.
pub fn jacobi_2x2() -> MatrixWeightSpec {
    MatrixWeightSpec::jacobi(&[(0.5, 1.25), (0.25, -0.5)], &[1.0])
}

pub fn hermite_3x3() -> MatrixWeightSpec {
    MatrixWeightSpec::hermite(&[0.5, 0.0, -0.5], &[1.0, -0.75])
}

pub fn hermite_4x4() -> MatrixWeightSpec {
    MatrixWeightSpec::hermite(&[0.5, 0.0, -0.5, 0.25], &[1.0, 0.5, -1.0])
}

pub fn laguerre_3x3() -> MatrixWeightSpec {
    MatrixWeightSpec::laguerre(&[0.3, 1.7, 0.55], &[1.0, 0.5])
}

pub fn laguerre_4x4() -> MatrixWeightSpec {
    MatrixWeightSpec::laguerre(&[0.3, 1.7, 0.55, 1.1], &[1.0, 0.5, -0.5])
}

pub fn jacobi_3x3() -> MatrixWeightSpec {
    MatrixWeightSpec::jacobi(&[(0.5, 1.25), (0.25, -0.5), (1.0, 0.75)], &[1.0, 0.5])
}

/// Every valid fixture with a short name.
pub fn valid() -> Vec<(&'static str, MatrixWeightSpec)> {
    vec![
        ("hermite_2x2", hermite_2x2()),
        ("laguerre_2x2", laguerre_2x2()),
        ("jacobi_2x2", jacobi_2x2()),
        ("hermite_3x3", hermite_3x3()),
        ("hermite_4x4", hermite_4x4()),
        ("laguerre_3x3", laguerre_3x3()),
        ("laguerre_4x4", laguerre_4x4()),
        ("jacobi_3x3", jacobi_3x3()),
    ]
}

pub fn jacobi_broken_sum() -> MatrixWeightSpec {
    MatrixWeightSpec::jacobi(&[(0.5, 1.25), (0.25, 0.5)], &[1.0])
}

pub fn hermite_equal_shifts() -> MatrixWeightSpec {
    MatrixWeightSpec::hermite(&[1.0, 1.0], &[1.0])
}

pub fn laguerre_integer_gap() -> MatrixWeightSpec {
    MatrixWeightSpec::laguerre(&[0.5, 2.5], &[1.0])
}

pub fn hermite_zero_a() -> MatrixWeightSpec {
    MatrixWeightSpec::hermite(&[1.0, 0.0], &[0.0])
}

/// One fixture per failure mode, paired with the violation it must trigger.
pub fn corrupted() -> Vec<(&'static str, MatrixWeightSpec, &'static str)> {
    vec![
        ("jacobi_broken_sum", jacobi_broken_sum(), "JacobiSumViolation"),
        ("hermite_equal_shifts", hermite_equal_shifts(), "RationalRatioViolation"),
        ("laguerre_integer_gap", laguerre_integer_gap(), "RationalRatioViolation"),
        ("hermite_zero_a", hermite_zero_a(), "ZeroNilpotentEntry"),
    ]
}

/// `W = T e^{-x^2} T^T` with `T = I + a E_12 x`: both rows share the same scalar weight.
pub fn equal_hermite_rows(a: f64) -> MatrixWeightSpec {
    MatrixWeightSpec::hermite(&[0.0, 0.0], &[a])
}

/// Reducible `diag(w_1, w_2)` with `A = 0`.
pub fn reducible_hermite() -> MatrixWeightSpec {
    MatrixWeightSpec::hermite(&[1.0, 0.0], &[0.0])
}
