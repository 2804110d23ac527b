//! Closed-form second-order operators of the 2x2 examples, compared coefficient by coefficient.

use mbp_core::diffops::{build_bochner_operator, PolyDiffOp};
use mbp_core::fixtures;
use mbp_core::polyops::MatrixPolynomial;
use mbp_core::verify::commutant_dimension;
use mbp_core::weights::MatrixWeightSpec;
use mbp_core::Matrix;

/// 2x2 matrix polynomial from `[[p00, p01], [p10, p11]]`, each entry `[c0, c1, ...]`.
fn mp(entries: [[&[f64]; 2]; 2]) -> MatrixPolynomial {
    let deg = entries.iter().flatten().map(|e| e.len()).max().unwrap();
    let coeffs = (0..deg)
        .map(|k| Matrix::from_fn(2, 2, |i, j| entries[i][j].get(k).copied().unwrap_or(0.0)))
        .collect();
    MatrixPolynomial::new(2, coeffs).unwrap()
}

fn op(f0: MatrixPolynomial, f1: MatrixPolynomial, f2: MatrixPolynomial) -> PolyDiffOp {
    PolyDiffOp::new(2, vec![f0, f1, f2]).unwrap()
}

fn build(spec: MatrixWeightSpec) -> PolyDiffOp {
    build_bochner_operator(&spec.validate().unwrap()).unwrap()
}

#[test]
fn hermite_operator() {
    for (a, b) in [(1.0, 1.0), (2.0, -0.5), (-0.75, 3.0)] {
        let d = build(MatrixWeightSpec::hermite(&[b, 0.0], &[a]));
        let expected = op(
            mp([[&[], &[]], [&[], &[2.0]]]),
            mp([[&[2.0 * b, -2.0], &[2.0 * a, -2.0 * a * b]], [&[], &[0.0, -2.0]]]),
            MatrixPolynomial::identity(2),
        );
        assert_eq!(d, expected, "a={a} b={b}");
    }
}

#[test]
fn laguerre_operator() {
    for (a, al, be) in [(1.0, 0.3, 1.7), (2.0, 0.5, -0.25), (-1.5, 1.25, 0.5)] {
        let d = build(MatrixWeightSpec::laguerre(&[al, be], &[a]));
        let expected = op(
            mp([[&[], &[a * (be + 1.0)]], [&[], &[1.0]]]),
            mp([[&[al + 1.0, -1.0], &[0.0, a * (2.0 + be - al)]], [&[], &[be + 1.0, -1.0]]]),
            mp([[&[0.0, 1.0], &[]], [&[], &[0.0, 1.0]]]),
        );
        let diff = d.max_abs_diff(&expected);
        assert!(diff <= 4.0 * f64::EPSILON, "a={a}: {diff:e}");
    }
    let d = build(fixtures::laguerre_2x2());
    assert_eq!(d.coeff(1).coeff(1)[(0, 1)], 2.0 + 1.7 - 0.3);
}

#[test]
fn jacobi_operator() {
    let cases = [(1.0, (0.5, 1.25), (0.25, -0.5)), (-2.0, (1.5, 0.75), (0.75, -0.5))];
    for (a, (a1, b1), (a2, b2)) in cases {
        assert_eq!(a1 + b1, a2 + b2 + 2.0);
        let d = build(MatrixWeightSpec::jacobi(&[(a1, b1), (a2, b2)], &[a]));
        let expected = op(
            mp([[&[], &[a * (b2 - a2)]], [&[], &[a1 + b1]]]),
            mp([
                [&[b1 - a1, -(a1 + b1 + 2.0)], &[2.0 * a, a * (b2 - b1 + a1 - a2)]],
                [&[], &[b2 - a2, -(a2 + b2 + 2.0)]],
            ]),
            mp([[&[1.0, 0.0, -1.0], &[]], [&[], &[1.0, 0.0, -1.0]]]),
        );
        assert_eq!(d, expected, "a={a}");
    }
}

#[test]
fn hermite_eigenvalues() {
    for (a, b) in [(1.0, 1.0), (0.5, 2.0)] {
        let d = build(MatrixWeightSpec::hermite(&[b, 0.0], &[a]));
        let l = d.eigenvalue_sequence(10).unwrap();
        for n in 0..=10 {
            let nf = n as f64;
            let expected = Matrix::from_row_slice(2, 2, &[-2.0 * nf, -2.0 * a * b * nf, 0.0, -2.0 * nf + 2.0]);
            assert_eq!(l.get(n).unwrap(), &expected);
        }
        assert_eq!(l.get(0).unwrap(), &d.coeff(0).coeff(0));
        assert_eq!(commutant_dimension(&l.values()[..2]), 1);
    }
}

#[test]
fn leading_coefficient_of_square() {
    let d = build(fixtures::hermite_2x2());
    assert_eq!(d.compose(&d).unwrap().coeff(4), MatrixPolynomial::identity(2));
    let l = build(fixtures::laguerre_2x2());
    assert_eq!(l.compose(&l).unwrap().coeff(4), MatrixPolynomial::monomial(Matrix::identity(2, 2), 2));
}
