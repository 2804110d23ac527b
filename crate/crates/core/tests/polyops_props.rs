mod common;

use common::*;
use mbp_core::polyops::{log_derivative_pair, unipotent_inverse, MatrixPolynomial, Poly, RationalFunction};
use mbp_core::weights::ScalarWeightSpec;
use mbp_core::{Matrix, MbpError};
use proptest::prelude::*;

proptest! {
    #[test]
    fn multiplication_is_associative(p in small_matpoly(3, 3), q in small_matpoly(3, 3), r in small_matpoly(3, 3)) {
        let left = p.mul(&q).unwrap().mul(&r).unwrap();
        let right = p.mul(&q.mul(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_distributes(p in small_matpoly(2, 3), q in small_matpoly(2, 3), r in small_matpoly(2, 3)) {
        let left = p.mul(&q.add(&r).unwrap()).unwrap();
        let right = p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let left = p.add(&q).unwrap().mul(&r).unwrap();
        let right = p.mul(&r).unwrap().add(&q.mul(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn leibniz_rule(p in small_matpoly(3, 4), q in small_matpoly(3, 4)) {
        let lhs = p.mul(&q).unwrap().derivative();
        let rhs = p.derivative().mul(&q).unwrap().add(&p.mul(&q.derivative()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_of_product_is_bounded(p in small_matpoly(2, 4), q in small_matpoly(2, 4)) {
        let prod = p.mul(&q).unwrap();
        if let (Some(dp), Some(dq), Some(d)) = (p.degree(), q.degree(), prod.degree()) {
            prop_assert!(d <= dp + dq);
        }
    }

    #[test]
    fn unipotent_inverse_is_two_sided(t in small_unipotent(4)) {
        let s = unipotent_inverse(&t).unwrap();
        prop_assert_eq!(t.mul(&s).unwrap(), MatrixPolynomial::identity(4));
        prop_assert_eq!(s.mul(&t).unwrap(), MatrixPolynomial::identity(4));
    }

    #[test]
    fn rational_equality_is_reflexive_and_symmetric(a in small_rational(), b in small_rational()) {
        prop_assert_eq!(&a, &a);
        prop_assert_eq!(a == b, b == a);
    }

    #[test]
    fn rational_equality_is_transitive(a in small_rational(), k in 1i32..=3) {
        // the same function written with three different denominators
        let scale = Poly::new(vec![f64::from(k), 0.0, 1.0]);
        let b = RationalFunction::new(a.numerator() * &scale, a.denominator() * &scale);
        let c = RationalFunction::new(a.numerator().scale(2.0), a.denominator().scale(2.0));
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&b, &c);
        prop_assert_eq!(&a, &c);
    }

    #[test]
    fn rational_field_operations(a in small_rational(), b in small_rational()) {
        let sum = &a + &b;
        prop_assert_eq!(&(&sum - &b), &a);
        let prod = &a * &b;
        prop_assert!((prod.eval(0.7) - a.eval(0.7) * b.eval(0.7)).abs() < 1e-9 * (1.0 + prod.eval(0.7).abs()));
    }
}

#[test]
fn one_plus_ax_times_one_minus_ax() {
    let a = Matrix::from_row_slice(2, 2, &[0.0, 3.0, 0.0, 0.0]);
    let t = MatrixPolynomial::unipotent_linear(&a);
    let s = MatrixPolynomial::new(2, vec![Matrix::identity(2, 2), -&a]).unwrap();
    assert_eq!(t.mul(&s).unwrap(), MatrixPolynomial::identity(2));
    assert_eq!(unipotent_inverse(&t).unwrap(), s);
    assert_eq!(t.derivative(), MatrixPolynomial::constant(a));
}

#[test]
fn x_squared() {
    let x = MatrixPolynomial::monomial(Matrix::identity(2, 2), 1);
    assert_eq!(x.mul(&x).unwrap(), MatrixPolynomial::monomial(Matrix::identity(2, 2), 2));
    assert_eq!(x.mul(&x).unwrap().derivative(), x.scale(2.0));
    assert!(MatrixPolynomial::constant(Matrix::identity(2, 2)).derivative().is_zero());
}

#[test]
fn non_nilpotent_factor_is_rejected() {
    let mut e11 = Matrix::zeros(2, 2);
    e11[(0, 0)] = 1.0;
    let t = MatrixPolynomial::new(2, vec![Matrix::identity(2, 2), e11]).unwrap();
    assert_eq!(unipotent_inverse(&t), Err(MbpError::NotUnipotent));
    assert_eq!(unipotent_inverse(&MatrixPolynomial::identity(3)).unwrap(), MatrixPolynomial::identity(3));
}

#[test]
fn size_mismatch() {
    let p = MatrixPolynomial::identity(2);
    let q = MatrixPolynomial::identity(3);
    assert!(matches!(p.mul(&q), Err(MbpError::SizeMismatch { .. })));
}

#[test]
fn table_one_log_derivatives() {
    let cases = [
        (ScalarWeightSpec::Hermite { b: 0.75 }, vec![1.5, -2.0]),
        (ScalarWeightSpec::Laguerre { alpha: 0.3 }, vec![1.3, -1.0]),
        (ScalarWeightSpec::Jacobi { alpha: 0.5, beta: 1.25 }, vec![0.75, -3.75]),
    ];
    for (w, expected) in cases {
        let pair = log_derivative_pair(&w).unwrap();
        assert_eq!(pair.weighted, RationalFunction::from_poly(Poly::new(expected)));
    }
    assert!(log_derivative_pair(&ScalarWeightSpec::Laguerre { alpha: -1.5 }).is_err());
}
