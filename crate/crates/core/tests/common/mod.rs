#![allow(dead_code)]

use mbp_core::diffops::PolyDiffOp;
use mbp_core::polyops::{MatrixPolynomial, Poly, RationalFunction};
use mbp_core::Matrix;
use proptest::prelude::*;

pub fn small_matrix(n: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-3i32..=3, n * n).prop_map(move |v| Matrix::from_iterator(n, n, v.into_iter().map(f64::from)))
}

pub fn small_matpoly(n: usize, max_degree: usize) -> impl Strategy<Value = MatrixPolynomial> {
    proptest::collection::vec(small_matrix(n), 1..=max_degree + 1)
        .prop_map(move |c| MatrixPolynomial::new(n, c).unwrap())
}

pub fn small_poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec((-3i32..=3).prop_map(f64::from), 1..=max_degree + 1).prop_map(Poly::new)
}

/// Denominators with no real roots near the origin: `x^2 + c` with `c` in 1..=4, or constants.
pub fn small_rational() -> impl Strategy<Value = RationalFunction> {
    (small_poly(3), 0usize..=4).prop_map(|(num, c)| {
        let den = if c == 0 { Poly::constant(2.0) } else { Poly::new(vec![c as f64, 0.0, 1.0]) };
        RationalFunction::new(num, den)
    })
}

/// Operators with `deg F_j <= j` and small-integer coefficients.
pub fn small_op(n: usize, max_order: usize) -> impl Strategy<Value = PolyDiffOp> {
    (0..=max_order)
        .prop_flat_map(move |order| (0..=order).map(|j| small_matpoly(n, j)).collect::<Vec<_>>())
        .prop_map(move |c| PolyDiffOp::new(n, c).unwrap())
}

/// Unipotent `I + A x` with `A` strictly upper triangular of small integers, so `A^n = 0`.
pub fn small_unipotent(n: usize) -> impl Strategy<Value = MatrixPolynomial> {
    small_matrix(n).prop_map(move |m| {
        let a = Matrix::from_fn(n, n, |i, j| if j > i { m[(i, j)] } else { 0.0 });
        MatrixPolynomial::new(n, vec![Matrix::identity(n, n), a]).unwrap()
    })
}
