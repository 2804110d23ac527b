use approx::assert_relative_eq;
use mbp_core::fixtures;
use mbp_core::polyops::{unipotent_inverse, MatrixPolynomial};
use mbp_core::verify::quadrature_oracle_moment;
use mbp_core::weights::{
    evaluate_weight, hermite_moment_binomial, matrix_moments, nilpotent_matrix, scalar_moment, Family, MatrixWeightSpec,
    ScalarWeightSpec,
};
use mbp_core::{Matrix, MbpError, SpecViolation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn nonzero() -> impl Strategy<Value = f64> {
    prop_oneof![-4.0..-0.1f64, 0.1..4.0f64]
}

proptest! {
    #[test]
    fn nilpotent_squares_to_zero(a in proptest::collection::vec(nonzero(), 1..6)) {
        let n = a.len() + 1;
        let m = nilpotent_matrix(&a, n).unwrap();
        prop_assert_eq!(&m * &m, Matrix::zeros(n, n));
        let t = MatrixPolynomial::unipotent_linear(&m);
        let s = MatrixPolynomial::new(n, vec![Matrix::identity(n, n), -&m]).unwrap();
        prop_assert_eq!(t.mul(&s).unwrap(), MatrixPolynomial::identity(n));
        prop_assert_eq!(unipotent_inverse(&t).unwrap(), s);
    }

    #[test]
    fn random_hermite_weights_are_positive(
        b in proptest::collection::vec(-1.0..1.0f64, 2..5),
        seed in any::<u64>(),
    ) {
        let a: Vec<f64> = (1..b.len()).map(|i| if i % 2 == 0 { -0.75 } else { 1.25 }).collect();
        let spec = MatrixWeightSpec::hermite(&b, &a);
        prop_assume!(spec.violations().is_empty());
        let v = spec.validate().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let x = rng.random_range(-3.0..3.0);
            let w = evaluate_weight(&v, x).unwrap();
            prop_assert_eq!(&w, &w.transpose());
            prop_assert!(w.cholesky().is_some(), "x = {}", x);
        }
    }
}

#[test]
fn nilpotent_layout() {
    let a = nilpotent_matrix(&[2.0], 2).unwrap();
    assert_eq!(a, Matrix::from_row_slice(2, 2, &[0.0, 2.0, 0.0, 0.0]));
    let a = nilpotent_matrix(&[2.0, 3.0], 3).unwrap();
    assert_eq!(a, Matrix::from_row_slice(3, 3, &[0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0, 0.0]));
    assert!(matches!(nilpotent_matrix(&[1.0], 3), Err(MbpError::LengthMismatch { .. })));
}

#[test]
fn fixture_weights_are_positive_definite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    for (name, spec) in fixtures::valid() {
        let v = spec.validate().unwrap();
        let (lo, hi) = match v.family() {
            Family::Hermite => (-5.0, 5.0),
            Family::Laguerre => (0.0, 20.0),
            Family::Jacobi => (-1.0, 1.0),
        };
        for _ in 0..20 {
            let x = rng.random_range(lo..hi);
            if x == lo {
                continue;
            }
            assert!(evaluate_weight(&v, x).unwrap().cholesky().is_some(), "{name} at {x}");
        }
    }
}

#[test]
fn weight_values_at_one() {
    let e = std::f64::consts::E;
    let h = evaluate_weight(&fixtures::hermite_2x2().validate().unwrap(), 1.0).unwrap();
    let expected = Matrix::from_row_slice(2, 2, &[e * e + 1.0, 1.0, 1.0, 1.0]) / e;
    assert_relative_eq!(h, expected, max_relative = 1e-15);
    let h0 = evaluate_weight(&fixtures::hermite_2x2().validate().unwrap(), 0.0).unwrap();
    assert_eq!(h0, Matrix::identity(2, 2));
    let a = 2.0;
    let l = evaluate_weight(&MatrixWeightSpec::laguerre(&[0.3, 1.7], &[a]).validate().unwrap(), 1.0).unwrap();
    let expected = Matrix::from_row_slice(2, 2, &[1.0 + a * a, a, a, 1.0]) / e;
    assert_relative_eq!(l, expected, max_relative = 1e-15);
    assert!(matches!(
        evaluate_weight(&fixtures::laguerre_2x2().validate().unwrap(), -1.0),
        Err(MbpError::OutOfSupport { .. })
    ));
}

#[test]
fn moments_agree_with_quadrature() {
    for (name, spec) in fixtures::valid() {
        let v = spec.validate().unwrap();
        let m = matrix_moments(&v, 12).unwrap();
        for k in 0..=12 {
            let q = quadrature_oracle_moment(&v, k).unwrap();
            let got = m.get(k).unwrap();
            for (x, y) in got.iter().zip(q.iter()) {
                let err = (x - y).abs();
                assert!(err <= 1e-6 * y.abs() || err <= 1e-9, "{name} k={k}: {x} vs {y}");
            }
            assert_eq!(q, q.transpose());
        }
    }
}

#[test]
fn moments_are_symmetric_with_positive_hankel() {
    for (name, spec) in fixtures::valid() {
        let m = matrix_moments(&spec.validate().unwrap(), 17).unwrap();
        for mk in m.entries() {
            assert_eq!(mk, &mk.transpose(), "{name}");
        }
        m.check_invariants(0.0).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn hermite_recurrence_matches_binomial() {
    for b in [-1.3, -0.5, 0.0, 0.25, 1.0, 2.0] {
        let w = ScalarWeightSpec::Hermite { b };
        for k in 0..=10 {
            let r = scalar_moment(&w, k).unwrap();
            let d = hermite_moment_binomial(b, k);
            let scale = d.abs().max(1e-300);
            assert!((r - d).abs() <= 1e-12 * scale || (r == 0.0 && d.abs() < 1e-12), "b={b} k={k}: {r} vs {d}");
        }
    }
}

#[test]
fn validation_reports_every_violation() {
    let bad = MatrixWeightSpec::hermite(&[1.0, 1.0, 2.0], &[0.0, 1.0]);
    let v = bad.violations();
    assert!(v.iter().any(|x| matches!(x, SpecViolation::RationalRatioViolation { .. })), "{v:?}");
    assert!(v.iter().any(|x| matches!(x, SpecViolation::ZeroNilpotentEntry { .. })), "{v:?}");
    for (name, spec, kind) in fixtures::corrupted() {
        let v = spec.violations();
        assert!(v.iter().any(|x| x.name() == kind), "{name}: {v:?}");
        assert!(spec.validate().is_err());
    }
    for (name, spec) in fixtures::valid() {
        assert!(spec.violations().is_empty(), "{name}");
    }
}
