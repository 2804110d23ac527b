use approx::assert_relative_eq;
use mbp_core::diffops::{bochner_parts, build_bochner_operator, PolyDiffOp};
use mbp_core::fixtures;
use mbp_core::orthopoly::{
    check_eigenfunction, check_symmetry, inner_product, monic_sequence, monic_sequence_with, recurrence_residual,
    Precision, DEFAULT_N_MAX,
};
use mbp_core::polyops::{MatrixPolynomial, Poly};
use mbp_core::weights::{matrix_moments, MatrixWeightSpec, MomentTable};
use mbp_core::Matrix;

fn table(spec: &MatrixWeightSpec) -> MomentTable {
    matrix_moments(&spec.validate().unwrap(), 2 * DEFAULT_N_MAX + 4).unwrap()
}

#[test]
fn scalar_hermite_polynomials() {
    let spec = MatrixWeightSpec::hermite(&[0.0], &[]);
    let m = matrix_moments(&mbp_core::weights::ValidatedSpec::new_unchecked(spec).unwrap(), 20).unwrap();
    let seq = monic_sequence(&m, 8).unwrap();
    assert_eq!(seq.polys[1], MatrixPolynomial::scalar(1, &Poly::x()));
    let p2 = &seq.polys[2];
    assert_relative_eq!(p2.coeff(0)[(0, 0)], -0.5, max_relative = 1e-15);
    assert_eq!(p2.coeff(1)[(0, 0)], 0.0);
    for (n, b) in seq.b.iter().enumerate() {
        assert!(b[(0, 0)].abs() < 1e-15, "B_{n}");
    }
    for n in 1..8 {
        assert_relative_eq!(seq.c_at(n).unwrap()[(0, 0)], n as f64 / 2.0, max_relative = 1e-14);
    }
}

#[test]
fn first_polynomial_from_moments() {
    for (name, spec) in fixtures::valid() {
        let m = table(&spec);
        let seq = monic_sequence(&m, 2).unwrap();
        let m0 = m.get(0).unwrap();
        let m1 = m.get(1).unwrap();
        let expected = -(m1 * m0.clone().try_inverse().unwrap());
        let got = seq.polys[1].coeff(0);
        assert!((got - &expected).amax() < 1e-12 * (1.0 + expected.amax()), "{name}");
        assert_eq!(seq.polys[1].leading(), Matrix::identity(spec.size, spec.size));
        assert!(inner_product(&seq.polys[1], &MatrixPolynomial::identity(spec.size), &m).unwrap().amax() < 1e-10 * m0.amax());
        assert_eq!(inner_product(&MatrixPolynomial::identity(spec.size), &MatrixPolynomial::identity(spec.size), &m).unwrap(), *m0);
    }
}

#[test]
fn even_weight_has_vanishing_b0() {
    // (1-x)^a (1+x)^a rows with no coupling would be even; use a one-row Gegenbauer weight
    let spec = MatrixWeightSpec::jacobi(&[(0.5, 0.5)], &[]);
    let m = matrix_moments(&mbp_core::weights::ValidatedSpec::new_unchecked(spec).unwrap(), 20).unwrap();
    assert!(m.get(1).unwrap()[(0, 0)].abs() < 1e-15);
    let seq = monic_sequence(&m, 8).unwrap();
    for b in &seq.b {
        assert!(b[(0, 0)].abs() < 1e-14);
    }
}

#[test]
fn dual_paths_orthogonality_and_recurrence() {
    for (name, spec) in fixtures::valid() {
        let seq = monic_sequence(&table(&spec), DEFAULT_N_MAX).unwrap();
        assert_eq!(seq.precision, Precision::Extended);
        assert!(seq.path_discrepancy < 1e-8, "{name}: paths {:e}", seq.path_discrepancy);
        assert!(seq.orthogonality < 1e-8, "{name}: orthogonality {:e}", seq.orthogonality);
        let (ttrr, norm) = recurrence_residual(&seq).unwrap();
        assert!(ttrr < 1e-9, "{name}: ttrr {ttrr:e}");
        assert!(norm < 1e-9, "{name}: C_n H_(n-1) {norm:e}");
        for (n, h) in seq.norms.iter().enumerate() {
            assert!(h.clone().cholesky().is_some(), "{name}: H_{n}");
        }
        for p in &seq.polys {
            assert_eq!(p.leading(), Matrix::identity(spec.size, spec.size));
        }
    }
}

#[test]
fn binary64_path_still_runs() {
    let seq = monic_sequence_with(&table(&fixtures::hermite_2x2()), DEFAULT_N_MAX, Precision::Binary64).unwrap();
    assert_eq!(seq.precision, Precision::Binary64);
    assert!(seq.path_discrepancy < 1e-6);
}

#[test]
fn eigenfunctions_of_powers() {
    for (name, spec) in fixtures::valid() {
        let seq = monic_sequence(&table(&spec), DEFAULT_N_MAX).unwrap();
        let d = build_bochner_operator(&spec.validate().unwrap()).unwrap();
        for m in 1..=3 {
            let r = check_eigenfunction(&seq, &d.power(m).unwrap()).unwrap();
            assert!(r.max_residual < 1e-8, "{name} D^{m}: {:e}", r.max_residual);
        }
        let id = check_eigenfunction(&seq, &PolyDiffOp::identity(spec.size)).unwrap();
        assert_eq!(id.max_residual, 0.0);
    }
}

#[test]
fn constant_correction_is_needed() {
    for (name, spec) in fixtures::valid() {
        let v = spec.validate().unwrap();
        let seq = monic_sequence(&table(&spec), DEFAULT_N_MAX).unwrap();
        let parts = bochner_parts(&v).unwrap();
        let without = parts.tilde.conjugate_by_unipotent(&parts.unipotent).unwrap();
        // F_0 picks up a degree-one term, so the closed-form eigenvalues do not apply
        assert!(check_eigenfunction(&seq, &without).is_err(), "{name}");
        // best possible eigenvalue: the degree-n coefficient of P_n . D
        let mut worst = 0.0f64;
        for p in &seq.polys {
            let img = without.apply_right(p).unwrap();
            let n = p.degree().unwrap();
            let r = img.sub(&p.left_mul(&img.coeff(n))).unwrap();
            worst = worst.max(r.max_coeff_norm() / p.max_coeff_norm());
        }
        assert!(worst > 1e-2, "{name}: {worst:e}");
    }
}

#[test]
fn symmetry_of_bochner_operators() {
    for (name, spec) in fixtures::valid() {
        let m = table(&spec);
        let d = build_bochner_operator(&spec.validate().unwrap()).unwrap();
        let r = check_symmetry(&d, &m, 6).unwrap();
        assert!(r < 1e-8, "{name}: {r:e}");
    }
}

#[test]
fn symmetry_negative_controls() {
    let m = table(&fixtures::hermite_2x2());
    let d1 = PolyDiffOp::single(1, MatrixPolynomial::identity(2));
    assert!(check_symmetry(&d1, &m, 6).unwrap() > 1e-2);
    let c = PolyDiffOp::constant(Matrix::identity(2, 2) * 3.5);
    assert_eq!(check_symmetry(&c, &m, 6).unwrap(), 0.0);
}

#[test]
fn too_few_moments() {
    let m = matrix_moments(&fixtures::hermite_2x2().validate().unwrap(), 5).unwrap();
    assert!(monic_sequence(&m, 3).is_err());
    assert!(check_symmetry(&PolyDiffOp::identity(2), &m, 6).is_err());
}
