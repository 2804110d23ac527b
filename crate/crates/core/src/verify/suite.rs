//! The end-to-end verification suite: thirteen checks run against one weight, each
//! producing a [`CheckRecord`].

use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::commutant::{commutant_dimension, COMMUTANT_THRESHOLD};
use super::quadrature::{quadrature_oracle_moment, ORACLE_MAX_ORDER};
use crate::diffops::{bochner_parts, formal_adjoint_diagonal, leading_coefficient_analysis, BochnerParts, PolyDiffOp, RatDiffOp};
use crate::error::{MbpError, Result, SpecViolation};
use crate::orthopoly::{check_eigenfunction_with, check_symmetry_with, monic_sequence_with, recurrence_residual, MonicSequence, Precision};
use crate::par::{self, Execution};
use crate::polyops::{unipotent_inverse, MatrixPolynomial};
use crate::weights::{evaluate_weight, matrix_moments, Family, MatrixWeightSpec, MomentTable, ScalarWeightSpec, ValidatedSpec};
use crate::Matrix;

pub const DEFAULT_SEED: u64 = 0x5EED;

/// Check names in report order; ids are 1-based positions.
pub const CHECK_NAMES: [&str; 13] = [
    "moments_vs_quadrature",
    "weight_positivity",
    "monic_dual_path",
    "three_term_recurrence",
    "eigenfunction_powers",
    "w_symmetry",
    "diagonal_conjugation",
    "tilde_self_adjoint",
    "leading_coefficient",
    "irreducibility_commutant",
    "eigenvalue_homomorphism",
    "darboux_obstruction",
    "counterexample_regression",
];

const ORACLE_TOL: f64 = 1e-6;
const RECURRENCE_TOL: f64 = 1e-9;
const STRUCTURE_TOL: f64 = 1e-12;
const LEADING_TOL: f64 = 1e-9;
const POSITIVITY_SAMPLES: usize = 20;
const OBSTRUCTION_SAMPLES: usize = 10;
const HOMOMORPHISM_ORDERS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SuiteKind {
    #[default]
    All,
    /// Everything except the quadrature oracle.
    Fast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub suite: SuiteKind,
    pub seed: u64,
    /// Bound for the dual-path, eigenfunction, symmetry and counterexample residuals.
    pub tolerance: f64,
    pub n_max: usize,
    pub degree_cap: usize,
    /// Highest power of `D` exercised.
    pub max_power: usize,
    /// `Lambda_0..=Lambda_k` (and `P_0..=P_k`) enter the commutant.
    pub commutant_orders: usize,
    pub counterexample_a: f64,
    pub precision: Precision,
    pub execution: Execution,
    pub record_timings: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            suite: SuiteKind::All,
            seed: DEFAULT_SEED,
            tolerance: 1e-8,
            n_max: 8,
            degree_cap: 6,
            max_power: 3,
            commutant_orders: 5,
            counterexample_a: 1.0,
            precision: Precision::default(),
            execution: Execution::default(),
            record_timings: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub id: usize,
    pub name: &'static str,
    pub status: CheckStatus,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub runtime_ms: f64,
    pub detail: String,
    /// The check failed with a numerical error (singular Gram matrix, quadrature, overflow).
    pub numerical_error: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub spec: MatrixWeightSpec,
    pub options: SuiteOptions,
    /// Every violated validity condition; empty for a valid spec.
    pub violations: Vec<SpecViolation>,
    /// Error raised while building the operator, if any.
    pub construction_error: Option<String>,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn count(&self, status: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// Largest residual over checks that ran.
    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.status != CheckStatus::Skipped)
            .filter_map(|c| c.residual)
            .fold(0.0, par::nan_max)
    }

    pub fn has_numerical_failure(&self) -> bool {
        self.checks.iter().any(|c| c.numerical_error)
    }

    /// Copy with all runtimes zeroed, for run-to-run comparison.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.runtime_ms = 0.0;
        }
        r
    }
}

struct Outcome {
    passed: bool,
    residual: Option<f64>,
    tolerance: Option<f64>,
    detail: String,
}

impl Outcome {
    fn bound(residual: f64, tolerance: f64, detail: String) -> Self {
        Outcome { passed: residual < tolerance, residual: Some(residual), tolerance: Some(tolerance), detail }
    }
}

fn record(id: usize, opts: &SuiteOptions, run: impl FnOnce() -> Result<Outcome>) -> CheckRecord {
    let start = Instant::now();
    let result = run();
    let runtime_ms = if opts.record_timings { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    let name = CHECK_NAMES[id - 1];
    match result {
        Ok(o) => CheckRecord {
            id,
            name,
            status: if o.passed { CheckStatus::Pass } else { CheckStatus::Fail },
            residual: o.residual,
            tolerance: o.tolerance,
            runtime_ms,
            detail: o.detail,
            numerical_error: false,
        },
        Err(e) => CheckRecord {
            id,
            name,
            status: CheckStatus::Fail,
            residual: None,
            tolerance: None,
            runtime_ms,
            detail: e.to_string(),
            numerical_error: e.is_numerical(),
        },
    }
}

fn skipped(id: usize, detail: &str) -> CheckRecord {
    CheckRecord {
        id,
        name: CHECK_NAMES[id - 1],
        status: CheckStatus::Skipped,
        residual: None,
        tolerance: None,
        runtime_ms: 0.0,
        detail: detail.to_string(),
        numerical_error: false,
    }
}

/// Shared inputs computed once before the checks fan out.
struct Prepared {
    spec: ValidatedSpec,
    moments: Result<MomentTable>,
    seq: Result<MonicSequence>,
    /// `None` when operator checks are not run.
    parts: Option<Result<BochnerParts>>,
    powers: Result<Vec<PolyDiffOp>>,
}

fn moment_order(opts: &SuiteOptions) -> usize {
    (2 * opts.n_max + 1).max(2 * opts.degree_cap + 2).max(ORACLE_MAX_ORDER)
}

fn prepare(spec: ValidatedSpec, opts: &SuiteOptions, with_operator: bool) -> Prepared {
    let moments = matrix_moments(&spec, moment_order(opts));
    let seq = moments.clone().and_then(|m| monic_sequence_with(&m, opts.n_max, opts.precision));
    let parts = with_operator.then(|| bochner_parts(&spec));
    let powers = match &parts {
        Some(Ok(p)) => (1..=opts.max_power).map(|m| p.operator.power(m)).collect(),
        Some(Err(e)) => Err(e.clone()),
        None => Err(MbpError::ZeroOperator),
    };
    Prepared { spec, moments, seq, parts, powers }
}

impl Prepared {
    fn parts(&self) -> Result<&BochnerParts> {
        match &self.parts {
            Some(Ok(p)) => Ok(p),
            Some(Err(e)) => Err(e.clone()),
            None => Err(MbpError::ZeroOperator),
        }
    }
    fn moments(&self) -> Result<&MomentTable> {
        self.moments.as_ref().map_err(Clone::clone)
    }
    fn seq(&self) -> Result<&MonicSequence> {
        self.seq.as_ref().map_err(Clone::clone)
    }
    fn powers(&self) -> Result<&[PolyDiffOp]> {
        self.powers.as_deref().map_err(Clone::clone)
    }
}

/// Runs every check on `spec`. Never panics on bad input: validation problems and
/// sub-check errors become records.
///
/// A spec failing only the Jacobi sum condition still has a well-defined weight, so the
/// weight checks (1-4) and the fixed counterexample (13) run while the operator checks
/// are skipped. Any other violation skips everything.
pub fn run_suite(spec: &MatrixWeightSpec, opts: &SuiteOptions) -> VerificationReport {
    let violations = spec.violations();
    let sum_only = !violations.is_empty() && violations.iter().all(|v| v.name() == "JacobiSumViolation");
    let mut construction_error = None;

    let checks = if !violations.is_empty() && !sum_only {
        let msg = format!("spec invalid: {}", violations.iter().map(|v| v.name()).collect::<Vec<_>>().join(", "));
        (1..=13).map(|id| skipped(id, &msg)).collect()
    } else {
        match ValidatedSpec::new_unchecked(spec.clone()) {
            Err(e) => {
                let msg = format!("spec invalid: {e}");
                (1..=13).map(|id| skipped(id, &msg)).collect()
            }
            Ok(v) => {
                let prep = prepare(v, opts, !sum_only);
                if sum_only {
                    construction_error = bochner_parts(&prep.spec).err().map(|e| e.to_string());
                }
                run_checks(&prep, opts, construction_error.as_deref())
            }
        }
    };
    let passed = violations.is_empty() && checks.iter().all(|c| c.status != CheckStatus::Fail);
    VerificationReport { spec: spec.clone(), options: opts.clone(), violations, construction_error, checks, passed }
}

fn run_checks(prep: &Prepared, opts: &SuiteOptions, construction: Option<&str>) -> Vec<CheckRecord> {
    let exec = opts.execution;
    let operator_skip = construction.map(|e| format!("operator construction failed: {e}"));
    par::map_range(exec, 13, |i| {
        let id = i + 1;
        if let Some(msg) = &operator_skip {
            if (5..=12).contains(&id) {
                return skipped(id, msg);
            }
        }
        if id == 1 && opts.suite == SuiteKind::Fast {
            return skipped(id, "not part of the fast suite");
        }
        record(id, opts, || match id {
            1 => check_moments(prep, exec),
            2 => check_positivity(prep, opts),
            3 => check_dual_path(prep, opts),
            4 => check_recurrence(prep),
            5 => check_eigenfunctions(prep, opts),
            6 => check_w_symmetry(prep, opts),
            7 => check_conjugation(prep),
            8 => check_adjoint(prep),
            9 => check_leading(prep),
            10 => check_commutant(prep, opts),
            11 => check_homomorphism(prep, opts),
            12 => check_obstruction(prep),
            _ => check_counterexample(opts),
        })
    })
}

fn check_moments(prep: &Prepared, exec: Execution) -> Result<Outcome> {
    let m = prep.moments()?;
    let errs = par::map_range(exec, ORACLE_MAX_ORDER + 1, |k| -> Result<f64> {
        let q = quadrature_oracle_moment(&prep.spec, k)?;
        let mk = m.get(k)?;
        // relative error with an absolute floor of 1e-9 at the 1e-6 level
        Ok(mk.zip_map(&q, |a, b| (a - b).abs() / b.abs().max(1e-3)).max())
    });
    let mut worst = 0.0f64;
    for e in errs {
        worst = par::nan_max(worst, e?);
    }
    Ok(Outcome::bound(worst, ORACLE_TOL, format!("k = 0..={ORACLE_MAX_ORDER}, entrywise relative error")))
}

fn sample_point(spec: &ValidatedSpec, rng: &mut ChaCha8Rng) -> f64 {
    match spec.family() {
        Family::Hermite => {
            let bs = spec.rows().iter().map(|w| match w {
                ScalarWeightSpec::Hermite { b } => *b,
                _ => 0.0,
            });
            let (lo, hi) = bs.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), b| (l.min(b), h.max(b)));
            rng.random_range(lo - 3.0..hi + 3.0)
        }
        Family::Laguerre => rng.random_range(1e-6..20.0),
        Family::Jacobi => rng.random_range(-0.999_999..0.999_999),
    }
}

fn check_positivity(prep: &Prepared, opts: &SuiteOptions) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst_ratio = f64::INFINITY;
    let mut failures = 0;
    for _ in 0..POSITIVITY_SAMPLES {
        let x = sample_point(&prep.spec, &mut rng);
        let w = evaluate_weight(&prep.spec, x)?;
        if w.clone().cholesky().is_none() {
            failures += 1;
            continue;
        }
        let eig = w.symmetric_eigenvalues();
        worst_ratio = worst_ratio.min(eig.min() / eig.max());
    }
    Ok(Outcome {
        passed: failures == 0,
        residual: None,
        tolerance: None,
        detail: format!(
            "{}/{POSITIVITY_SAMPLES} samples factorized, smallest eigenvalue ratio {worst_ratio:.3e}",
            POSITIVITY_SAMPLES - failures
        ),
    })
}

fn check_dual_path(prep: &Prepared, opts: &SuiteOptions) -> Result<Outcome> {
    let seq = prep.seq()?;
    let r = seq.path_discrepancy.max(seq.orthogonality);
    Ok(Outcome::bound(
        r,
        opts.tolerance,
        format!(
            "n <= {}, path discrepancy {:.3e}, orthogonality {:.3e}, {:?}",
            seq.n_max, seq.path_discrepancy, seq.orthogonality, seq.precision
        ),
    ))
}

fn check_recurrence(prep: &Prepared) -> Result<Outcome> {
    let (ttrr, norms) = recurrence_residual(prep.seq()?)?;
    Ok(Outcome::bound(
        ttrr.max(norms),
        RECURRENCE_TOL,
        format!("recurrence {ttrr:.3e}, C_n H_(n-1) = H_n {norms:.3e}"),
    ))
}

fn check_eigenfunctions(prep: &Prepared, opts: &SuiteOptions) -> Result<Outcome> {
    let seq = prep.seq()?;
    let mut parts = Vec::new();
    let mut worst = 0.0f64;
    for (m, d) in prep.powers()?.iter().enumerate() {
        let r = check_eigenfunction_with(seq, d, opts.execution)?.max_residual;
        worst = par::nan_max(worst, r);
        parts.push(format!("D^{}: {r:.3e}", m + 1));
    }
    Ok(Outcome::bound(worst, opts.tolerance, format!("n <= {}, {}", seq.n_max, parts.join(", "))))
}

fn check_w_symmetry(prep: &Prepared, opts: &SuiteOptions) -> Result<Outcome> {
    let r = check_symmetry_with(&prep.parts()?.operator, prep.moments()?, opts.degree_cap, opts.execution)?;
    Ok(Outcome::bound(r, opts.tolerance, format!("degree cap {}", opts.degree_cap)))
}

fn commutator_times_x(a: &Matrix, f: &MatrixPolynomial) -> MatrixPolynomial {
    f.left_mul(a).sub(&f.right_mul(a)).expect("same size").shift(1)
}

fn check_conjugation(prep: &Prepared) -> Result<Outcome> {
    let parts = prep.parts()?;
    let d = &parts.operator;
    let back = d.conjugate_by_unipotent(&unipotent_inverse(&parts.unipotent)?)?;
    let scale = 1.0 + d.max_abs();
    let off = back.off_diagonal_max() / scale;
    if let Some((order, degree)) = back.degree_violation(STRUCTURE_TOL * scale) {
        return Err(MbpError::DegreeViolation { order, degree });
    }
    let shifted = back.max_abs_diff(&parts.shifted_tilde()) / scale;
    let a = &parts.nilpotent;
    let mut coeff = 0.0f64;
    for j in 0..=d.order().unwrap_or(0) {
        let f = back.coeff(j);
        let mut expected = f.add(&commutator_times_x(a, &f))?;
        let next = back.coeff(j + 1);
        expected = expected.add(&next.left_mul(a).scale((j + 1) as f64))?;
        coeff = coeff.max(d.coeff(j).max_abs_diff(&expected) / scale);
    }
    Ok(Outcome::bound(
        off.max(shifted).max(coeff),
        STRUCTURE_TOL,
        format!("off-diagonal {off:.3e}, vs D~ + K~ {shifted:.3e}, coefficient relation {coeff:.3e}"),
    ))
}

fn check_adjoint(prep: &Prepared) -> Result<Outcome> {
    let s = RatDiffOp::from(&prep.parts()?.shifted_tilde());
    let rows = prep.spec.rows();
    let adj = formal_adjoint_diagonal(&s, rows)?;
    let twice = formal_adjoint_diagonal(&adj, rows)?;
    let once = adj.relative_distance(&s);
    let back = twice.relative_distance(&s);
    Ok(Outcome::bound(
        once.max(back),
        STRUCTURE_TOL,
        format!("adjoint {once:.3e}, double adjoint {back:.3e}"),
    ))
}

fn check_leading(prep: &Prepared) -> Result<Outcome> {
    let family = prep.spec.family();
    let mut worst = 0.0f64;
    let mut shape_ok = true;
    for (i, d) in prep.powers()?.iter().enumerate() {
        let m = i + 1;
        let la = leading_coefficient_analysis(d, family)?;
        shape_ok &= la.m == m && la.is_rho_power;
        let target = MatrixPolynomial::scalar(d.size(), &family.rho().pow(m));
        worst = par::nan_max(worst, d.coeff(2 * m).max_abs_diff(&target));
    }
    let mut o = Outcome::bound(worst, LEADING_TOL, format!("top coefficient of D^m minus rho^m I, m <= {}", prep.powers()?.len()));
    o.passed &= shape_ok;
    Ok(o)
}

fn check_commutant(prep: &Prepared, opts: &SuiteOptions) -> Result<Outcome> {
    let k = opts.commutant_orders.min(opts.n_max);
    let lambdas = prep.parts()?.operator.eigenvalue_sequence(k)?;
    let lambda_only = commutant_dimension(lambdas.values());
    let mut mats: Vec<Matrix> = lambdas.values().to_vec();
    for p in &prep.seq()?.polys[..=k] {
        mats.extend(p.coeffs().iter().cloned());
    }
    let dim = commutant_dimension(&mats);
    Ok(Outcome {
        passed: dim == 1,
        residual: None,
        tolerance: Some(COMMUTANT_THRESHOLD),
        detail: format!(
            "constants commuting with Lambda_n and the coefficients of P_n, n <= {k}: dimension {dim}; \
             Lambda_n alone: dimension {lambda_only}"
        ),
    })
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, degree: usize) -> MatrixPolynomial {
    let coeffs = (0..=degree)
        .map(|_| DMatrix::from_fn(n, n, |_, _| rng.random_range(-3i32..=3) as f64))
        .collect();
    MatrixPolynomial::new(n, coeffs).expect("square coefficients")
}

fn check_homomorphism(prep: &Prepared, opts: &SuiteOptions) -> Result<Outcome> {
    let powers = prep.powers()?;
    let d = &powers[0];
    let base = d.eigenvalue_sequence(HOMOMORPHISM_ORDERS)?;
    let mut hom = 0.0f64;
    let mut orders = Vec::new();
    for (i, dp) in powers.iter().enumerate() {
        let m = i + 1;
        orders.push(dp.order().unwrap_or(0));
        let lam = dp.eigenvalue_sequence(HOMOMORPHISM_ORDERS)?;
        for n in 0..=HOMOMORPHISM_ORDERS {
            let b = base.get(n).expect("n <= n_max");
            let mut expected = DMatrix::identity(b.nrows(), b.nrows());
            for _ in 0..m {
                expected *= b;
            }
            let got = lam.get(n).expect("n <= n_max");
            hom = hom.max((got - &expected).amax() / (1.0 + expected.amax()));
        }
    }
    let even = orders.iter().enumerate().all(|(i, o)| *o == 2 * (i + 1));

    // coherence of the right action with composition on seeded random polynomials
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(1));
    let mut coherence = 0.0f64;
    for _ in 0..5 {
        let p = random_poly(&mut rng, d.size(), 4);
        let mut stepwise = p.clone();
        for dp in powers {
            stepwise = d.apply_right(&stepwise)?;
            let direct = dp.apply_right(&p)?;
            let scale = 1.0 + direct.max_abs();
            coherence = coherence.max(stepwise.max_abs_diff(&direct) / scale);
        }
    }
    let residual = hom.max(coherence);
    let mut o = Outcome::bound(
        residual,
        LEADING_TOL,
        format!("Lambda_n(D^m) vs Lambda_n(D)^m {hom:.3e}, (P.D).D vs P.D^2 {coherence:.3e}, orders {orders:?}"),
    );
    o.passed &= even;
    Ok(o)
}

fn obstruction_points(spec: &ValidatedSpec) -> Vec<f64> {
    let t = |i: usize| (i as f64 + 0.5) / OBSTRUCTION_SAMPLES as f64;
    match spec.family() {
        Family::Hermite => (0..OBSTRUCTION_SAMPLES).map(|i| -5.0 + 10.0 * t(i)).collect(),
        Family::Laguerre => (0..OBSTRUCTION_SAMPLES).map(|i| 20.0 * t(i)).collect(),
        Family::Jacobi => (0..OBSTRUCTION_SAMPLES).map(|i| -1.0 + 2.0 * t(i)).collect(),
    }
}

fn check_obstruction(prep: &Prepared) -> Result<Outcome> {
    let family = prep.spec.family();
    let points = obstruction_points(&prep.spec);
    let mut worst = 0.0f64;
    let mut singular = 0usize;
    for (i, d) in prep.powers()?.iter().enumerate() {
        let m = i + 1;
        let la = leading_coefficient_analysis(d, family)?;
        let top = d.coeff(2 * m);
        let rho = family.rho().pow(m);
        for &x in &points {
            let f = top.eval(x);
            let s = la.scale * rho.eval(x);
            let target = DMatrix::<f64>::identity(f.nrows(), f.nrows()) * s;
            worst = par::nan_max(worst, (&f - target).amax() / s.abs().max(f64::MIN_POSITIVE));
            let sv = f.singular_values();
            // NaN counts as singular
            if sv.min().is_nan() || sv.min() <= 1e-12 * sv.max() {
                singular += 1;
            }
        }
    }
    let mut o = Outcome::bound(
        worst,
        LEADING_TOL,
        format!(
            "leading coefficient vs c rho^m I at {} interior points per power, {singular} singular",
            points.len()
        ),
    );
    o.passed &= singular == 0;
    Ok(o)
}

/// The fixed 2x2 Hermite weight `T e^{-x^2} T^T`, `T = I + a E_12 x`, and the
/// non-diagonalizable eigenoperator it admits.
pub fn counterexample_operator(a: f64) -> Result<(ValidatedSpec, PolyDiffOp)> {
    if a == 0.0 || !a.is_finite() {
        return Err(MbpError::ZeroNilpotentEntry { index: 1 });
    }
    let spec = ValidatedSpec::new_unchecked(MatrixWeightSpec::hermite(&[0.0, 0.0], &[a]))?;
    let m = |v: [f64; 4]| DMatrix::from_row_slice(2, 2, &v);
    let f2 = MatrixPolynomial::new(2, vec![m([-1.0, 0.0, 0.0, 0.0]), m([0.0, a, 0.0, 0.0])])?;
    let f1 = MatrixPolynomial::new(2, vec![m([0.0, 2.0 / a, -2.0 / a, 0.0]), m([0.0, 0.0, 0.0, 2.0])])?;
    let f0 = MatrixPolynomial::constant(m([0.0, 0.0, 0.0, 4.0 / (a * a)]));
    Ok((spec, PolyDiffOp::new(2, vec![f0, f1, f2])?))
}

fn check_counterexample(opts: &SuiteOptions) -> Result<Outcome> {
    let (spec, d) = counterexample_operator(opts.counterexample_a)?;
    let moments = matrix_moments(&spec, 2 * opts.n_max + 1)?;
    let seq = monic_sequence_with(&moments, opts.n_max, opts.precision)?;
    let eig = check_eigenfunction_with(&seq, &d, opts.execution)?.max_residual;
    let back = d.conjugate_by_unipotent(&unipotent_inverse(&spec.unipotent_factor())?)?;
    let off = back.off_diagonal_max() / (1.0 + d.max_abs());
    let mut o = Outcome::bound(
        eig,
        opts.tolerance,
        format!("a = {}, eigenfunction residual {eig:.3e}, off-diagonal part of T^-1 D T {off:.3e}", opts.counterexample_a),
    );
    o.passed &= off > 1e-6;
    Ok(o)
}
