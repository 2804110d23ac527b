//! Adaptive Gauss-Kronrod (7/15) integration of matrix-valued integrands, used as an
//! oracle for the closed-form moments.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{MbpError, Result};
use crate::weights::{Family, ScalarWeightSpec, ValidatedSpec};
use crate::Matrix;

/// Largest moment order the oracle is meant for; beyond it the truncated tails are no
/// longer negligible for every fixture.
pub const ORACLE_MAX_ORDER: usize = 12;

const REL_TOL: f64 = 1e-12;
const MAX_SEGMENTS: usize = 20_000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

type Integrand<'a> = dyn Fn(f64) -> Result<Vec<f64>> + Sync + 'a;

struct Segment {
    a: f64,
    b: f64,
    est: Vec<f64>,
    err: Vec<f64>,
    key: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.key.total_cmp(&other.key) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.total_cmp(&other.key)
    }
}

fn gk15(f: &Integrand, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let dim = fc.len();
    let mut kron: Vec<f64> = fc.iter().map(|v| v * WGK[7]).collect();
    let mut gauss: Vec<f64> = fc.iter().map(|v| v * WG[3]).collect();
    for i in 0..7 {
        let lo = f(c - h * XGK[i])?;
        let hi = f(c + h * XGK[i])?;
        for d in 0..dim {
            let s = lo[d] + hi[d];
            kron[d] += WGK[i] * s;
            if i % 2 == 1 {
                gauss[d] += WG[i / 2] * s;
            }
        }
    }
    let est: Vec<f64> = kron.iter().map(|v| v * h).collect();
    let err = kron.iter().zip(&gauss).map(|(k, g)| ((k - g) * h).abs()).collect();
    Ok((est, err))
}

/// Integrates a vector-valued `f` over the union of `[breaks[i], breaks[i+1]]`, bisecting
/// the worst segment until every component meets `REL_TOL` relative to its own size
/// (with a floor tied to the largest component).
fn integrate(f: &Integrand, breaks: &[f64]) -> Result<Vec<f64>> {
    let mut heap = BinaryHeap::new();
    let mut dim = 0;
    for w in breaks.windows(2) {
        let (est, err) = gk15(f, w[0], w[1])?;
        dim = est.len();
        heap.push(Segment { a: w[0], b: w[1], est, err, key: 0.0 });
    }
    loop {
        let mut total = vec![0.0; dim];
        let mut total_err = vec![0.0; dim];
        for s in heap.iter() {
            for d in 0..dim {
                total[d] += s.est[d];
                total_err[d] += s.err[d];
            }
        }
        let floor = total.iter().fold(0.0f64, |m, v| m.max(v.abs())) * 1e-15;
        let tol: Vec<f64> = total.iter().map(|v| (v.abs() * REL_TOL).max(floor).max(f64::MIN_POSITIVE)).collect();
        if total_err.iter().zip(&tol).all(|(e, t)| e <= t) {
            return Ok(total);
        }
        if heap.len() >= MAX_SEGMENTS {
            return Err(MbpError::QuadratureNonConvergence(format!(
                "{} segments, worst component error {:.3e}",
                heap.len(),
                total_err.iter().zip(&tol).map(|(e, t)| e / t).fold(0.0, f64::max)
            )));
        }
        // rekey against the current tolerances and split the worst segment
        let segs: Vec<Segment> = heap
            .drain()
            .map(|mut s| {
                s.key = s.err.iter().zip(&tol).map(|(e, t)| e / t).fold(0.0, f64::max);
                s
            })
            .collect();
        heap = segs.into_iter().collect();
        let worst = heap.pop().expect("at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(MbpError::QuadratureNonConvergence(format!(
                "segment [{}, {}] cannot be split further",
                worst.a, worst.b
            )));
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (est, err) = gk15(f, a, b)?;
            heap.push(Segment { a, b, est, err, key: 0.0 });
        }
    }
}

fn pointwise(spec: &ValidatedSpec, x: f64, k: usize) -> Vec<f64> {
    let n = spec.size();
    let t = Matrix::identity(n, n) + spec.nilpotent() * x;
    let w = &t * spec.tilde_weight(x) * t.transpose() * x.powi(k as i32);
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(w[(i, j)]);
        }
    }
    out
}

fn scaled(v: Vec<f64>, s: f64) -> Vec<f64> {
    v.into_iter().map(|x| x * s).collect()
}

fn min_exponent(spec: &ValidatedSpec, pick: impl Fn(&ScalarWeightSpec) -> f64) -> f64 {
    spec.rows().iter().map(pick).fold(f64::INFINITY, f64::min)
}

/// `int x^k W(x) dx` by adaptive quadrature, independent of the closed-form moments.
///
/// Hermite weights are truncated to `[b_min - 12, b_max + 12]` and Laguerre weights to
/// `[0, max(200, 40 + 10 alpha_max)]`. Algebraic endpoint singularities are removed by
/// the substitution `x - c = s^p` with `p = 1 / (e_min + 1)`, `e_min` the smallest
/// endpoint exponent among the rows.
pub fn quadrature_oracle_moment(spec: &ValidatedSpec, k: usize) -> Result<Matrix> {
    if k > ORACLE_MAX_ORDER {
        return Err(MbpError::ParamOutOfRange(format!(
            "quadrature oracle supports k <= {ORACLE_MAX_ORDER}, requested {k}"
        )));
    }
    let n = spec.size();
    let flat = match spec.family() {
        Family::Hermite => {
            let bs: Vec<f64> = spec
                .rows()
                .iter()
                .map(|w| match w {
                    ScalarWeightSpec::Hermite { b } => *b,
                    _ => 0.0,
                })
                .collect();
            let lo = bs.iter().copied().fold(f64::INFINITY, f64::min) - 12.0;
            let hi = bs.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 12.0;
            let breaks: Vec<f64> = (0..=16).map(|i| lo + (hi - lo) * i as f64 / 16.0).collect();
            integrate(&|x| Ok(pointwise(spec, x, k)), &breaks)?
        }
        Family::Laguerre => {
            let alpha = |w: &ScalarWeightSpec| match w {
                ScalarWeightSpec::Laguerre { alpha } => *alpha,
                _ => 0.0,
            };
            let a_min = min_exponent(spec, alpha);
            let a_max = spec.rows().iter().map(alpha).fold(f64::NEG_INFINITY, f64::max);
            let end = (40.0 + 10.0 * a_max).max(200.0);
            let p = 1.0 / (a_min + 1.0);
            let near = integrate(
                &|s| Ok(scaled(pointwise(spec, s.powf(p), k), p * s.powf(p - 1.0))),
                &[0.0, 0.25, 0.5, 1.0],
            )?;
            let mut breaks = vec![1.0];
            while *breaks.last().expect("nonempty") * 2.0 < end {
                let next = breaks.last().expect("nonempty") * 2.0;
                breaks.push(next);
            }
            breaks.push(end);
            let far = integrate(&|x| Ok(pointwise(spec, x, k)), &breaks)?;
            near.iter().zip(&far).map(|(a, b)| a + b).collect()
        }
        Family::Jacobi => {
            let (a_min, b_min) = (
                min_exponent(spec, |w| match w {
                    ScalarWeightSpec::Jacobi { alpha, .. } => *alpha,
                    _ => 0.0,
                }),
                min_exponent(spec, |w| match w {
                    ScalarWeightSpec::Jacobi { beta, .. } => *beta,
                    _ => 0.0,
                }),
            );
            let p = 1.0 / (a_min + 1.0);
            let q = 1.0 / (b_min + 1.0);
            let breaks = [0.0, 0.25, 0.5, 0.75, 1.0];
            // (1 - x)^alpha at x = 1 - s^p
            let right = integrate(&|s| Ok(scaled(pointwise(spec, 1.0 - s.powf(p), k), p * s.powf(p - 1.0))), &breaks)?;
            // (1 + x)^beta at x = -1 + s^q
            let left = integrate(&|s| Ok(scaled(pointwise(spec, s.powf(q) - 1.0, k), q * s.powf(q - 1.0))), &breaks)?;
            right.iter().zip(&left).map(|(a, b)| a + b).collect()
        }
    };
    let m = Matrix::from_row_slice(n, n, &flat);
    Ok((&m + m.transpose()) * 0.5)
}
