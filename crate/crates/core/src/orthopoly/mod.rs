//! Monic matrix orthogonal polynomials from moments, their three-term recurrence, and
//! the eigenfunction and symmetry residual checks.

use nalgebra::DMatrix;

use crate::diffops::PolyDiffOp;
use crate::error::{MbpError, Result};
use crate::par::{self, Execution};
use crate::polyops::MatrixPolynomial;
use crate::real::{cholesky_solve, Dense, Real};
use crate::weights::MomentTable;
use crate::Matrix;

/// Absolute floor applied to every relative residual.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

pub const DEFAULT_N_MAX: usize = 8;

/// `<P, Q> = sum_{i,j} P_i M_{i+j} Q_j^T`.
pub fn inner_product(p: &MatrixPolynomial, q: &MatrixPolynomial, m: &MomentTable) -> Result<Matrix> {
    let n = m.size();
    if p.size() != n || q.size() != n {
        return Err(MbpError::SizeMismatch { left: n, right: p.size().max(q.size()) });
    }
    let (Some(dp), Some(dq)) = (p.degree(), q.degree()) else {
        return Ok(DMatrix::zeros(n, n));
    };
    if dp + dq > m.max_order() {
        return Err(MbpError::MomentTableTooSmall { needed: dp + dq, available: m.max_order() });
    }
    let mut acc = DMatrix::zeros(n, n);
    for (i, pi) in p.coeffs().iter().enumerate() {
        for (j, qj) in q.coeffs().iter().enumerate() {
            acc += pi * m.get(i + j)? * qj.transpose();
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    /// Binary64 throughout.
    Binary64,
    /// Moments, block Hankel solves, norms and recurrence matrices in double-double
    /// (about 106 bits); results are rounded to binary64 at the end.
    #[default]
    Extended,
}

/// Monic orthogonal polynomials `P_0..=P_{n_max}` with norms and recurrence matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicSequence {
    pub n_max: usize,
    /// `P_n`, from the block Hankel solve.
    pub polys: Vec<MatrixPolynomial>,
    /// `H_n = <P_n, P_n>`.
    pub norms: Vec<Matrix>,
    /// `B_0..B_{n_max-1}`.
    pub b: Vec<Matrix>,
    /// `C_1..C_{n_max-1}`; `c[0]` holds `C_1`.
    pub c: Vec<Matrix>,
    /// Same polynomials, built by the three-term recurrence.
    pub recurrence_polys: Vec<MatrixPolynomial>,
    /// Largest relative coefficient difference between the two constructions.
    pub path_discrepancy: f64,
    /// `max_{m < n} |<P_n, P_m>| / |H_n|`, max-norms, in the working precision.
    pub orthogonality: f64,
    pub precision: Precision,
}

impl MonicSequence {
    pub fn size(&self) -> usize {
        self.polys[0].size()
    }

    /// `C_n` for `1 <= n <= n_max - 1`.
    pub fn c_at(&self, n: usize) -> Option<&Matrix> {
        n.checked_sub(1).and_then(|i| self.c.get(i))
    }
}

fn relative_diff(p: &MatrixPolynomial, q: &MatrixPolynomial) -> f64 {
    p.max_abs_diff(q) / p.max_abs().max(q.max_abs()).max(RESIDUAL_FLOOR)
}

type DPoly<S> = Vec<Dense<S>>;

fn dpoly_round<S: Real>(p: &DPoly<S>, n: usize) -> Result<MatrixPolynomial> {
    MatrixPolynomial::new(n, p.iter().map(Dense::to_matrix).collect())
}

fn dpoly_sub<S: Real>(p: &DPoly<S>, q: &DPoly<S>) -> DPoly<S> {
    let n = p[0].rows;
    (0..p.len().max(q.len()))
        .map(|k| {
            let z = Dense::zeros(n, n);
            p.get(k).unwrap_or(&z).sub(q.get(k).unwrap_or(&z))
        })
        .collect()
}

fn dpoly_left<S: Real>(c: &Dense<S>, p: &DPoly<S>) -> DPoly<S> {
    p.iter().map(|pk| c.mul(pk)).collect()
}

fn dpoly_shift<S: Real>(p: &DPoly<S>) -> DPoly<S> {
    let n = p[0].rows;
    std::iter::once(Dense::zeros(n, n)).chain(p.iter().cloned()).collect()
}

/// `<P, Q>` against moments held as `Dense`.
fn dinner<S: Real>(p: &DPoly<S>, q: &DPoly<S>, m: &[Dense<S>]) -> Dense<S> {
    let n = p[0].rows;
    let mut acc = Dense::zeros(n, n);
    for (i, pi) in p.iter().enumerate() {
        for (j, qj) in q.iter().enumerate() {
            acc = acc.add(&pi.mul(&m[i + j]).mul(&qj.transpose()));
        }
    }
    acc
}

fn dinverse<S: Real>(h: &Dense<S>, degree: usize) -> Result<Dense<S>> {
    cholesky_solve(h, &Dense::identity(h.rows)).ok_or(MbpError::SingularGram { n: degree })
}

/// Gram-path construction of `P_n`: solves `sum_{j<n} Gamma_j M_{j+k} = -M_{n+k}`, `k < n`.
fn monic_from_gram<S: Real>(m: &[Dense<S>], size: usize, n: usize) -> Result<DPoly<S>> {
    let id = Dense::identity(size);
    if n == 0 {
        return Ok(vec![id]);
    }
    let mut h = Dense::zeros(n * size, n * size);
    for i in 0..n {
        for j in 0..n {
            h.set_block(i * size, j * size, &m[i + j]);
        }
    }
    let mut rhs = Dense::zeros(n * size, size);
    for k in 0..n {
        // row block k of -R^T is -M_{n+k}^T
        let neg = Dense::zeros(size, size).sub(&m[n + k].transpose());
        rhs.set_block(k * size, 0, &neg);
    }
    let gamma_t = cholesky_solve(&h, &rhs).ok_or(MbpError::SingularGram { n })?;
    let mut coeffs: DPoly<S> = (0..n).map(|j| gamma_t.block(j * size, 0, size, size).transpose()).collect();
    coeffs.push(id);
    Ok(coeffs)
}

/// Builds the monic sequence twice (block Hankel solves and three-term recurrence) and
/// records how far the two disagree.
pub fn monic_sequence(m: &MomentTable, n_max: usize) -> Result<MonicSequence> {
    monic_sequence_with(m, n_max, Precision::default())
}

pub fn monic_sequence_with(m: &MomentTable, n_max: usize, precision: Precision) -> Result<MonicSequence> {
    let needed = 2 * n_max + 1;
    if m.max_order() < needed {
        return Err(MbpError::MomentTableTooSmall { needed, available: m.max_order() });
    }
    match precision {
        Precision::Binary64 => construct::<f64>(m, n_max, precision),
        Precision::Extended => construct::<twofloat::TwoFloat>(m, n_max, precision),
    }
}

fn construct<S: Real>(table: &MomentTable, n_max: usize, precision: Precision) -> Result<MonicSequence> {
    let size = table.size();
    let m: Vec<Dense<S>> = table
        .entries()
        .iter()
        .zip(table.tails())
        .map(|(hi, lo)| Dense::from_parts(hi, Some(lo)))
        .collect();

    let dpolys: Vec<DPoly<S>> = (0..=n_max).map(|n| monic_from_gram(&m, size, n)).collect::<Result<_>>()?;
    let mut dnorms = Vec::with_capacity(n_max + 1);
    let mut hinvs = Vec::with_capacity(n_max + 1);
    for (n, p) in dpolys.iter().enumerate() {
        let h = dinner(p, p, &m).symmetrize();
        hinvs.push(dinverse(&h, n)?);
        dnorms.push(h);
    }
    let mut b = Vec::with_capacity(n_max);
    let mut c = Vec::with_capacity(n_max.saturating_sub(1));
    for n in 0..n_max {
        let xp = dpoly_shift(&dpolys[n]);
        b.push(dinner(&xp, &dpolys[n], &m).mul(&hinvs[n]).to_matrix());
        if n >= 1 {
            c.push(dnorms[n].mul(&hinvs[n - 1]).to_matrix());
        }
    }

    // three-term recurrence path, independent of the block solves above
    let mut rec: Vec<DPoly<S>> = vec![vec![Dense::identity(size)]];
    let mut rec_norms: Vec<Dense<S>> = Vec::new();
    for n in 0..n_max {
        let pn = &rec[n];
        let hn = dinner(pn, pn, &m).symmetrize();
        let hinv = dinverse(&hn, n)?;
        let xp = dpoly_shift(pn);
        let bn = dinner(&xp, pn, &m).mul(&hinv);
        let mut next = dpoly_sub(&xp, &dpoly_left(&bn, pn));
        if n >= 1 {
            let cn = hn.mul(&dinverse(&rec_norms[n - 1], n - 1)?);
            next = dpoly_sub(&next, &dpoly_left(&cn, &rec[n - 1]));
        }
        rec_norms.push(hn);
        rec.push(next);
    }

    let mut orthogonality = 0.0f64;
    for n in 1..=n_max {
        let hn = dnorms[n].to_matrix().amax().max(RESIDUAL_FLOOR);
        for q in &dpolys[..n] {
            orthogonality = par::nan_max(orthogonality, dinner(&dpolys[n], q, &m).to_matrix().amax() / hn);
        }
    }

    let polys: Vec<MatrixPolynomial> = dpolys.iter().map(|p| dpoly_round(p, size)).collect::<Result<_>>()?;
    let recurrence_polys: Vec<MatrixPolynomial> = rec.iter().map(|p| dpoly_round(p, size)).collect::<Result<_>>()?;
    let norms = dnorms.iter().map(Dense::to_matrix).collect();
    let path_discrepancy = polys
        .iter()
        .zip(&recurrence_polys)
        .map(|(p, q)| relative_diff(p, q))
        .fold(0.0, par::nan_max);

    Ok(MonicSequence { n_max, polys, norms, b, c, recurrence_polys, path_discrepancy, orthogonality, precision })
}

/// Residual of `x P_n = P_{n+1} + B_n P_n + C_n P_{n-1}` for every `n < n_max`, relative to
/// the largest coefficient of `x P_n`, and of `C_n H_{n-1} = H_n` relative to `H_n`.
pub fn recurrence_residual(seq: &MonicSequence) -> Result<(f64, f64)> {
    let size = seq.size();
    let x = MatrixPolynomial::monomial(DMatrix::identity(size, size), 1);
    let mut ttrr = 0.0f64;
    let mut norm_rel = 0.0f64;
    for n in 0..seq.n_max {
        let xp = x.mul(&seq.polys[n])?;
        let mut rhs = seq.polys[n + 1].add(&seq.polys[n].left_mul(&seq.b[n]))?;
        if n >= 1 {
            let cn = seq.c_at(n).expect("C_n stored for n >= 1");
            rhs = rhs.add(&seq.polys[n - 1].left_mul(cn))?;
            let lhs = cn * &seq.norms[n - 1];
            norm_rel = norm_rel.max((lhs - &seq.norms[n]).amax() / seq.norms[n].amax().max(RESIDUAL_FLOOR));
        }
        ttrr = ttrr.max(xp.max_abs_diff(&rhs) / xp.max_abs().max(RESIDUAL_FLOOR));
    }
    Ok((ttrr, norm_rel))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenfunctionReport {
    /// Relative residual per degree `n`.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// For each `P_n`, the largest coefficient norm of `P_n . D - Lambda_n(D) P_n` divided by
/// the largest coefficient norm of `P_n`.
pub fn check_eigenfunction(seq: &MonicSequence, d: &PolyDiffOp) -> Result<EigenfunctionReport> {
    check_eigenfunction_with(seq, d, Execution::default())
}

pub fn check_eigenfunction_with(seq: &MonicSequence, d: &PolyDiffOp, exec: Execution) -> Result<EigenfunctionReport> {
    let lambdas = d.eigenvalue_sequence(seq.n_max)?;
    let residuals = par::map_range(exec, seq.n_max + 1, |n| -> Result<f64> {
        let p = &seq.polys[n];
        let lhs = d.apply_right(p)?;
        let rhs = p.left_mul(lambdas.get(n).expect("n <= n_max"));
        let r = lhs.sub(&rhs)?;
        Ok(r.max_coeff_norm() / p.max_coeff_norm().max(RESIDUAL_FLOOR))
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, par::nan_max);
    Ok(EigenfunctionReport { residuals, max_residual })
}

/// `max_{i,j <= cap} |<x^i I . D, x^j I> - <x^i I, x^j I . D>| / (|M_{i+j}| + 1)`.
pub fn check_symmetry(d: &PolyDiffOp, m: &MomentTable, degree_cap: usize) -> Result<f64> {
    check_symmetry_with(d, m, degree_cap, Execution::default())
}

pub fn check_symmetry_with(d: &PolyDiffOp, m: &MomentTable, degree_cap: usize, exec: Execution) -> Result<f64> {
    let n = m.size();
    if d.size() != n {
        return Err(MbpError::SizeMismatch { left: n, right: d.size() });
    }
    let images: Vec<(MatrixPolynomial, MatrixPolynomial)> = (0..=degree_cap)
        .map(|i| {
            let mono = MatrixPolynomial::monomial(DMatrix::identity(n, n), i);
            Ok((d.apply_right(&mono)?, mono))
        })
        .collect::<Result<_>>()?;
    let needed = images
        .iter()
        .map(|(img, mono)| img.degree().unwrap_or(0).max(mono.degree().unwrap_or(0)))
        .max()
        .unwrap_or(0)
        * 2;
    if needed > m.max_order() {
        return Err(MbpError::MomentTableTooSmall { needed, available: m.max_order() });
    }
    let pairs: Vec<(usize, usize)> = (0..=degree_cap).flat_map(|i| (0..=degree_cap).map(move |j| (i, j))).collect();
    let vals = par::map(exec, pairs, |(i, j)| -> Result<f64> {
        let left = inner_product(&images[i].0, &images[j].1, m)?;
        let right = inner_product(&images[i].1, &images[j].0, m)?;
        Ok((left - right).norm() / (m.get(i + j)?.norm() + 1.0))
    });
    let mut worst = 0.0f64;
    for v in vals {
        worst = par::nan_max(worst, v?);
    }
    Ok(worst)
}
