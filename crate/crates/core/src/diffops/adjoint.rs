use super::PolyDiffOp;
use crate::error::{MbpError, Result};
use crate::polyops::{log_derivative_pair, RationalFunction};
use crate::weights::ScalarWeightSpec;

/// Square matrix of scalar rational functions, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix {
    n: usize,
    entries: Vec<RationalFunction>,
}

impl RatMatrix {
    pub fn zero(n: usize) -> Self {
        RatMatrix { n, entries: vec![RationalFunction::zero(); n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RationalFunction) {
        self.entries[i * self.n + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    fn from_poly_matrix(p: &crate::polyops::MatrixPolynomial) -> Self {
        let n = p.size();
        let mut m = RatMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, RationalFunction::from_poly(p.entry(i, j)));
            }
        }
        m
    }
}

/// Differential operator with rational-function matrix coefficients, right action.
#[derive(Clone, Debug, PartialEq)]
pub struct RatDiffOp {
    n: usize,
    coeffs: Vec<RatMatrix>,
}

impl RatDiffOp {
    pub fn new(n: usize, mut coeffs: Vec<RatMatrix>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| c.size() != n) {
            return Err(MbpError::SizeMismatch { left: n, right: c.size() });
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(RatDiffOp { n, coeffs })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[RatMatrix] {
        &self.coeffs
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Largest entrywise [`RationalFunction::relative_distance`]; zero iff every entry agrees
    /// by cross-multiplication.
    pub fn relative_distance(&self, other: &RatDiffOp) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = RatMatrix::zero(self.n);
        let mut worst = 0.0f64;
        for k in 0..len {
            let a = self.coeffs.get(k).unwrap_or(&zero);
            let b = other.coeffs.get(k).unwrap_or(&zero);
            for i in 0..self.n {
                for j in 0..self.n {
                    worst = worst.max(a.get(i, j).relative_distance(b.get(i, j)));
                }
            }
        }
        worst
    }
}

impl From<&PolyDiffOp> for RatDiffOp {
    fn from(d: &PolyDiffOp) -> Self {
        RatDiffOp { n: d.size(), coeffs: d.coeffs().iter().map(RatMatrix::from_poly_matrix).collect() }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Interior sample window used to look for denominator zeros.
fn sample_window(w: &ScalarWeightSpec) -> (f64, f64) {
    let (lo, hi) = w.family().support();
    (lo.max(-50.0), hi.min(50.0))
}

fn check_poles(q: &RationalFunction, w: &ScalarWeightSpec) -> Result<()> {
    let den = q.denominator();
    if den.degree() == Some(0) {
        return Ok(());
    }
    let (lo, hi) = sample_window(w);
    let samples = 4000;
    let mut prev: Option<(f64, f64)> = None;
    for s in 1..samples {
        let x = lo + (hi - lo) * s as f64 / samples as f64;
        let v = den.eval(x);
        if v == 0.0 {
            return Err(MbpError::PoleOnSupport { x });
        }
        if let Some((px, pv)) = prev {
            if pv.signum() != v.signum() {
                return Err(MbpError::PoleOnSupport { x: 0.5 * (px + x) });
            }
        }
        prev = Some((x, v));
    }
    Ok(())
}

/// Formal `W~`-adjoint `W~ D^* W~^{-1}` of an operator with diagonal coefficients, for
/// `W~ = diag(w_1, ..., w_N)`:
///
/// `G_k = sum_{j=0}^{n-k} (-1)^{n-j} C(n-j, k) (W~ F_{n-j})^{(n-k-j)} W~^{-1}`.
///
/// Each `(w q)^{(m)} / w` is expanded by iterating `q -> q' + (w'/w) q`, so the result
/// stays inside the rational functions.
pub fn formal_adjoint_diagonal(d: &RatDiffOp, rows: &[ScalarWeightSpec]) -> Result<RatDiffOp> {
    let n = d.size();
    if rows.len() != n {
        return Err(MbpError::LengthMismatch { expected: n, found: rows.len() });
    }
    if let Some(order) = d.coeffs().iter().position(|c| !c.is_diagonal()) {
        return Err(MbpError::NonDiagonalCoefficient { order });
    }
    let Some(order) = d.order() else {
        return Ok(d.clone());
    };
    let logs = rows
        .iter()
        .map(|w| Ok(log_derivative_pair(w)?.plain))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut g = RatMatrix::zero(n);
        for (s, log) in logs.iter().enumerate() {
            let mut acc = RationalFunction::zero();
            for j in 0..=order - k {
                let q = d.coeffs()[order - j].get(s, s);
                if q.is_zero() {
                    continue;
                }
                let mut term = q.clone();
                for _ in 0..(order - k - j) {
                    term = &term.derivative() + &(log * &term);
                }
                let sign = if (order - j) % 2 == 0 { 1.0 } else { -1.0 };
                acc = &acc + &term.scale(sign * binomial(order - j, k));
            }
            check_poles(&acc, &rows[s])?;
            g.set(s, s, acc);
        }
        out.push(g);
    }
    RatDiffOp::new(n, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffops::build_classical_operator;
    use crate::polyops::{MatrixPolynomial, Poly};
    use nalgebra::DMatrix;

    #[test]
    fn zero_order_diagonal_is_self_adjoint() {
        let c = PolyDiffOp::constant(DMatrix::from_diagonal_element(2, 2, 3.0));
        let rows = [ScalarWeightSpec::Hermite { b: 1.0 }, ScalarWeightSpec::Hermite { b: 0.0 }];
        let r = RatDiffOp::from(&c);
        assert_eq!(formal_adjoint_diagonal(&r, &rows).unwrap(), r);
    }

    #[test]
    fn classical_hermite_is_self_adjoint() {
        let w = ScalarWeightSpec::Hermite { b: 2.0 };
        let d = RatDiffOp::from(&build_classical_operator(&w).unwrap());
        assert_eq!(formal_adjoint_diagonal(&d, &[w]).unwrap(), d);
    }

    #[test]
    fn first_derivative_is_not_self_adjoint() {
        // (d)^dagger = -d - w'/w for a scalar weight
        let w = ScalarWeightSpec::Hermite { b: 0.0 };
        let d = RatDiffOp::from(&PolyDiffOp::single(1, MatrixPolynomial::identity(1)));
        let adj = formal_adjoint_diagonal(&d, &[w]).unwrap();
        assert_eq!(adj.coeffs()[1].get(0, 0), &RationalFunction::constant(-1.0));
        assert_eq!(adj.coeffs()[0].get(0, 0), &RationalFunction::from_poly(Poly::new(vec![0.0, 2.0])));
    }

    #[test]
    fn non_diagonal_rejected() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = 1.0;
        let d = RatDiffOp::from(&PolyDiffOp::constant(m));
        let rows = [ScalarWeightSpec::Hermite { b: 1.0 }, ScalarWeightSpec::Hermite { b: 0.0 }];
        assert_eq!(formal_adjoint_diagonal(&d, &rows), Err(MbpError::NonDiagonalCoefficient { order: 0 }));
    }
}
