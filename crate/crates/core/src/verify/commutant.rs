//! Dimension of the commutant `{X : X L = L X for every L}` of a set of matrices.

use crate::Matrix;

/// Singular values below `COMMUTANT_THRESHOLD * sigma_max` count as zero.
pub const COMMUTANT_THRESHOLD: f64 = 1e-9;

/// Singular values of the stacked Sylvester operators `X -> X L - L X`, largest first.
/// Each `L` is scaled to unit Frobenius norm first; that does not change the commutant.
pub fn commutant_singular_values(mats: &[Matrix]) -> Vec<f64> {
    let Some(first) = mats.first() else {
        return Vec::new();
    };
    let n = first.nrows();
    let id = Matrix::identity(n, n);
    let mut stacked = Matrix::zeros(mats.len() * n * n, n * n);
    for (k, l) in mats.iter().enumerate() {
        let norm = l.norm();
        let l = if norm > 0.0 { l / norm } else { l.clone() };
        // column-major vec(X L - L X) = (L^T kron I - I kron L) vec(X)
        let s = l.transpose().kronecker(&id) - id.kronecker(&l);
        stacked.view_mut((k * n * n, 0), (n * n, n * n)).copy_from(&s);
    }
    let mut sv: Vec<f64> = stacked.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Null-space dimension of the stacked commutation equations, with the singular-value
/// threshold [`COMMUTANT_THRESHOLD`]. An empty list has no constraints and returns 0.
pub fn commutant_dimension(mats: &[Matrix]) -> usize {
    let sv = commutant_singular_values(mats);
    let max = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|s| **s <= COMMUTANT_THRESHOLD * max).count()
}
