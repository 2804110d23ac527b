//! Matrix-polynomial and scalar rational-function arithmetic.

mod matpoly;
mod poly;
mod rational;

pub use matpoly::{unipotent_inverse, MatrixPolynomial};
pub use poly::Poly;
pub use rational::RationalFunction;

use crate::error::Result;
use crate::weights::ScalarWeightSpec;

/// `(w rho)'/w` and `w'/w` of a classical scalar weight.
#[derive(Debug, Clone, PartialEq)]
pub struct LogDerivativePair {
    /// `(w rho)'/w`, always a polynomial of degree at most one.
    pub weighted: RationalFunction,
    /// `w'/w`.
    pub plain: RationalFunction,
}

pub fn log_derivative_pair(w: &ScalarWeightSpec) -> Result<LogDerivativePair> {
    w.check_params()?;
    let pair = match *w {
        ScalarWeightSpec::Hermite { b } => {
            let p = RationalFunction::from_poly(Poly::new(vec![2.0 * b, -2.0]));
            LogDerivativePair { weighted: p.clone(), plain: p }
        }
        ScalarWeightSpec::Laguerre { alpha } => LogDerivativePair {
            weighted: RationalFunction::from_poly(Poly::new(vec![alpha + 1.0, -1.0])),
            plain: RationalFunction::new(Poly::new(vec![alpha, -1.0]), Poly::x()),
        },
        ScalarWeightSpec::Jacobi { alpha, beta } => LogDerivativePair {
            weighted: RationalFunction::from_poly(Poly::new(vec![beta - alpha, -(alpha + beta + 2.0)])),
            // (-alpha(1+x) + beta(1-x)) / (1-x^2)
            plain: RationalFunction::new(
                Poly::new(vec![beta - alpha, -(alpha + beta)]),
                Poly::new(vec![1.0, 0.0, -1.0]),
            ),
        },
    };
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_entries() {
        let l = log_derivative_pair(&ScalarWeightSpec::Laguerre { alpha: 0.5 }).unwrap();
        assert_eq!(l.weighted.as_poly().unwrap(), Poly::new(vec![1.5, -1.0]));
        let h = log_derivative_pair(&ScalarWeightSpec::Hermite { b: 3.0 }).unwrap();
        assert_eq!(h.weighted.as_poly().unwrap(), Poly::new(vec![6.0, -2.0]));
        let j = log_derivative_pair(&ScalarWeightSpec::Jacobi { alpha: 1.0, beta: 2.0 }).unwrap();
        assert_eq!(j.weighted.as_poly().unwrap(), Poly::new(vec![1.0, -5.0]));
        assert!(log_derivative_pair(&ScalarWeightSpec::Jacobi { alpha: -2.0, beta: 0.0 }).is_err());
    }

    #[test]
    fn weighted_form_is_rho_prime_plus_rho_times_plain() {
        for w in [
            ScalarWeightSpec::Hermite { b: -0.5 },
            ScalarWeightSpec::Laguerre { alpha: 0.25 },
            ScalarWeightSpec::Jacobi { alpha: 0.5, beta: -0.25 },
        ] {
            let pair = log_derivative_pair(&w).unwrap();
            let rho = RationalFunction::from_poly(w.rho());
            let rhs = &RationalFunction::from_poly(w.rho().derivative()) + &(&rho * &pair.plain);
            assert_eq!(pair.weighted, rhs, "{w:?}");
        }
    }
}
