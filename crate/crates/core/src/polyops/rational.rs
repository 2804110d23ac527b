use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::Poly;

/// Scalar rational function `numerator / denominator`.
///
/// The denominator is kept monic. No common factors are cancelled, so two
/// representations of the same function may differ; [`PartialEq`] compares by
/// cross-multiplication instead of by representation.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// Panics if `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let lead = den.leading();
        RationalFunction {
            num: num.scale(1.0 / lead),
            den: den.scale(1.0 / lead),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::constant(1.0) }
    }

    pub fn zero() -> Self {
        RationalFunction::from_poly(Poly::zero())
    }

    pub fn constant(c: f64) -> Self {
        RationalFunction::from_poly(Poly::constant(c))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this function equals when the denominator is a constant.
    pub fn as_poly(&self) -> Option<Poly> {
        (self.den.degree() == Some(0)).then(|| self.num.scale(1.0 / self.den.coeff(0)))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.num.eval(x) / self.den.eval(x)
    }

    /// Quotient rule, `(n'd - nd') / d^2`.
    pub fn derivative(&self) -> RationalFunction {
        if self.den.degree() == Some(0) {
            return RationalFunction::new(self.num.derivative(), self.den.clone());
        }
        let top = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RationalFunction::new(top, &self.den * &self.den)
    }

    pub fn scale(&self, s: f64) -> RationalFunction {
        RationalFunction { num: self.num.scale(s), den: self.den.clone() }
    }

    /// Cross-multiplied difference `n1*d2 - n2*d1`, zero iff the functions agree.
    pub fn cross_difference(&self, other: &RationalFunction) -> Poly {
        &(&self.num * &other.den) - &(&other.num * &self.den)
    }

    /// Equality up to `tol` relative to the size of the cross products.
    pub fn approx_eq(&self, other: &RationalFunction, tol: f64) -> bool {
        self.relative_distance(other) <= tol
    }

    /// Max coefficient of the cross difference over the max coefficient of either cross product.
    pub fn relative_distance(&self, other: &RationalFunction) -> f64 {
        let a = &self.num * &other.den;
        let b = &other.num * &self.den;
        let diff = (&a - &b).max_abs();
        let scale = a.max_abs().max(b.max_abs());
        if diff == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }

    pub fn chop(&self, tol: f64) -> RationalFunction {
        RationalFunction { num: self.num.chop(tol), den: self.den.clone() }
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.cross_difference(other).is_zero()
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction { num: &self.num + &rhs.num, den: self.den.clone() };
        }
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        self.scale(-1.0)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
