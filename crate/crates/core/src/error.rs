use std::fmt;

use thiserror::Error;

/// A single violated condition found while validating a [`crate::weights::MatrixWeightSpec`].
#[derive(Debug, Clone, PartialEq)]
pub enum SpecViolation {
    ParamOutOfRange { row: usize, param: &'static str, value: f64 },
    ZeroNilpotentEntry { index: usize },
    RationalRatioViolation { i: usize, j: usize, reason: String },
    JacobiSumViolation { row: usize, expected: f64, found: f64 },
    LengthMismatch { what: &'static str, expected: usize, found: usize },
    FamilyMismatch { row: usize },
    BadTolerance { value: f64 },
}

impl SpecViolation {
    /// Stable name of the violated condition, used in reports and diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            SpecViolation::ParamOutOfRange { .. } => "ParamOutOfRange",
            SpecViolation::ZeroNilpotentEntry { .. } => "ZeroNilpotentEntry",
            SpecViolation::RationalRatioViolation { .. } => "RationalRatioViolation",
            SpecViolation::JacobiSumViolation { .. } => "JacobiSumViolation",
            SpecViolation::LengthMismatch { .. } => "LengthMismatch",
            SpecViolation::FamilyMismatch { .. } => "FamilyMismatch",
            SpecViolation::BadTolerance { .. } => "BadTolerance",
        }
    }
}

impl fmt::Display for SpecViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecViolation::ParamOutOfRange { row, param, value } => {
                write!(f, "ParamOutOfRange: row {} has {} = {} (must be > -1)", row + 1, param, value)
            }
            SpecViolation::ZeroNilpotentEntry { index } => {
                write!(f, "ZeroNilpotentEntry: a_{} is zero", index + 1)
            }
            SpecViolation::RationalRatioViolation { i, j, reason } => {
                write!(f, "RationalRatioViolation: rows {} and {}: {}", i + 1, j + 1, reason)
            }
            SpecViolation::JacobiSumViolation { row, expected, found } => write!(
                f,
                "JacobiSumViolation: row {} has alpha+beta = {}, expected {}",
                row + 1,
                found,
                expected
            ),
            SpecViolation::LengthMismatch { what, expected, found } => {
                write!(f, "LengthMismatch: {} has length {}, expected {}", what, found, expected)
            }
            SpecViolation::FamilyMismatch { row } => {
                write!(f, "FamilyMismatch: row {} is not of the declared family", row + 1)
            }
            SpecViolation::BadTolerance { value } => {
                write!(f, "BadTolerance: working tolerance {} must be positive", value)
            }
        }
    }
}

fn join_violations(v: &[SpecViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MbpError {
    #[error("invalid weight spec: {}", join_violations(.0))]
    InvalidSpec(Vec<SpecViolation>),
    #[error("ParamOutOfRange: {0}")]
    ParamOutOfRange(String),
    #[error("JacobiSumViolation: alpha_1+beta_1 = alpha_j+beta_j+1+(-1)^j fails at row {row}")]
    JacobiSumViolation { row: usize },
    #[error("LengthMismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("ZeroNilpotentEntry: a_{index} is zero")]
    ZeroNilpotentEntry { index: usize },
    #[error("SizeMismatch: {left}x{left} vs {right}x{right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("NotUnipotent: polynomial has no polynomial inverse")]
    NotUnipotent,
    #[error("MomentOverflow: moment of order {k} is not finite")]
    MomentOverflow { k: usize },
    #[error("OutOfSupport: x = {x} is outside the open support ({lo}, {hi})")]
    OutOfSupport { x: f64, lo: f64, hi: f64 },
    #[error("DegreeViolation: coefficient of order {order} has degree {degree}")]
    DegreeViolation { order: usize, degree: usize },
    #[error("NonDiagonalCoefficient: coefficient of order {order} is not diagonal")]
    NonDiagonalCoefficient { order: usize },
    #[error("PoleOnSupport: a coefficient denominator vanishes near x = {x}")]
    PoleOnSupport { x: f64 },
    #[error("OddOrder: operator has odd order {order}")]
    OddOrder { order: usize },
    #[error("ZeroOperator: operation needs a nonzero operator")]
    ZeroOperator,
    #[error("MomentTableTooSmall: need moments up to order {needed}, table has {available}")]
    MomentTableTooSmall { needed: usize, available: usize },
    #[error("SingularGram: block Hankel system of degree {n} is not positive definite")]
    SingularGram { n: usize },
    #[error("QuadratureNonConvergence: {0}")]
    QuadratureNonConvergence(String),
    #[error("ConstructionMismatch: explicit operator differs from T(D~+K~)T^-1 by {residual:e}")]
    ConstructionMismatch { residual: f64 },
}

impl MbpError {
    /// True for failures caused by exhausted floating-point conditioning rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            MbpError::SingularGram { .. }
                | MbpError::QuadratureNonConvergence(_)
                | MbpError::MomentOverflow { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, MbpError>;
