//! Verification suite, quadrature oracle and commutant computation.

mod commutant;
mod quadrature;
mod suite;

pub use commutant::{commutant_dimension, commutant_singular_values, COMMUTANT_THRESHOLD};
pub use quadrature::{quadrature_oracle_moment, ORACLE_MAX_ORDER};
pub use suite::{
    counterexample_operator, run_suite, CheckRecord, CheckStatus, SuiteKind, SuiteOptions, VerificationReport,
    CHECK_NAMES, DEFAULT_SEED,
};
