//! Completeness certificates for first-order systems `δᵢy = Pᵢ(y)`.
//!
//! [`certify_complete`] checks that the system is integrable, that each
//! nonlinear equation keeps the point at infinity off its zero set, that
//! each nonlinear equation scales to a monic polynomial, and then runs the
//! Laurent degree reduction on a seed relation `1 = Σ mⱼ·xʲ` until no
//! positive power of `x` is left. The resulting [`Certificate`] is plain data
//! and [`replay_certificate`] re-checks it from scratch.
//!
//! ```
//! use deltapoly::certify::{certify_complete, replay_certificate, FirstOrderSystem, LaurentRelation, Verdict};
//!
//! let sys = FirstOrderSystem::parse("d1(y) = y^2").unwrap();
//! let cert = certify_complete(&sys, &LaurentRelation::default_seed(1));
//! assert_eq!(cert.verdict, Verdict::Certified);
//! assert_eq!(cert.final_relation.unwrap().to_string(), "1 = (m0 - d1(m1)) - d1(m0)*x^-1");
//! ```

mod certificate;
mod laurent;
mod monic;
mod reduce;
mod replay;
mod system;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::homogenize::HomogenizationError;
use crate::lang::ParseError;

pub use certificate::{
    certify_complete, Certificate, CertificateDocument, InfinityRecord, MonicWitness, Verdict,
    BLUM_AXIOM, SCHEMA, SCHEMA_VERSION,
};
pub use laurent::{parse_laurent_equation, LaurentRelation, LaurentSum, LAURENT_VARIABLE};
pub use monic::{has_monic_shape, is_monic, MonicForm};
pub use reduce::{
    differentiate_relation, reduce_leading_term, run_reduction, Reduction, ReductionStep, Renaming,
};
pub use replay::{replay_certificate, replay_detailed, ReplayError};
pub use system::{
    check_integrability, integrability_residual, FirstOrderSystem, IntegrabilityReport, PairCheck,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Homogenization(#[from] HomogenizationError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid system at byte {pos}: {message}")]
    InvalidSystem { pos: usize, message: String },
    #[error("constant polynomials have no monic form")]
    ConstantInput,
    #[error("polynomial must involve exactly one differential variable")]
    NotUnivariate,
    #[error("d{0} has a linear right-hand side; the reduction needs degree at least 2")]
    LinearDerivation(usize),
    #[error("every right-hand side is linear")]
    LinearSystem,
    #[error("relation has no positive power of x to reduce")]
    DegreeTooLow,
    #[error("top-degree term of the differentiated relation is not isolated")]
    NonIsolatedLeadingTerm,
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("coefficient of x^{0} is outside the generator ideal")]
    CoefficientOutsideIdeal(i64),
    #[error("relation has {found} derivations, system has {expected}")]
    DerivationCountMismatch { expected: usize, found: usize },
    #[error("derivation index {index} out of range 1..={m}")]
    DerivationIndex { index: usize, m: usize },
    #[error("reduction did not terminate within {0} steps")]
    NoTermination(usize),
    #[error("malformed certificate: {0}")]
    Document(String),
}
