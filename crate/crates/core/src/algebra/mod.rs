//! Exact arithmetic for partial differential polynomials over the rationals.
//!
//! A ring is described by a [`RingContext`]: the number `m` of commuting
//! derivations and an ordered list of differential indeterminates. Derivative
//! variables carry a multi-index [`DerivationOperator`], so `δ₁δ₂y` and
//! `δ₂δ₁y` are literally the same value.
//!
//! ```
//! use deltapoly::algebra::{DiffPolynomial, RingContext};
//!
//! let ring = RingContext::new(1, ["y"]).unwrap();
//! let y = DiffPolynomial::variable(&ring, "y").unwrap();
//! let f = y.pow(4);
//! let df = f.apply_derivation(1).unwrap();
//! let dy = y.apply_derivation(1).unwrap();
//! assert_eq!(df, &(&y.pow(3) * &dy) * 4);
//! ```

mod context;
mod monomial;
mod operator;
mod polynomial;

pub use context::RingContext;
pub use monomial::{DerivativeVariable, Monomial};
pub use operator::DerivationOperator;
pub use polynomial::DiffPolynomial;

use thiserror::Error;

/// Rational numbers with arbitrary precision numerator and denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("polynomials belong to different rings")]
    ContextMismatch,
    #[error("derivation index {index} out of range 1..={m}")]
    DerivationIndex { index: usize, m: usize },
    #[error("operator has {found} exponents, ring has {expected} derivations")]
    OperatorArity { expected: usize, found: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariableName(String),
    #[error("a ring needs at least one derivation")]
    NoDerivations,
    #[error("variable `{0}` has no assigned value")]
    UnassignedVariable(String),
}

/// Builds a rational from a numerator and denominator.
///
/// Panics when `den` is zero.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Builds an integral rational.
pub fn integer(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
