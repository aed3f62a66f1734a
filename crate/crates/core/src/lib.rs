//! Partial differential polynomial algebra over the rationals.
//!
//! - [`algebra`]: Δ-polynomials in `m` commuting derivations, exact arithmetic,
//!   derivations, substitution.
//! - [`lang`]: parser and canonical printer for the expression language.
//! - [`homogenize`]: Δ-homogeneity, homogenization, the point at infinity.
//! - [`kolchin`]: the witness that the projective line is not Δ-complete.
//! - [`certify`]: completeness certificates for `δᵢy = Pᵢ(y)` and their replay.
//! - [`cli`]: the `deltapoly` command line.
//!
//! ```
//! use deltapoly::algebra::RingContext;
//! use deltapoly::lang::parse;
//!
//! let ring = RingContext::new(2, ["y", "z"]).unwrap();
//! let f = parse("z*d1(y)^2 + y^4 - 1", &ring).unwrap();
//! let lhs = f.apply_derivation(1).unwrap().apply_derivation(2).unwrap();
//! let rhs = f.apply_derivation(2).unwrap().apply_derivation(1).unwrap();
//! assert_eq!(lhs, rhs);
//! ```

pub mod algebra;
pub mod certify;
pub mod cli;
pub mod homogenize;
pub mod kolchin;
pub mod lang;
