use std::sync::Arc;

use super::syntax::Expr;
use super::ParseError;
use crate::algebra::{AlgebraError, DiffPolynomial, RingContext};

/// Lowers a syntax tree to a canonical polynomial. Derivations of compound
/// expressions expand through the Leibniz rule.
pub fn lower(expr: &Expr, ring: &Arc<RingContext>) -> Result<DiffPolynomial, ParseError> {
    Ok(match expr {
        Expr::Number(r) => DiffPolynomial::constant(ring, r.clone()),
        Expr::Var(name, at) => DiffPolynomial::variable(ring, name).map_err(|e| match e {
            AlgebraError::UnknownVariable(name) => ParseError::UnknownVariable { pos: at.0, name },
            other => ParseError::Algebra {
                pos: at.0,
                source: other,
            },
        })?,
        Expr::Derive {
            index,
            power,
            arg,
            at,
        } => {
            let m = ring.derivations();
            if *index == 0 || *index > m {
                return Err(ParseError::DerivationIndex {
                    pos: at.0,
                    index: *index,
                    m,
                });
            }
            let mut value = lower(arg, ring)?;
            for _ in 0..*power {
                value = value.apply_derivation(*index).expect("index checked");
            }
            value
        }
        Expr::Neg(a) => -lower(a, ring)?,
        Expr::Add(a, b) => lower(a, ring)? + lower(b, ring)?,
        Expr::Sub(a, b) => lower(a, ring)? - lower(b, ring)?,
        Expr::Mul(a, b) => lower(a, ring)? * lower(b, ring)?,
        Expr::Pow(a, e, at) => {
            let e = u32::try_from(*e).map_err(|_| ParseError::NegativeExponent { pos: at.0 })?;
            lower(a, ring)?.pow(e)
        }
    })
}
