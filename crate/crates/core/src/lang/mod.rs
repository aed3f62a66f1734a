//! The Δ-polynomial expression language.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := '-'? factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := rational | ident | 'd' uint ('^' uint)? '(' expr ')' | '(' expr ')'
//! ```
//!
//! Rationals are written `p` or `p/q`. `d2^3(f)` is `δ₂³f` and may wrap any
//! expression; lowering expands it with the Leibniz rule.

mod lexer;
mod lower;
mod printer;
mod syntax;

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraError, DiffPolynomial, RingContext};

pub use lower::lower;
pub use printer::{derivative_variable_to_string, monomial_to_string, print};
pub use syntax::{parse_equation, parse_expr, Expr, Pos};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("derivation index {index} at byte {pos} is outside 1..={m}")]
    DerivationIndex { pos: usize, index: usize, m: usize },
    #[error("negative exponent at byte {pos}")]
    NegativeExponent { pos: usize },
    #[error("at byte {pos}: {source}")]
    Algebra { pos: usize, source: AlgebraError },
}

impl ParseError {
    pub(crate) fn syntax(pos: usize, message: impl Into<String>) -> Self {
        Self::Syntax {
            pos,
            message: message.into(),
        }
    }

    /// Byte offset of the first offending token.
    pub fn position(&self) -> usize {
        match self {
            Self::Syntax { pos, .. }
            | Self::UnknownVariable { pos, .. }
            | Self::DerivationIndex { pos, .. }
            | Self::NegativeExponent { pos }
            | Self::Algebra { pos, .. } => *pos,
        }
    }

    /// Shifts the reported position, for text embedded in a larger string.
    pub fn offset_by(self, delta: usize) -> Self {
        match self {
            Self::Syntax { pos, message } => Self::Syntax {
                pos: pos + delta,
                message,
            },
            Self::UnknownVariable { pos, name } => Self::UnknownVariable {
                pos: pos + delta,
                name,
            },
            Self::DerivationIndex { pos, index, m } => Self::DerivationIndex {
                pos: pos + delta,
                index,
                m,
            },
            Self::NegativeExponent { pos } => Self::NegativeExponent { pos: pos + delta },
            Self::Algebra { pos, source } => Self::Algebra {
                pos: pos + delta,
                source,
            },
        }
    }
}

/// Parses and lowers `text` in `ring`.
pub fn parse(text: &str, ring: &Arc<RingContext>) -> Result<DiffPolynomial, ParseError> {
    lower(&parse_expr(text)?, ring)
}
