use std::fmt::{self, Write};

use num_traits::{One, Signed};

use crate::algebra::{DerivativeVariable, DiffPolynomial, Monomial, Rational, RingContext};

/// Renders `θ name`, e.g. `d1^2(d2(y))`.
pub fn derivative_variable_to_string(ring: &RingContext, v: &DerivativeVariable) -> String {
    let mut open = String::new();
    let mut close = String::new();
    for (i, &e) in v.op.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        write!(open, "d{}", i + 1).unwrap();
        if e > 1 {
            write!(open, "^{e}").unwrap();
        }
        open.push('(');
        close.push(')');
    }
    format!("{open}{}{close}", ring.name(v.base))
}

/// Factors from the largest variable down, joined by `*`. Empty for `1`.
pub fn monomial_to_string(ring: &RingContext, m: &Monomial) -> String {
    m.factors()
        .rev()
        .map(|(v, e)| {
            let s = derivative_variable_to_string(ring, v);
            if e == 1 {
                s
            } else {
                format!("{s}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// A positive coefficient times a monomial.
fn unsigned_term(ring: &RingContext, m: &Monomial, abs: &Rational) -> String {
    if m.is_one() {
        abs.to_string()
    } else if abs.is_one() {
        monomial_to_string(ring, m)
    } else {
        format!("{abs}*{}", monomial_to_string(ring, m))
    }
}

/// Canonical rendering: terms in descending monomial order, joined by
/// ` + ` / ` - `, a leading `-` on a negative first term, and `0` for zero.
pub fn print(f: &DiffPolynomial) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let ring = f.ring();
    let mut out = String::new();
    for (k, (m, c)) in f.terms().rev().enumerate() {
        let body = unsigned_term(ring, m, &c.abs());
        match (k, c.is_negative()) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for DiffPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}
