use num_traits::One;

use super::CertifyError;
use crate::algebra::{DiffPolynomial, Rational};

/// A rational scaling that puts a polynomial in the form `yⁿ + g` with
/// `total_degree(g) < n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicForm {
    pub scale: Rational,
    pub n: u32,
    /// `scale · f`.
    pub polynomial: DiffPolynomial,
}

/// Decides whether some non-zero rational multiple of `f` is monic.
///
/// `f` must involve a single differential variable; total degree counts every
/// derivative variable, so `δy + y` is not monic while `y² − δy` is.
pub fn is_monic(f: &DiffPolynomial) -> Result<Option<MonicForm>, CertifyError> {
    if f.is_constant() {
        return Err(CertifyError::ConstantInput);
    }
    let bases: std::collections::BTreeSet<usize> =
        f.derivative_variables().iter().map(|v| v.base).collect();
    if bases.len() != 1 {
        return Err(CertifyError::NotUnivariate);
    }
    let n = f.total_degree();
    let mut top = f.terms().filter(|(m, _)| m.total_degree() == n);
    let (mono, c) = top.next().expect("a term of top degree exists");
    if top.next().is_some() {
        return Ok(None);
    }
    let mut factors = mono.factors();
    let pure_power = matches!(
        (factors.next(), factors.next()),
        (Some((v, e)), None) if v.is_plain() && e == n
    );
    if !pure_power {
        return Ok(None);
    }
    let scale = c.recip();
    Ok(Some(MonicForm {
        polynomial: f.scale(&scale),
        scale,
        n,
    }))
}

/// Independent structural test that `f` is literally `yⁿ + g` with
/// `total_degree(g) < n` and unit leading coefficient.
pub fn has_monic_shape(f: &DiffPolynomial, n: u32) -> bool {
    let mut top = None;
    for (m, c) in f.terms() {
        let deg = m.total_degree();
        if deg > n {
            return false;
        }
        if deg == n {
            if top.is_some() {
                return false;
            }
            top = Some((m, c));
        }
    }
    match top {
        Some((m, c)) => {
            c.is_one()
                && m.factors().count() == 1
                && m.factors().all(|(v, e)| v.is_plain() && e == n)
        }
        None => false,
    }
}
