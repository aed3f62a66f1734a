//! Δ-homogenization and Δ-homogeneity testing.
//!
//! A Δ-polynomial `f(y₀,…,yₙ)` is Δ-homogeneous of degree `d` when
//! `f(t·y₀,…,t·yₙ) = t^d·f(y₀,…,yₙ)` for a differential indeterminate `t`.
//! The scaling acts on derivatives through the Leibniz rule, so `δ(t·y)`
//! brings in `δt`. Testing is done literally: adjoin a fresh `t`, substitute,
//! compare.
//!
//! Homogenization substitutes `y ↦ y/y₀` with fractions (quotient rule for
//! derivatives) and clears the smallest power of `y₀` that leaves a polynomial.

mod fraction;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{
    AlgebraError, DerivativeVariable, DiffPolynomial, Monomial, Rational,
    RingContext,
};

pub use fraction::DiffFraction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomogenizationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("cannot homogenize the zero polynomial")]
    ZeroPolynomial,
    #[error("the variable set is empty")]
    EmptyVariableSet,
    #[error("variable `{0}` already exists in the ring")]
    FreshVariableCollision(String),
    #[error("polynomial is not Δ-homogeneous in the given variables")]
    NotHomogeneous,
}

/// Result of [`homogenize`]: `F = y₀^d · f(y/y₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Homogenized {
    pub polynomial: DiffPolynomial,
    pub degree: u32,
    /// Name of the adjoined homogenizing variable.
    pub fresh: String,
}

fn base_indices(ring: &RingContext, vars: &[&str]) -> Result<BTreeSet<usize>, HomogenizationError> {
    if vars.is_empty() {
        return Err(HomogenizationError::EmptyVariableSet);
    }
    vars.iter()
        .map(|v| {
            ring.index_of(v)
                .ok_or_else(|| AlgebraError::UnknownVariable(v.to_string()).into())
        })
        .collect()
}

fn extend(ring: &RingContext, fresh: &str) -> Result<Arc<RingContext>, HomogenizationError> {
    ring.with_variable(fresh).map_err(|e| match e {
        AlgebraError::DuplicateVariable(name) => HomogenizationError::FreshVariableCollision(name),
        other => other.into(),
    })
}

/// Tests Δ-homogeneity of degree `d` in `vars` by substituting `y ↦ t·y` for
/// a fresh differential indeterminate `t`.
pub fn is_delta_homogeneous(
    f: &DiffPolynomial,
    vars: &[&str],
    d: u32,
) -> Result<bool, HomogenizationError> {
    let t = f.ring().fresh_name("t");
    is_delta_homogeneous_with(f, vars, d, &t)
}

/// As [`is_delta_homogeneous`] with an explicit name for the scaling variable.
pub fn is_delta_homogeneous_with(
    f: &DiffPolynomial,
    vars: &[&str],
    d: u32,
    t_name: &str,
) -> Result<bool, HomogenizationError> {
    let ring = f.ring();
    let bases = base_indices(ring, vars)?;
    let ext = extend(ring, t_name)?;

    // The t-free part of f(t·y) is Σ t^{deg(term)}·term, so every term must
    // already have degree d in `vars`.
    let structural = f.terms().all(|(m, _)| {
        bases.iter().map(|&b| m.degree_in(b)).sum::<u32>() == d
    });
    if !structural {
        return Ok(false);
    }

    let t = DiffPolynomial::variable(&ext, t_name)?;
    let assignment: BTreeMap<String, DiffPolynomial> = bases
        .iter()
        .map(|&b| {
            let name = ring.name(b);
            let y = DiffPolynomial::variable(&ext, name).expect("name from ring");
            (name.to_string(), &t * &y)
        })
        .collect();
    let scaled = f.substitute(&ext, &assignment)?;
    Ok(scaled == &t.pow(d) * &f.embed(&ext)?)
}

/// Homogenizes `f` with respect to `vars`, adjoining `fresh` as the new
/// coordinate `y₀`. The returned degree is the least `d` for which
/// `y₀^d · f(y/y₀)` is a polynomial.
pub fn homogenize(
    f: &DiffPolynomial,
    vars: &[&str],
    fresh: &str,
) -> Result<Homogenized, HomogenizationError> {
    if f.is_zero() {
        return Err(HomogenizationError::ZeroPolynomial);
    }
    let ring = f.ring();
    let bases = base_indices(ring, vars)?;
    let ext = extend(ring, fresh)?;
    let m = ring.derivations();
    let y0 = DiffPolynomial::variable(&ext, fresh)?;
    let y0_var = DerivativeVariable::plain(ext.index_of(fresh).expect("just added"), m);

    // θ(y/y₀) as numerator over a power of y₀.
    let mut images: BTreeMap<DerivativeVariable, (DiffPolynomial, u32)> = BTreeMap::new();
    let image = |v: &DerivativeVariable,
                 images: &mut BTreeMap<DerivativeVariable, (DiffPolynomial, u32)>|
     -> Result<(DiffPolynomial, u32), HomogenizationError> {
        if let Some(hit) = images.get(v) {
            return Ok(hit.clone());
        }
        let name = ring.name(v.base);
        let y = DiffPolynomial::variable(&ext, name)?;
        let mut q = DiffFraction::new(y, y0.clone()).expect("y0 is non-zero");
        for (i, &e) in v.op.exponents().iter().enumerate() {
            for _ in 0..e {
                q = q.apply_derivation(i + 1)?;
            }
        }
        let k = q
            .denominator_power_of(&y0_var)
            .expect("denominator stays a power of y0");
        let lead = q.denominator().leading_term().expect("non-zero").1.clone();
        let entry = (q.numerator().scale(&lead.recip()), k);
        images.insert(v.clone(), entry.clone());
        Ok(entry)
    };

    // Each term becomes numerator / y₀^k.
    let mut parts: Vec<(DiffPolynomial, u32)> = Vec::with_capacity(f.num_terms());
    for (mono, c) in f.terms() {
        let mut num = DiffPolynomial::constant(&ext, c.clone());
        let mut k = 0u32;
        for (v, e) in mono.factors() {
            if bases.contains(&v.base) {
                let (n, kv) = image(v, &mut images)?;
                num = &num * &n.pow(e);
                k += kv * e;
            } else {
                let name = ring.name(v.base);
                num = &num * &DiffPolynomial::derivative_of(&ext, name, &v.op)?.pow(e);
            }
        }
        parts.push((num, k));
    }
    let top = parts.iter().map(|(_, k)| *k).max().unwrap_or(0);
    let mut numerator = DiffPolynomial::zero(&ext);
    for (num, k) in parts {
        numerator = &numerator + &num.shift(&Monomial::power(y0_var.clone(), top - k));
    }
    let common = numerator
        .terms()
        .map(|(mono, _)| mono.exponent(&y0_var))
        .min()
        .unwrap_or(0);
    let polynomial = DiffPolynomial::from_terms(
        &ext,
        numerator.terms().map(|(mono, c)| {
            (
                mono.divide_factor(&y0_var, common).expect("common power"),
                c.clone(),
            )
        }),
    );
    Ok(Homogenized {
        polynomial,
        degree: top - common,
        fresh: fresh.to_string(),
    })
}

/// Sets `y₀ = 1` (so every proper derivative of `y₀` vanishes) and drops
/// `y₀` from the ring.
pub fn dehomogenize(f: &DiffPolynomial, y0: &str) -> Result<DiffPolynomial, HomogenizationError> {
    let target = f.ring().without_variable(y0)?;
    let assignment = BTreeMap::from([(y0.to_string(), DiffPolynomial::one(&target))]);
    Ok(f.substitute(&target, &assignment)?)
}

/// True when no term is free of the plain variable `y₀`, i.e. `y₀ | F`.
pub fn divisible_by(f: &DiffPolynomial, y0: &str) -> bool {
    let Some(idx) = f.ring().index_of(y0) else {
        return false;
    };
    let v = DerivativeVariable::plain(idx, f.ring().derivations());
    !f.is_zero() && f.terms().all(|(m, _)| m.exponent(&v) > 0)
}

/// Outcome of evaluating a homogeneous polynomial at the point `[1, 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfinityCheck {
    /// `F(1, 0)` as a polynomial in the remaining variables.
    pub value: DiffPolynomial,
    /// The point at infinity is off the zero set iff the value is not
    /// identically zero.
    pub excluded: bool,
}

/// Evaluates `F` at `(y, y₁) = (1, 0)` with all derivatives of `y` and `y₁`
/// vanishing. Other variables stay symbolic unless `extra` pins them.
pub fn excludes_infinity(
    f: &DiffPolynomial,
    y: &str,
    y1: &str,
    extra: &BTreeMap<String, Rational>,
) -> Result<InfinityCheck, HomogenizationError> {
    let ring = f.ring();
    let degree = match f.leading_term() {
        Some((m, _)) => {
            let iy = ring
                .index_of(y)
                .ok_or_else(|| AlgebraError::UnknownVariable(y.to_string()))?;
            let iy1 = ring
                .index_of(y1)
                .ok_or_else(|| AlgebraError::UnknownVariable(y1.to_string()))?;
            m.degree_in(iy) + m.degree_in(iy1)
        }
        None => 0,
    };
    if !is_delta_homogeneous(f, &[y, y1], degree)? {
        return Err(HomogenizationError::NotHomogeneous);
    }
    let mut target = ring.without_variable(y)?.without_variable(y1)?;
    for name in extra.keys() {
        if name != y && name != y1 {
            target = target.without_variable(name)?;
        }
    }
    let mut assignment = BTreeMap::from([
        (y.to_string(), DiffPolynomial::one(&target)),
        (y1.to_string(), DiffPolynomial::zero(&target)),
    ]);
    for (name, value) in extra {
        if name != y && name != y1 {
            assignment.insert(name.clone(), DiffPolynomial::constant(&target, value.clone()));
        }
    }
    let value = f.substitute(&target, &assignment)?;
    Ok(InfinityCheck {
        excluded: !value.is_zero(),
        value,
    })
}
