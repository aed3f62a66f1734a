use std::fmt;

use crate::algebra::{AlgebraError, DiffPolynomial, Monomial};

/// A quotient of Δ-polynomials with non-zero denominator.
///
/// No gcd normal form is kept. [`DiffFraction::reduce_monomial_content`]
/// cancels a common monomial factor when the denominator is a single term,
/// which covers the `y/y₀` substitutions used by homogenization.
#[derive(Debug, Clone)]
pub struct DiffFraction {
    numerator: DiffPolynomial,
    denominator: DiffPolynomial,
}

impl DiffFraction {
    /// Returns `None` when the denominator is zero.
    pub fn new(numerator: DiffPolynomial, denominator: DiffPolynomial) -> Option<Self> {
        if denominator.is_zero() {
            return None;
        }
        Some(Self {
            numerator,
            denominator,
        })
    }

    pub fn from_polynomial(p: DiffPolynomial) -> Self {
        let one = DiffPolynomial::one(p.ring());
        Self {
            numerator: p,
            denominator: one,
        }
    }

    pub fn numerator(&self) -> &DiffPolynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &DiffPolynomial {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Cross-multiplication test `n₁d₂ = n₂d₁`.
    pub fn equivalent(&self, other: &Self) -> Result<bool, AlgebraError> {
        Ok(self.numerator.try_mul(&other.denominator)? == other.numerator.try_mul(&self.denominator)?)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.denominator == other.denominator {
            return Ok(Self {
                numerator: self.numerator.try_add(&other.numerator)?,
                denominator: self.denominator.clone(),
            }
            .reduce_monomial_content());
        }
        let n = self
            .numerator
            .try_mul(&other.denominator)?
            .try_add(&other.numerator.try_mul(&self.denominator)?)?;
        let d = self.denominator.try_mul(&other.denominator)?;
        Ok(Self {
            numerator: n,
            denominator: d,
        }
        .reduce_monomial_content())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(Self {
            numerator: self.numerator.try_mul(&other.numerator)?,
            denominator: self.denominator.try_mul(&other.denominator)?,
        }
        .reduce_monomial_content())
    }

    pub fn neg(&self) -> Self {
        Self {
            numerator: -&self.numerator,
            denominator: self.denominator.clone(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        Self::new(self.denominator.clone(), self.numerator.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        Self {
            numerator: self.numerator.pow(e),
            denominator: self.denominator.pow(e),
        }
        .reduce_monomial_content()
    }

    /// Quotient rule: `δ(n/d) = (δn·d − n·δd)/d²`.
    pub fn apply_derivation(&self, i: usize) -> Result<Self, AlgebraError> {
        let dn = self.numerator.apply_derivation(i)?;
        let dd = self.denominator.apply_derivation(i)?;
        Ok(Self {
            numerator: &(&dn * &self.denominator) - &(&self.numerator * &dd),
            denominator: self.denominator.pow(2),
        }
        .reduce_monomial_content())
    }

    /// Cancels the largest monomial dividing both parts when the denominator
    /// is a single term. Leaves other fractions untouched.
    pub fn reduce_monomial_content(self) -> Self {
        if self.denominator.num_terms() != 1 || self.numerator.is_zero() {
            if self.numerator.is_zero() {
                return Self::from_polynomial(self.numerator);
            }
            return self;
        }
        let (den_mono, _) = self.denominator.leading_term().expect("one term");
        let mut common: Vec<(crate::algebra::DerivativeVariable, u32)> = Vec::new();
        for (v, e) in den_mono.factors() {
            let min = self
                .numerator
                .terms()
                .map(|(m, _)| m.exponent(v))
                .min()
                .unwrap_or(0)
                .min(e);
            if min > 0 {
                common.push((v.clone(), min));
            }
        }
        if common.is_empty() {
            return self;
        }
        let divide = |p: &DiffPolynomial| {
            DiffPolynomial::from_terms(
                p.ring(),
                p.terms().map(|(m, c)| {
                    let mut q = m.clone();
                    for (v, e) in &common {
                        q = q.divide_factor(v, *e).expect("common factor divides");
                    }
                    (q, c.clone())
                }),
            )
        };
        Self {
            numerator: divide(&self.numerator),
            denominator: divide(&self.denominator),
        }
    }

    /// The numerator as a polynomial when the denominator is a non-zero constant.
    pub fn as_polynomial(&self) -> Option<DiffPolynomial> {
        if self.denominator.is_constant() {
            let inv = self.denominator.constant_term().recip();
            Some(self.numerator.scale(&inv))
        } else {
            None
        }
    }

    /// The exponent `k` when the denominator is `c·v^k` for a single plain
    /// variable `v`, or `0` for a constant denominator.
    pub(crate) fn denominator_power_of(&self, v: &crate::algebra::DerivativeVariable) -> Option<u32> {
        let (m, _) = self.denominator.leading_term()?;
        if self.denominator.num_terms() != 1 {
            return None;
        }
        let k = m.exponent(v);
        if *m == Monomial::power(v.clone(), k) {
            Some(k)
        } else {
            None
        }
    }
}

impl fmt::Display for DiffFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}
