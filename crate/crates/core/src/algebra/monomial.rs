use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::DerivationOperator;

/// A derivative `θy_j`: base variable index plus operator.
///
/// Ordered by base index, then by operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DerivativeVariable {
    pub base: usize,
    pub op: DerivationOperator,
}

impl DerivativeVariable {
    pub fn new(base: usize, op: DerivationOperator) -> Self {
        Self { base, op }
    }

    /// The plain variable `y_j` with the identity operator.
    pub fn plain(base: usize, m: usize) -> Self {
        Self {
            base,
            op: DerivationOperator::identity(m),
        }
    }

    pub fn is_plain(&self) -> bool {
        self.op.is_identity()
    }

    pub fn differentiate(&self, i: usize) -> Self {
        Self {
            base: self.base,
            op: self.op.bump(i),
        }
    }
}

/// A power product of derivative variables. The empty product is `1`.
///
/// Monomials are ordered lexicographically with the largest derivative
/// variable most significant: the first variable (scanning from the top)
/// where the exponents differ decides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: BTreeMap<DerivativeVariable, u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: DerivativeVariable) -> Self {
        Self::power(v, 1)
    }

    pub fn power(v: DerivativeVariable, exp: u32) -> Self {
        let mut factors = BTreeMap::new();
        if exp > 0 {
            factors.insert(v, exp);
        }
        Self { factors }
    }

    pub fn from_factors<I: IntoIterator<Item = (DerivativeVariable, u32)>>(iter: I) -> Self {
        let mut m = Self::one();
        for (v, e) in iter {
            m.multiply_factor(v, e);
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Sum of all exponents.
    pub fn total_degree(&self) -> u32 {
        self.factors.values().sum()
    }

    /// Sum of exponents of all derivatives of the given base variable.
    pub fn degree_in(&self, base: usize) -> u32 {
        self.factors
            .iter()
            .filter(|(v, _)| v.base == base)
            .map(|(_, e)| e)
            .sum()
    }

    pub fn exponent(&self, v: &DerivativeVariable) -> u32 {
        self.factors.get(v).copied().unwrap_or(0)
    }

    /// Factors in ascending variable order.
    pub fn factors(&self) -> impl DoubleEndedIterator<Item = (&DerivativeVariable, u32)> {
        self.factors.iter().map(|(v, &e)| (v, e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (v, &e) in &other.factors {
            out.multiply_factor(v.clone(), e);
        }
        out
    }

    fn multiply_factor(&mut self, v: DerivativeVariable, e: u32) {
        if e > 0 {
            *self.factors.entry(v).or_insert(0) += e;
        }
    }

    /// `self / v^e` if the division is exact.
    pub fn divide_factor(&self, v: &DerivativeVariable, e: u32) -> Option<Monomial> {
        let have = self.exponent(v);
        if have < e {
            return None;
        }
        let mut out = self.clone();
        if have == e {
            out.factors.remove(v);
        } else if e > 0 {
            out.factors.insert(v.clone(), have - e);
        }
        Some(out)
    }

    /// Leibniz rule for `δ_i` on a power product: a list of
    /// `(integer multiplier, monomial)` pairs whose sum is the derivative.
    pub fn derivative(&self, i: usize) -> Vec<(u32, Monomial)> {
        self.factors
            .iter()
            .map(|(v, &e)| {
                let mut m = self
                    .divide_factor(v, 1)
                    .expect("factor present with positive exponent");
                m.multiply_factor(v.differentiate(i), 1);
                (e, m)
            })
            .collect()
    }

    pub(crate) fn map_bases(&self, map: impl Fn(usize) -> usize) -> Monomial {
        Monomial::from_factors(
            self.factors
                .iter()
                .map(|(v, &e)| (DerivativeVariable::new(map(v.base), v.op.clone()), e)),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.factors.iter().rev();
        let mut b = other.factors.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    },
                    ord => return ord,
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
