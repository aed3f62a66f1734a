use std::fmt;

/// A derivative operator `θ = δ₁^{e₁}···δ_m^{e_m}` stored as its exponent vector.
///
/// Ordering is lexicographic on the exponents, so `δ₁ > δ₂` and the identity
/// is the smallest operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DerivationOperator(Vec<u32>);

impl DerivationOperator {
    pub fn identity(m: usize) -> Self {
        Self(vec![0; m])
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    /// `δ_i` with a 1-based index. Panics if `i` is outside `1..=m`.
    pub fn single(m: usize, i: usize) -> Self {
        let mut e = vec![0; m];
        e[i - 1] = 1;
        Self(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Number of derivations the operator is written against.
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Total order `Σ eᵢ`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `δ_i ∘ self`, 1-based.
    pub fn bump(&self, i: usize) -> Self {
        let mut e = self.0.clone();
        e[i - 1] += 1;
        Self(e)
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for DerivationOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("id");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("·")?;
            }
            first = false;
            write!(f, "d{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}
