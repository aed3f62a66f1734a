use std::sync::Arc;

use super::AlgebraError;

/// The shape of a Δ-polynomial ring: `m` commuting derivations and an ordered
/// list of differential indeterminates.
///
/// Variable order matters: it fixes the canonical monomial order and hence the
/// printed form of every polynomial in the ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingContext {
    derivations: usize,
    variables: Vec<String>,
}

impl RingContext {
    pub fn new<I, S>(derivations: usize, variables: I) -> Result<Arc<Self>, AlgebraError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        if derivations == 0 {
            return Err(AlgebraError::NoDerivations);
        }
        let mut names: Vec<String> = Vec::new();
        for name in variables {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(AlgebraError::InvalidVariableName(name));
            }
            if names.contains(&name) {
                return Err(AlgebraError::DuplicateVariable(name));
            }
            names.push(name);
        }
        Ok(Arc::new(Self {
            derivations,
            variables: names,
        }))
    }

    /// Number of derivations `m`.
    pub fn derivations(&self) -> usize {
        self.derivations
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.variables[index]
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// A new ring with `name` appended as the last variable.
    pub fn with_variable(&self, name: &str) -> Result<Arc<Self>, AlgebraError> {
        if self.contains(name) {
            return Err(AlgebraError::DuplicateVariable(name.to_string()));
        }
        Self::new(
            self.derivations,
            self.variables.iter().cloned().chain(std::iter::once(name.to_string())),
        )
    }

    /// A new ring with `name` removed; the remaining variables keep their order.
    pub fn without_variable(&self, name: &str) -> Result<Arc<Self>, AlgebraError> {
        if !self.contains(name) {
            return Err(AlgebraError::UnknownVariable(name.to_string()));
        }
        Self::new(
            self.derivations,
            self.variables.iter().filter(|v| *v != name).cloned(),
        )
    }

    /// First name of the form `base`, `base_1`, `base_2`, ... not already in the ring.
    pub fn fresh_name(&self, base: &str) -> String {
        if !self.contains(base) {
            return base.to_string();
        }
        (1..)
            .map(|k| format!("{base}_{k}"))
            .find(|candidate| !self.contains(candidate))
            .expect("unbounded search")
    }

    pub(crate) fn check_derivation(&self, index: usize) -> Result<(), AlgebraError> {
        if index == 0 || index > self.derivations {
            Err(AlgebraError::DerivationIndex {
                index,
                m: self.derivations,
            })
        } else {
            Ok(())
        }
    }
}

/// `[A-Za-z_][A-Za-z0-9_]*`
pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn same_ring(a: &Arc<RingContext>, b: &Arc<RingContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
