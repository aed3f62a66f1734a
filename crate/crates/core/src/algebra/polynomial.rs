use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::context::same_ring;
use super::{AlgebraError, DerivationOperator, DerivativeVariable, Monomial, Rational, RingContext};

/// A Δ-polynomial with rational coefficients in canonical sparse form.
///
/// The term map never stores a zero coefficient, so structurally equal values
/// are mathematically equal and vice versa.
#[derive(Debug, Clone)]
pub struct DiffPolynomial {
    ring: Arc<RingContext>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for DiffPolynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for DiffPolynomial {}

impl DiffPolynomial {
    pub fn zero(ring: &Arc<RingContext>) -> Self {
        Self {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<RingContext>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Arc<RingContext>, c: Rational) -> Self {
        Self::term(ring, Monomial::one(), c)
    }

    pub fn term(ring: &Arc<RingContext>, monomial: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(monomial, c);
        }
        Self {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from raw terms, merging repeats and dropping zeros.
    pub fn from_terms<I>(ring: &Arc<RingContext>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut out = Self::zero(ring);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn variable(ring: &Arc<RingContext>, name: &str) -> Result<Self, AlgebraError> {
        Self::derivative_of(ring, name, &DerivationOperator::identity(ring.derivations()))
    }

    /// The derivative variable `θ name`.
    pub fn derivative_of(
        ring: &Arc<RingContext>,
        name: &str,
        op: &DerivationOperator,
    ) -> Result<Self, AlgebraError> {
        let base = ring
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        if op.arity() != ring.derivations() {
            return Err(AlgebraError::OperatorArity {
                expected: ring.derivations(),
                found: op.arity(),
            });
        }
        Ok(Self::term(
            ring,
            Monomial::var(DerivativeVariable::new(base, op.clone())),
            Rational::one(),
        ))
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The largest term in the canonical monomial order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Re-normalizes the term map; a no-op on any value built by this module.
    pub fn canonicalize(&self) -> Self {
        Self::from_terms(
            &self.ring,
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &Self) -> Result<(), AlgebraError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Self {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Multiplies every term by a monomial.
    pub fn shift(&self, by: &Monomial) -> Self {
        Self {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.mul(by), c.clone())).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one(&self.ring);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Maximum total degree over all terms; `0` for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Degree in all derivatives of the named variable combined.
    ///
    /// Unknown names have degree 0.
    pub fn degree_in(&self, name: &str) -> u32 {
        match self.ring.index_of(name) {
            Some(base) => self
                .terms
                .keys()
                .map(|m| m.degree_in(base))
                .max()
                .unwrap_or(0),
            None => 0,
        }
    }

    /// Largest operator order of any derivative variable present.
    pub fn order(&self) -> u32 {
        self.derivative_variables()
            .iter()
            .map(|v| v.op.order())
            .max()
            .unwrap_or(0)
    }

    pub fn derivative_variables(&self) -> BTreeSet<DerivativeVariable> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().map(|(v, _)| v.clone()))
            .collect()
    }

    /// Names of base variables that occur (through any derivative).
    pub fn variables_used(&self) -> BTreeSet<String> {
        self.derivative_variables()
            .iter()
            .map(|v| self.ring.name(v.base).to_string())
            .collect()
    }

    /// `δ_i f` with a 1-based derivation index.
    pub fn apply_derivation(&self, i: usize) -> Result<Self, AlgebraError> {
        self.ring.check_derivation(i)?;
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            for (mult, dm) in m.derivative(i) {
                out.add_term(dm, c * Rational::from_integer(mult.into()));
            }
        }
        Ok(out)
    }

    /// `θ f`, applying each single derivation the number of times its
    /// exponent says.
    pub fn apply_operator(&self, op: &DerivationOperator) -> Result<Self, AlgebraError> {
        if op.arity() != self.ring.derivations() {
            return Err(AlgebraError::OperatorArity {
                expected: self.ring.derivations(),
                found: op.arity(),
            });
        }
        let mut out = self.clone();
        for (idx, &e) in op.exponents().iter().enumerate() {
            for _ in 0..e {
                out = out.apply_derivation(idx + 1)?;
            }
        }
        Ok(out)
    }

    /// Formal partial derivative `∂f/∂v` treating every derivative variable
    /// as an independent indeterminate.
    pub fn formal_partial(&self, v: &DerivativeVariable) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                let reduced = m.divide_factor(v, 1).expect("exponent checked");
                out.add_term(reduced, c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Differential ring homomorphism into `target` sending each named base
    /// variable `y` to `assignment[y]` and `θy` to `θ(assignment[y])`.
    ///
    /// Variables without an assignment map to the variable of the same name
    /// in `target`.
    pub fn substitute(
        &self,
        target: &Arc<RingContext>,
        assignment: &BTreeMap<String, DiffPolynomial>,
    ) -> Result<Self, AlgebraError> {
        if target.derivations() != self.ring.derivations() {
            return Err(AlgebraError::ContextMismatch);
        }
        for image in assignment.values() {
            if !same_ring(image.ring(), target) {
                return Err(AlgebraError::ContextMismatch);
            }
        }
        let mut images: HashMap<DerivativeVariable, DiffPolynomial> = HashMap::new();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut product = Self::constant(target, c.clone());
            for (v, e) in m.factors() {
                if !images.contains_key(v) {
                    let name = self.ring.name(v.base);
                    let image = match assignment.get(name) {
                        Some(p) => p.apply_operator(&v.op)?,
                        None => Self::derivative_of(target, name, &v.op)?,
                    };
                    images.insert(v.clone(), image);
                }
                product = &product * &images[v].pow(e);
                if product.is_zero() {
                    break;
                }
            }
            for (pm, pc) in product.terms {
                out.add_term(pm, pc);
            }
        }
        Ok(out)
    }

    /// Evaluates at a point of rational constants. Proper derivatives
    /// evaluate to zero since rationals are absolute constants.
    pub fn evaluate_at_constants(
        &self,
        point: &BTreeMap<String, Rational>,
    ) -> Result<Rational, AlgebraError> {
        for name in self.variables_used() {
            if !point.contains_key(&name) {
                return Err(AlgebraError::UnassignedVariable(name));
            }
        }
        let mut total = Rational::zero();
        'terms: for (m, c) in &self.terms {
            let mut value = c.clone();
            for (v, e) in m.factors() {
                if !v.is_plain() {
                    continue 'terms;
                }
                let x = &point[self.ring.name(v.base)];
                value *= num_traits::pow(x.clone(), e as usize);
            }
            total += value;
        }
        Ok(total)
    }

    /// Moves the polynomial into another ring by variable name.
    pub fn embed(&self, target: &Arc<RingContext>) -> Result<Self, AlgebraError> {
        if same_ring(&self.ring, target) {
            return Ok(self.clone());
        }
        if target.derivations() != self.ring.derivations() {
            return Err(AlgebraError::ContextMismatch);
        }
        let mut map = Vec::with_capacity(self.ring.variables().len());
        for name in self.ring.variables() {
            map.push(target.index_of(name));
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            for (v, _) in m.factors() {
                if map[v.base].is_none() {
                    return Err(AlgebraError::UnknownVariable(
                        self.ring.name(v.base).to_string(),
                    ));
                }
            }
            out.add_term(m.map_bases(|b| map[b].expect("checked")), c.clone());
        }
        Ok(out)
    }
}

impl Add for &DiffPolynomial {
    type Output = DiffPolynomial;

    /// Panics if the operands live in different rings; see [`DiffPolynomial::try_add`].
    fn add(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        self.try_add(rhs).expect("ring mismatch in +")
    }
}

impl Sub for &DiffPolynomial {
    type Output = DiffPolynomial;

    fn sub(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        self.try_sub(rhs).expect("ring mismatch in -")
    }
}

impl Mul for &DiffPolynomial {
    type Output = DiffPolynomial;

    fn mul(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        self.try_mul(rhs).expect("ring mismatch in *")
    }
}

impl Mul<i64> for &DiffPolynomial {
    type Output = DiffPolynomial;

    fn mul(self, rhs: i64) -> DiffPolynomial {
        self.scale(&Rational::from_integer(rhs.into()))
    }
}

impl Mul<&Rational> for &DiffPolynomial {
    type Output = DiffPolynomial;

    fn mul(self, rhs: &Rational) -> DiffPolynomial {
        self.scale(rhs)
    }
}

impl Neg for &DiffPolynomial {
    type Output = DiffPolynomial;

    fn neg(self) -> DiffPolynomial {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_binops {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for DiffPolynomial {
            type Output = DiffPolynomial;
            fn $method(self, rhs: DiffPolynomial) -> DiffPolynomial {
                (&self).$method(&rhs)
            }
        }

        impl $tr<&DiffPolynomial> for DiffPolynomial {
            type Output = DiffPolynomial;
            fn $method(self, rhs: &DiffPolynomial) -> DiffPolynomial {
                (&self).$method(rhs)
            }
        }

        impl $tr<DiffPolynomial> for &DiffPolynomial {
            type Output = DiffPolynomial;
            fn $method(self, rhs: DiffPolynomial) -> DiffPolynomial {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_binops!(Add add, Sub sub, Mul mul);

impl Mul<i64> for DiffPolynomial {
    type Output = DiffPolynomial;

    fn mul(self, rhs: i64) -> DiffPolynomial {
        &self * rhs
    }
}

impl Neg for DiffPolynomial {
    type Output = DiffPolynomial;

    fn neg(self) -> DiffPolynomial {
        -&self
    }
}
