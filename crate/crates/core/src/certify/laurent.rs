use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};

use super::CertifyError;
use crate::algebra::{DerivativeVariable, DiffPolynomial, Monomial, Rational, RingContext};
use crate::lang::{self, monomial_to_string, Expr};

/// Name of the point coordinate in Laurent expressions.
pub const LAURENT_VARIABLE: &str = "x";

/// A finite sum `Σ c_j·x^j`, `j ∈ ℤ`, with coefficients in a free
/// Δ-polynomial ring of generators.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSum {
    ring: Arc<RingContext>,
    terms: BTreeMap<i64, DiffPolynomial>,
}

impl LaurentSum {
    pub fn zero(ring: &Arc<RingContext>) -> Self {
        Self {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn from_terms<I>(ring: &Arc<RingContext>, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, DiffPolynomial)>,
    {
        let mut out = Self::zero(ring);
        for (j, c) in terms {
            out.add_term(j, &c);
        }
        out
    }

    pub fn monomial(ring: &Arc<RingContext>, j: i64, c: DiffPolynomial) -> Self {
        Self::from_terms(ring, [(j, c)])
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &DiffPolynomial)> {
        self.terms.iter().map(|(j, c)| (*j, c))
    }

    pub fn coefficient(&self, j: i64) -> DiffPolynomial {
        self.terms
            .get(&j)
            .cloned()
            .unwrap_or_else(|| DiffPolynomial::zero(&self.ring))
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    fn add_term(&mut self, j: i64, c: &DiffPolynomial) {
        if c.is_zero() {
            return;
        }
        let c = c.embed(&self.ring).expect("coefficient ring matches");
        let sum = match self.terms.remove(&j) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(j, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (j, c) in &other.terms {
            out.add_term(*j, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::from_terms(&self.ring, self.terms.iter().map(|(j, c)| (*j, c.scale(q))))
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(j, c)| (j + k, c.clone())).collect(),
        }
    }

    /// Drops the `x^j` term.
    pub fn without(&self, j: i64) -> Self {
        let mut out = self.clone();
        out.terms.remove(&j);
        out
    }

    /// Moves every coefficient into `target` (by generator name).
    pub fn embed(&self, target: &Arc<RingContext>) -> Result<Self, CertifyError> {
        let mut terms = BTreeMap::new();
        for (j, c) in &self.terms {
            terms.insert(*j, c.embed(target)?);
        }
        Ok(Self {
            ring: target.clone(),
            terms,
        })
    }

    /// Exponents whose coefficient has a non-zero constant term, i.e. lies
    /// outside the ideal generated by the generators and their derivatives.
    pub fn exponents_outside_ideal(&self) -> Vec<i64> {
        self.terms
            .iter()
            .filter(|(_, c)| !c.constant_term().is_zero_value())
            .map(|(j, _)| *j)
            .collect()
    }

    /// `x^k · self` as a polynomial in `ring ∪ {x}`; `None` if some exponent
    /// stays negative.
    pub fn to_polynomial(&self, x_ring: &Arc<RingContext>, k: i64) -> Option<DiffPolynomial> {
        let x = x_ring.index_of(LAURENT_VARIABLE)?;
        let xv = DerivativeVariable::plain(x, x_ring.derivations());
        let mut out = DiffPolynomial::zero(x_ring);
        for (j, c) in &self.terms {
            let e = u32::try_from(j + k).ok()?;
            out = &out + &c.embed(x_ring).ok()?.shift(&Monomial::power(xv.clone(), e));
        }
        Some(out)
    }

    /// Parses a Laurent expression in `x` whose coefficients use the
    /// generators of `ring`. `x` may carry negative exponents (`x^-2`) but no
    /// derivatives.
    pub fn parse_in(text: &str, ring: &Arc<RingContext>) -> Result<Self, CertifyError> {
        let expr = lang::parse_expr(text)?;
        Self::lower(&expr, ring)
    }

    pub(crate) fn lower(expr: &Expr, ring: &Arc<RingContext>) -> Result<Self, CertifyError> {
        if ring.contains(LAURENT_VARIABLE) {
            return Err(CertifyError::InvalidRelation(format!(
                "`{LAURENT_VARIABLE}` cannot be a generator"
            )));
        }
        let inv = ring.fresh_name("x_inv");
        let ext = ring.with_variable(LAURENT_VARIABLE)?.with_variable(&inv)?;
        let rewritten = invert_negative_powers(expr, &inv);
        let poly = lang::lower(&rewritten, &ext)?;
        let m = ext.derivations();
        let x = DerivativeVariable::plain(ext.index_of(LAURENT_VARIABLE).expect("added"), m);
        let xi = DerivativeVariable::plain(ext.index_of(&inv).expect("added"), m);
        let mut out = Self::zero(ring);
        for (mono, c) in poly.terms() {
            let (ex, ei) = (mono.exponent(&x), mono.exponent(&xi));
            let rest = mono
                .divide_factor(&x, ex)
                .and_then(|r| r.divide_factor(&xi, ei))
                .expect("exponents read from the monomial");
            if rest.factors().any(|(v, _)| v.base == x.base || v.base == xi.base) {
                return Err(CertifyError::InvalidRelation(format!(
                    "derivatives of `{LAURENT_VARIABLE}` are not allowed"
                )));
            }
            let coeff = DiffPolynomial::term(&ext, rest, c.clone()).embed(ring)?;
            out.add_term(i64::from(ex) - i64::from(ei), &coeff);
        }
        Ok(out)
    }
}

trait ZeroValue {
    fn is_zero_value(&self) -> bool;
}

impl ZeroValue for Rational {
    fn is_zero_value(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

fn invert_negative_powers(expr: &Expr, inv: &str) -> Expr {
    let rec = |e: &Expr| Box::new(invert_negative_powers(e, inv));
    match expr {
        Expr::Pow(base, e, at) if *e < 0 => match base.as_ref() {
            Expr::Var(name, vat) if name == LAURENT_VARIABLE => {
                Expr::Pow(Box::new(Expr::Var(inv.to_string(), *vat)), -e, *at)
            }
            _ => Expr::Pow(rec(base), *e, *at),
        },
        Expr::Pow(base, e, at) => Expr::Pow(rec(base), *e, *at),
        Expr::Number(_) | Expr::Var(..) => expr.clone(),
        Expr::Derive {
            index,
            power,
            arg,
            at,
        } => Expr::Derive {
            index: *index,
            power: *power,
            arg: rec(arg),
            at: *at,
        },
        Expr::Neg(a) => Expr::Neg(rec(a)),
        Expr::Add(a, b) => Expr::Add(rec(a), rec(b)),
        Expr::Sub(a, b) => Expr::Sub(rec(a), rec(b)),
        Expr::Mul(a, b) => Expr::Mul(rec(a), rec(b)),
    }
}

fn x_power(j: i64) -> String {
    if j == 1 {
        LAURENT_VARIABLE.to_string()
    } else {
        format!("{LAURENT_VARIABLE}^{j}")
    }
}

/// One term `c·x^j` with its sign pulled out when `c` is a single term.
fn render_term(ring: &RingContext, j: i64, c: &DiffPolynomial) -> (bool, String) {
    if c.num_terms() == 1 {
        let (mono, q) = c.leading_term().expect("one term");
        let mut parts = Vec::new();
        let abs = q.abs();
        if !abs.is_one() || (mono.is_one() && j == 0) {
            parts.push(abs.to_string());
        }
        if !mono.is_one() {
            parts.push(monomial_to_string(ring, mono));
        }
        if j != 0 {
            parts.push(x_power(j));
        }
        (q.is_negative(), parts.join("*"))
    } else if j == 0 {
        (false, format!("({c})"))
    } else {
        (false, format!("({c})*{}", x_power(j)))
    }
}

impl fmt::Display for LaurentSum {
    /// Terms by descending exponent; compound coefficients are parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (j, c)) in self.terms.iter().rev().enumerate() {
            let (negative, body) = render_term(&self.ring, *j, c);
            let sep = match (k, negative) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            write!(f, "{sep}{body}")?;
        }
        Ok(())
    }
}

/// The assertion `1 = Σ c_j·x^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentRelation {
    rhs: LaurentSum,
}

impl LaurentRelation {
    pub fn new(rhs: LaurentSum) -> Self {
        Self { rhs }
    }

    pub fn rhs(&self) -> &LaurentSum {
        &self.rhs
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        self.rhs.ring()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.rhs.max_degree()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.rhs.min_degree()
    }

    /// `Σ c_j·x^j − 1`, the quantity the relation says is zero.
    pub fn defect(&self) -> LaurentSum {
        let one = DiffPolynomial::one(self.ring());
        self.rhs.sub(&LaurentSum::monomial(self.ring(), 0, one))
    }

    /// Parses `1 = ...`, taking generators from the identifiers other than `x`
    /// in order of first appearance.
    pub fn parse(text: &str, derivations: usize) -> Result<Self, CertifyError> {
        let (lhs, rhs) = lang::parse_equation(text)?;
        let names: Vec<String> = rhs
            .identifiers()
            .into_iter()
            .filter(|n| n != LAURENT_VARIABLE)
            .collect();
        let ring = RingContext::new(derivations, names)?;
        Self::from_sides(&lhs, &rhs, &ring)
    }

    /// Parses `1 = ...` with coefficients in a given ring.
    pub fn parse_in(text: &str, ring: &Arc<RingContext>) -> Result<Self, CertifyError> {
        let (lhs, rhs) = lang::parse_equation(text)?;
        Self::from_sides(&lhs, &rhs, ring)
    }

    fn from_sides(lhs: &Expr, rhs: &Expr, ring: &Arc<RingContext>) -> Result<Self, CertifyError> {
        if *lhs != Expr::Number(Rational::one()) {
            return Err(CertifyError::InvalidRelation(
                "the left-hand side must be 1".into(),
            ));
        }
        Ok(Self::new(LaurentSum::lower(rhs, ring)?))
    }

    /// The default demonstration seed `1 = m1*x + m0`.
    pub fn default_seed(derivations: usize) -> Self {
        Self::parse("1 = m1*x + m0", derivations).expect("well-formed seed")
    }

    pub fn embed(&self, target: &Arc<RingContext>) -> Result<Self, CertifyError> {
        Ok(Self::new(self.rhs.embed(target)?))
    }
}

impl fmt::Display for LaurentRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1 = {}", self.rhs)
    }
}

/// Parses `lhs = rhs` with both sides Laurent expressions over `ring`.
pub fn parse_laurent_equation(
    text: &str,
    ring: &Arc<RingContext>,
) -> Result<(LaurentSum, LaurentSum), CertifyError> {
    let (lhs, rhs) = lang::parse_equation(text)?;
    Ok((LaurentSum::lower(&lhs, ring)?, LaurentSum::lower(&rhs, ring)?))
}
