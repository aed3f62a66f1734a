use std::sync::Arc;

use num_traits::{One, Zero};

use super::laurent::{LaurentRelation, LaurentSum};
use super::system::FirstOrderSystem;
use super::CertifyError;
use crate::algebra::{DiffPolynomial, Rational, RingContext};

/// A fresh generator standing for a compound top coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Renaming {
    pub generator: String,
    pub definition: DiffPolynomial,
}

/// One pass of the degree reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionStep {
    pub derivation: usize,
    pub input: LaurentRelation,
    pub renaming: Option<Renaming>,
    /// `input` with its top coefficient replaced by the renamed generator.
    pub working: LaurentRelation,
    /// `s`, the top exponent of `working`.
    pub leading_degree: i64,
    /// `d = deg Pᵢ`.
    pub system_degree: u32,
    /// `a`, the leading coefficient of `Pᵢ`.
    pub leading_coefficient: Rational,
    /// `D` in the identity `0 = D` obtained by applying `δᵢ`.
    pub differentiated: LaurentSum,
    /// Lower-degree expression equal to `c_s·x^s`.
    pub solved: LaurentSum,
    pub output: LaurentRelation,
}

impl ReductionStep {
    /// The top term `c_s·x^s` of the working relation.
    pub fn leading_term(&self) -> LaurentSum {
        let s = self.leading_degree;
        LaurentSum::monomial(
            self.working.ring(),
            s,
            self.working.rhs().coefficient(s),
        )
    }

    pub fn differentiated_string(&self) -> String {
        format!("0 = {}", self.differentiated)
    }

    pub fn solved_string(&self) -> String {
        format!("{} = {}", self.leading_term(), self.solved)
    }
}

/// A full trace from a seed to a relation with no positive powers of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub steps: Vec<ReductionStep>,
    pub final_relation: LaurentRelation,
}

fn check_compatible(
    rel: &LaurentRelation,
    i: usize,
    sys: &FirstOrderSystem,
) -> Result<(), CertifyError> {
    let m = sys.derivations();
    if rel.ring().derivations() != m {
        return Err(CertifyError::DerivationCountMismatch {
            expected: m,
            found: rel.ring().derivations(),
        });
    }
    if i == 0 || i > m {
        return Err(CertifyError::DerivationIndex { index: i, m });
    }
    Ok(())
}

/// Applies `δᵢ` to `1 = Σ cⱼxʲ` using `δᵢx = Pᵢ(x)`, giving the identity
/// `0 = Σ (δᵢcⱼ·xʲ + j·cⱼ·x^{j−1}·Pᵢ(x))`. Returns the right-hand side.
pub fn differentiate_relation(
    rel: &LaurentRelation,
    i: usize,
    sys: &FirstOrderSystem,
) -> Result<LaurentSum, CertifyError> {
    check_compatible(rel, i, sys)?;
    let ring = rel.ring();
    let powers = sys.rhs_powers(i);
    let mut terms = Vec::new();
    for (j, c) in rel.rhs().terms() {
        terms.push((j, c.apply_derivation(i)?));
        if j != 0 {
            let jc = c.scale(&Rational::from_integer(j.into()));
            for (k, p) in &powers {
                terms.push((j - 1 + i64::from(*k), jc.scale(p)));
            }
        }
    }
    Ok(LaurentSum::from_terms(ring, terms))
}

pub(crate) fn is_bare_generator(c: &DiffPolynomial) -> bool {
    match c.leading_term() {
        Some((mono, q)) if c.num_terms() == 1 && q.is_one() => {
            let mut f = mono.factors();
            matches!((f.next(), f.next()), (Some((v, 1)), None) if v.is_plain())
        }
        _ => false,
    }
}

fn fresh_generator(ring: &RingContext) -> String {
    (1..)
        .map(|k| format!("n{k}"))
        .find(|name| !ring.contains(name))
        .expect("unbounded search")
}

/// Replaces a compound top coefficient by a fresh generator.
fn isolate(rel: &LaurentRelation, s: i64) -> Result<(LaurentRelation, Option<Renaming>), CertifyError> {
    let top = rel.rhs().coefficient(s);
    if is_bare_generator(&top) {
        return Ok((rel.clone(), None));
    }
    let name = fresh_generator(rel.ring());
    let ring: Arc<RingContext> = rel.ring().with_variable(&name)?;
    let generator = DiffPolynomial::variable(&ring, &name)?;
    let working = rel
        .rhs()
        .embed(&ring)?
        .without(s)
        .add(&LaurentSum::monomial(&ring, s, generator));
    Ok((
        LaurentRelation::new(working),
        Some(Renaming {
            generator: name,
            definition: top,
        }),
    ))
}

/// Eliminates the top power `x^s` (`s ≥ 1`) of `rel` using `δᵢ`.
pub fn reduce_leading_term(
    rel: &LaurentRelation,
    i: usize,
    sys: &FirstOrderSystem,
) -> Result<ReductionStep, CertifyError> {
    check_compatible(rel, i, sys)?;
    let d = sys.degree(i);
    if d < 2 {
        return Err(CertifyError::LinearDerivation(i));
    }
    let s = match rel.max_degree() {
        Some(s) if s >= 1 => s,
        _ => return Err(CertifyError::DegreeTooLow),
    };
    let a = sys.leading_coefficient(i);
    let (working, renaming) = isolate(rel, s)?;
    let ring = working.ring().clone();
    let differentiated = differentiate_relation(&working, i, sys)?;

    let top_exp = s + i64::from(d) - 1;
    let c_s = working.rhs().coefficient(s);
    let sa = Rational::from_integer(s.into()) * &a;
    assert!(!sa.is_zero(), "s ≥ 1 and a ≠ 0");
    if differentiated.max_degree() != Some(top_exp)
        || differentiated.coefficient(top_exp) != c_s.scale(&sa)
    {
        return Err(CertifyError::NonIsolatedLeadingTerm);
    }
    let rest = differentiated.without(top_exp);
    let solved = rest
        .scale(&(-sa.recip()))
        .shift(-(i64::from(d) - 1));
    let output = LaurentRelation::new(working.rhs().without(s).add(&solved));
    debug_assert!(output.max_degree().map_or(true, |t| t < s));
    Ok(ReductionStep {
        derivation: i,
        input: rel.clone(),
        renaming,
        working,
        leading_degree: s,
        system_degree: d,
        leading_coefficient: a,
        differentiated,
        solved: solved.embed(&ring)?,
        output,
    })
}

/// Checks that every coefficient of the seed lies in the generator ideal.
pub(crate) fn check_seed(seed: &LaurentRelation) -> Result<(), CertifyError> {
    match seed.rhs().exponents_outside_ideal().first() {
        Some(j) => Err(CertifyError::CoefficientOutsideIdeal(*j)),
        None => Ok(()),
    }
}

/// Repeats [`reduce_leading_term`] with the smallest nonlinear derivation
/// until the relation has no positive power of `x`.
pub fn run_reduction(
    seed: &LaurentRelation,
    sys: &FirstOrderSystem,
) -> Result<Reduction, CertifyError> {
    let i = sys.reducing_derivation().ok_or(CertifyError::LinearSystem)?;
    check_compatible(seed, i, sys)?;
    check_seed(seed)?;
    let bound = usize::try_from(seed.max_degree().unwrap_or(0).max(0)).expect("non-negative");
    let mut current = seed.clone();
    let mut steps = Vec::new();
    while current.max_degree().is_some_and(|s| s >= 1) {
        if steps.len() == bound {
            return Err(CertifyError::NoTermination(bound));
        }
        let step = reduce_leading_term(&current, i, sys)?;
        current = step.output.clone();
        steps.push(step);
    }
    Ok(Reduction {
        steps,
        final_relation: current,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    fn riccati() -> FirstOrderSystem {
        FirstOrderSystem::parse("d1(y) = y^2").unwrap()
    }

    fn relation(text: &str) -> LaurentRelation {
        LaurentRelation::parse(text, 1).unwrap()
    }

    #[test]
    fn differentiation_examples() {
        let sys = riccati();
        let d = differentiate_relation(&relation("1 = m1*x + m0"), 1, &sys).unwrap();
        assert_eq!(d.to_string(), "m1*x^2 + d1(m1)*x + d1(m0)");
        let d = differentiate_relation(&relation("1 = m0"), 1, &sys).unwrap();
        assert_eq!(d.to_string(), "d1(m0)");
        let d = differentiate_relation(&relation("1 = m2*x^2"), 1, &sys).unwrap();
        assert_eq!(d.to_string(), "2*m2*x^3 + d1(m2)*x^2");
        assert!(matches!(
            differentiate_relation(&relation("1 = m0"), 2, &sys),
            Err(CertifyError::DerivationIndex { index: 2, m: 1 })
        ));
    }

    #[test]
    fn one_step_hand_trace() {
        let step = reduce_leading_term(&relation("1 = m1*x + m0"), 1, &riccati()).unwrap();
        assert!(step.renaming.is_none());
        assert_eq!(step.differentiated_string(), "0 = m1*x^2 + d1(m1)*x + d1(m0)");
        assert_eq!(step.solved_string(), "m1*x = -d1(m1) - d1(m0)*x^-1");
        assert_eq!(step.output.to_string(), "1 = (m0 - d1(m1)) - d1(m0)*x^-1");
    }

    #[test]
    fn quadratic_seed_first_step() {
        let seed = relation("1 = m2*x^2 + m1*x + m0");
        let step = reduce_leading_term(&seed, 1, &riccati()).unwrap();
        // D = 2m2x³ + (δm2 + m1)x² + δm1·x + δm0, hand expansion.
        let ring = step.working.ring();
        let expected_d = LaurentSum::parse_in(
            "2*m2*x^3 + (d1(m2) + m1)*x^2 + d1(m1)*x + d1(m0)",
            ring,
        )
        .unwrap();
        assert_eq!(step.differentiated, expected_d);
        let expected_out = LaurentSum::parse_in(
            "(1/2*m1 - 1/2*d1(m2))*x + (m0 - 1/2*d1(m1)) - 1/2*d1(m0)*x^-1",
            ring,
        )
        .unwrap();
        assert_eq!(step.output.rhs(), &expected_out);
        assert_eq!(step.output.max_degree(), Some(1));
    }

    #[test]
    fn compound_top_coefficient_is_renamed() {
        let seed = relation("1 = m2*x^2 + m1*x + m0");
        let red = run_reduction(&seed, &riccati()).unwrap();
        assert_eq!(red.steps.len(), 2);
        let second = &red.steps[1];
        let renaming = second.renaming.as_ref().unwrap();
        assert_eq!(renaming.generator, "n1");
        assert_eq!(renaming.definition.to_string(), "1/2*m1 - 1/2*d1(m2)");
        assert_eq!(second.working.rhs().coefficient(1).to_string(), "n1");
        assert!(red.final_relation.max_degree().unwrap() <= 0);
        assert!(red.final_relation.rhs().exponents_outside_ideal().is_empty());
    }

    #[test]
    fn cubic_seed_descends() {
        let red = run_reduction(&relation("1 = m3*x^3 + m0"), &riccati()).unwrap();
        assert!(red.steps.len() <= 3);
        for step in &red.steps {
            assert!(step.output.max_degree().map_or(true, |t| t < step.leading_degree));
        }
        assert!(red.final_relation.max_degree().unwrap() <= 0);
    }

    #[test]
    fn leading_coefficient_and_degree_enter_the_division() {
        let sys = FirstOrderSystem::parse("d1(y) = 3*y^3 - y").unwrap();
        let step = reduce_leading_term(&relation("1 = m1*x + m0"), 1, &sys).unwrap();
        assert_eq!(step.leading_coefficient, rational(3, 1));
        assert_eq!(step.system_degree, 3);
        // D = 3m1x³ + δm1·x − m1·x + δm0
        assert_eq!(
            step.solved.to_string(),
            "(-1/3*d1(m1) + 1/3*m1)*x^-1 - 1/3*d1(m0)*x^-2"
        );
    }

    #[test]
    fn trivial_and_rejected_inputs() {
        let red = run_reduction(&relation("1 = m0"), &riccati()).unwrap();
        assert!(red.steps.is_empty());
        let linear = FirstOrderSystem::parse("d1(y) = y").unwrap();
        assert_eq!(
            run_reduction(&relation("1 = m1*x + m0"), &linear).unwrap_err(),
            CertifyError::LinearSystem
        );
        assert_eq!(
            reduce_leading_term(&relation("1 = m1*x + m0"), 1, &linear).unwrap_err(),
            CertifyError::LinearDerivation(1)
        );
        assert_eq!(
            reduce_leading_term(&relation("1 = m0"), 1, &riccati()).unwrap_err(),
            CertifyError::DegreeTooLow
        );
        assert_eq!(
            run_reduction(&relation("1 = m1*x + 1 + m0"), &riccati()).unwrap_err(),
            CertifyError::CoefficientOutsideIdeal(0)
        );
    }
}
