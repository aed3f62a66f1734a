use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use thiserror::Error;

use super::certificate::{Certificate, InfinityRecord, MonicWitness, Verdict, BLUM_AXIOM};
use super::laurent::{LaurentRelation, LaurentSum, LAURENT_VARIABLE};
use super::monic::has_monic_shape;
use super::reduce::{is_bare_generator, ReductionStep};
use super::system::FirstOrderSystem;
use crate::algebra::{DiffPolynomial, Monomial, Rational, RingContext};
use crate::homogenize::{dehomogenize, divisible_by, is_delta_homogeneous};

/// First claim of a certificate that failed to re-verify.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ReplayError(pub String);

type Check = Result<(), ReplayError>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(ReplayError(msg()))
    }
}

/// True iff every claim in `cert` re-verifies exactly.
pub fn replay_certificate(cert: &Certificate) -> bool {
    replay_detailed(cert).is_ok()
}

/// Re-verifies `cert` from its serialized form and reports the first failure.
pub fn replay_detailed(cert: &Certificate) -> Check {
    let cert = Certificate::from_document(&cert.to_document())
        .map_err(|e| ReplayError(format!("document does not parse: {e}")))?;
    let sys = &cert.system;
    let m = sys.derivations();

    let compatible = replay_integrability(&cert)?;
    if !compatible {
        return ensure(cert.verdict == Verdict::Incompatible, || {
            format!("system is incompatible but the verdict is {}", cert.verdict)
        });
    }
    let nonlinear: BTreeSet<usize> = (1..=m).filter(|&i| !is_linear(sys, i)).collect();
    if nonlinear.is_empty() {
        return ensure(cert.verdict == Verdict::ReducesToConstants, || {
            format!("every equation is linear but the verdict is {}", cert.verdict)
        });
    }

    let mut complete = true;
    let mut seen = BTreeSet::new();
    for rec in &cert.infinity_checks {
        ensure(seen.insert(rec.derivation), || {
            format!("d{} has two infinity records", rec.derivation)
        })?;
        replay_infinity(sys, rec)?;
        complete &= !rec.required || rec.excluded;
    }
    complete &= seen.len() == m;

    let mut seen = BTreeSet::new();
    for w in &cert.monic_witnesses {
        ensure(seen.insert(w.derivation), || {
            format!("d{} has two monic witnesses", w.derivation)
        })?;
        replay_monic(sys, w)?;
    }
    complete &= nonlinear.iter().all(|i| seen.contains(i));
    complete &= cert.axioms.iter().any(|a| a == BLUM_AXIOM);

    match &cert.seed {
        Some(seed) => complete &= replay_reduction(&cert, seed, &nonlinear)?,
        None => complete = false,
    }

    let expected = if complete {
        Verdict::Certified
    } else {
        Verdict::NotCertified
    };
    ensure(cert.verdict == expected, || {
        format!("checks support {expected}, certificate claims {}", cert.verdict)
    })
}

fn is_linear(sys: &FirstOrderSystem, i: usize) -> bool {
    sys.rhs(i).total_degree() <= 1
}

fn replay_integrability(cert: &Certificate) -> Result<bool, ReplayError> {
    let sys = &cert.system;
    let m = sys.derivations();
    let y = sys.plain_variable();
    let expected: Vec<(usize, usize)> =
        (1..=m).flat_map(|i| ((i + 1)..=m).map(move |j| (i, j))).collect();
    let found: Vec<(usize, usize)> = cert.integrability.pairs.iter().map(|p| (p.i, p.j)).collect();
    ensure(found == expected, || "integrability pairs are incomplete".into())?;
    let mut all = true;
    for p in &cert.integrability.pairs {
        let (pi, pj) = (sys.rhs(p.i), sys.rhs(p.j));
        let residual = &(&pj.formal_partial(&y) * pi) - &(&pi.formal_partial(&y) * pj);
        ensure(residual == p.residual, || {
            format!("residual for d{}, d{} is {residual}, not {}", p.i, p.j, p.residual)
        })?;
        ensure(p.compatible == residual.is_zero(), || {
            format!("compatibility flag for d{}, d{} is wrong", p.i, p.j)
        })?;
        all &= p.compatible;
    }
    ensure(cert.integrability.compatible == all, || {
        "overall compatibility flag is wrong".into()
    })?;
    Ok(all)
}

fn replay_infinity(sys: &FirstOrderSystem, rec: &InfinityRecord) -> Check {
    let i = rec.derivation;
    ensure((1..=sys.derivations()).contains(&i), || format!("no derivation d{i}"))?;
    let y = sys.variable();
    let h = &rec.homogenized;
    let back = dehomogenize(h, &rec.fresh).map_err(|e| ReplayError(e.to_string()))?;
    ensure(back == sys.equation(i), || {
        format!("H{i} does not dehomogenize to d{i}({y}) - P{i}")
    })?;
    let homogeneous = is_delta_homogeneous(h, &[y, &rec.fresh], rec.degree)
        .map_err(|e| ReplayError(e.to_string()))?;
    ensure(homogeneous, || {
        format!("H{i} is not homogeneous of degree {}", rec.degree)
    })?;
    ensure(!divisible_by(h, &rec.fresh), || {
        format!("H{i} is divisible by {}", rec.fresh)
    })?;
    let point = RingContext::new(sys.derivations(), std::iter::empty::<String>())
        .map_err(|e| ReplayError(e.to_string()))?;
    let assignment = BTreeMap::from([
        (y.to_string(), DiffPolynomial::one(&point)),
        (rec.fresh.clone(), DiffPolynomial::zero(&point)),
    ]);
    let value = h
        .substitute(&point, &assignment)
        .map_err(|e| ReplayError(e.to_string()))?;
    ensure(value == rec.value, || {
        format!("H{i} at [1, 0] is {value}, not {}", rec.value)
    })?;
    ensure(rec.excluded == !value.is_zero(), || {
        format!("exclusion flag for H{i} is wrong")
    })?;
    ensure(rec.required == !is_linear(sys, i), || {
        format!("required flag for H{i} is wrong")
    })
}

fn replay_monic(sys: &FirstOrderSystem, w: &MonicWitness) -> Check {
    let i = w.derivation;
    ensure((1..=sys.derivations()).contains(&i), || format!("no derivation d{i}"))?;
    ensure(!w.scale.is_zero(), || format!("monic scale for d{i} is zero"))?;
    ensure(w.polynomial == sys.equation(i).scale(&w.scale), || {
        format!("monic witness for d{i} is not a scaling of its equation")
    })?;
    ensure(has_monic_shape(&w.polynomial, w.degree), || {
        format!("witness for d{i} is not monic of degree {}", w.degree)
    })?;
    ensure(w.degree == sys.rhs(i).total_degree(), || {
        format!("monic degree for d{i} differs from deg P{i}")
    })?;
    let a = sys.leading_coefficient(i);
    ensure(w.leading_coefficient == a, || {
        format!("leading coefficient for d{i} is {a}")
    })
}

fn in_ideal(sum: &LaurentSum, what: &str) -> Check {
    ensure(sum.exponents_outside_ideal().is_empty(), || {
        format!("{what} has a coefficient outside the generator ideal")
    })
}

fn names_in(sum: &LaurentSum) -> BTreeSet<String> {
    sum.terms().flat_map(|(_, c)| c.variables_used()).collect()
}

/// Returns whether the trace reaches a relation with no positive power of x.
fn replay_reduction(
    cert: &Certificate,
    seed: &LaurentRelation,
    nonlinear: &BTreeSet<usize>,
) -> Result<bool, ReplayError> {
    let sys = &cert.system;
    if !seed.rhs().exponents_outside_ideal().is_empty() {
        ensure(cert.reduction.is_empty(), || "trace starts from an invalid seed".into())?;
        return Ok(false);
    }
    let mut used = names_in(seed.rhs());
    let mut current = seed.clone();
    for (k, step) in cert.reduction.iter().enumerate() {
        replay_step(sys, step, &current, &mut used, nonlinear)
            .map_err(|e| ReplayError(format!("step {}: {}", k + 1, e.0)))?;
        current = step.output.clone();
    }
    let Some(last) = &cert.final_relation else {
        return Ok(false);
    };
    ensure(*last == current, || {
        "final relation is not the output of the last step".into()
    })?;
    Ok(last.max_degree().map_or(true, |t| t <= 0))
}

fn replay_step(
    sys: &FirstOrderSystem,
    step: &ReductionStep,
    input: &LaurentRelation,
    used: &mut BTreeSet<String>,
    nonlinear: &BTreeSet<usize>,
) -> Check {
    let i = step.derivation;
    ensure(nonlinear.contains(&i), || format!("d{i} is not a nonlinear derivation"))?;
    let (d, a) = (sys.rhs(i).total_degree(), sys.leading_coefficient(i));
    ensure(step.system_degree == d, || format!("deg P{i} is {d}"))?;
    ensure(step.leading_coefficient == a, || format!("leading coefficient of P{i} is {a}"))?;
    ensure(step.input == *input, || "input is not the previous relation".into())?;
    let s = step.leading_degree;
    ensure(s >= 1 && input.max_degree() == Some(s), || {
        format!("leading degree {s} is not the top exponent of the input")
    })?;

    let working = step.working.rhs();
    match &step.renaming {
        Some(r) => {
            ensure(!used.contains(&r.generator), || {
                format!("generator {} is not fresh", r.generator)
            })?;
            ensure(r.definition == input.rhs().coefficient(s), || {
                format!("{} is not defined as the top coefficient", r.generator)
            })?;
            ensure(r.definition.constant_term().is_zero(), || {
                format!("definition of {} is outside the generator ideal", r.generator)
            })?;
            let ring = working.ring();
            let gen = DiffPolynomial::variable(ring, &r.generator)
                .map_err(|e| ReplayError(e.to_string()))?;
            let expected = input.rhs().without(s).add(&LaurentSum::monomial(ring, s, gen));
            ensure(*working == expected, || "renamed relation is wrong".into())?;
            used.insert(r.generator.clone());
        }
        None => ensure(working == input.rhs(), || "working relation differs from input".into())?,
    }
    ensure(is_bare_generator(&working.coefficient(s)), || {
        "top coefficient is not a single generator".into()
    })?;

    let ring = working.ring().clone();
    let xr = ring
        .with_variable(LAURENT_VARIABLE)
        .map_err(|e| ReplayError(e.to_string()))?;
    let x = DiffPolynomial::variable(&xr, LAURENT_VARIABLE).expect("just added");
    let as_poly = |sum: &LaurentSum, shift: i64| {
        sum.to_polynomial(&xr, shift)
            .ok_or_else(|| ReplayError(format!("cannot clear denominators of {sum}")))
    };
    let p_of_x = sys
        .rhs_powers(i)
        .into_iter()
        .fold(DiffPolynomial::zero(&xr), |acc, (e, c)| acc + x.pow(e).scale(&c));

    // x^{K+1}·D = x·δQ|_{δx = P(x)} − K·P(x)·Q with Q = x^K·(W − 1).
    let k = working.min_degree().map_or(0, |r| (-r).max(0));
    let q = as_poly(&LaurentRelation::new(working.clone()).defect(), k)?;
    let dq = q.apply_derivation(i).map_err(|e| ReplayError(e.to_string()))?;
    let xv = crate::algebra::DerivativeVariable::plain(
        xr.index_of(LAURENT_VARIABLE).expect("just added"),
        xr.derivations(),
    );
    let dx = x.apply_derivation(i).map_err(|e| ReplayError(e.to_string()))?;
    let dq_dx = q.formal_partial(&xv);
    let eliminated = &dq - &(&dq_dx * &dx) + &dq_dx * &p_of_x;
    let lhs = as_poly(&step.differentiated, k + 1)?;
    let rhs = &x * &eliminated - (&p_of_x * &q) * k;
    ensure(lhs == rhs, || "differentiated identity does not replay".into())?;
    in_ideal(&step.differentiated, "differentiated identity")?;

    // D = s·a·c_s·x^{s+d−1} − s·a·x^{d−1}·solved.
    let sa = Rational::from_integer(s.into()) * &a;
    let c_s = working.coefficient(s).embed(&xr).map_err(|e| ReplayError(e.to_string()))?;
    let shift = k + 1;
    let d_exp = i64::from(d);
    let top = c_s
        .scale(&sa)
        .shift(&Monomial::power(xv.clone(), u32::try_from(s + d_exp - 1 + shift).expect("positive")));
    let solved = as_poly(&step.solved, shift + d_exp - 1)?;
    ensure(lhs == &top - &solved.scale(&sa), || {
        "solved expression does not follow from the identity".into()
    })?;

    // output = working − c_s·x^s + solved.
    let top_s = LaurentSum::monomial(&ring, s, working.coefficient(s));
    let shift = shift + d_exp;
    let out = as_poly(step.output.rhs(), shift)?;
    let expected = as_poly(working, shift)? - as_poly(&top_s, shift)? + as_poly(&step.solved, shift)?;
    ensure(out == expected, || "output is not the substituted relation".into())?;
    ensure(step.output.max_degree().map_or(true, |t| t < s), || {
        "output does not lower the top exponent".into()
    })?;
    in_ideal(step.output.rhs(), "output")?;
    used.extend(names_in(step.output.rhs()));
    Ok(())
}
