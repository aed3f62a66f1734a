use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::laurent::{parse_laurent_equation, LaurentRelation, LaurentSum};
use super::monic::is_monic;
use super::reduce::{run_reduction, ReductionStep, Renaming};
use super::system::{check_integrability, FirstOrderSystem, IntegrabilityReport, PairCheck};
use super::CertifyError;
use crate::algebra::{DiffPolynomial, Rational, RingContext};
use crate::homogenize::{excludes_infinity, homogenize};
use crate::lang;

pub const SCHEMA: &str = "deltapoly/certificate";
pub const SCHEMA_VERSION: u32 = 1;

/// Recorded as a justification, never computed.
pub const BLUM_AXIOM: &str =
    "blum-criterion: a monic witness for d_i y - P_i(y) is accepted as the hypothesis of Blum's criterion";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Certified,
    ReducesToConstants,
    Incompatible,
    NotCertified,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Certified => "CERTIFIED",
            Self::ReducesToConstants => "REDUCES_TO_CONSTANTS",
            Self::Incompatible => "INCOMPATIBLE",
            Self::NotCertified => "NOT_CERTIFIED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = CertifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Self::Certified,
            Self::ReducesToConstants,
            Self::Incompatible,
            Self::NotCertified,
        ]
        .into_iter()
        .find(|v| v.as_str() == s)
        .ok_or_else(|| CertifyError::Document(format!("unknown verdict `{s}`")))
    }
}

/// `Hᵢ = homogenize(δᵢy − Pᵢ)` and its value at `[1, 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfinityRecord {
    pub derivation: usize,
    pub homogenized: DiffPolynomial,
    pub fresh: String,
    pub degree: u32,
    pub value: DiffPolynomial,
    pub excluded: bool,
    /// Only nonlinear equations must exclude the point at infinity.
    pub required: bool,
}

/// `scale·(δᵢy − Pᵢ)` is monic of degree `degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicWitness {
    pub derivation: usize,
    pub polynomial: DiffPolynomial,
    pub scale: Rational,
    /// `a`, the leading coefficient of `Pᵢ`.
    pub leading_coefficient: Rational,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub system: FirstOrderSystem,
    pub integrability: IntegrabilityReport,
    pub infinity_checks: Vec<InfinityRecord>,
    pub monic_witnesses: Vec<MonicWitness>,
    pub seed: Option<LaurentRelation>,
    pub reduction: Vec<ReductionStep>,
    pub final_relation: Option<LaurentRelation>,
    pub axioms: Vec<String>,
    /// Reasons for a negative verdict.
    pub notes: Vec<String>,
}

/// Homogenizes `δᵢy − Pᵢ` in `y` and evaluates it at `[1, 0]`.
pub(crate) fn infinity_record(
    sys: &FirstOrderSystem,
    i: usize,
) -> Result<InfinityRecord, CertifyError> {
    let y = sys.variable();
    let fresh = sys.ring().fresh_name(&format!("{y}1"));
    let h = homogenize(&sys.equation(i), &[y], &fresh)?;
    let check = excludes_infinity(&h.polynomial, y, &fresh, &BTreeMap::new())?;
    Ok(InfinityRecord {
        derivation: i,
        homogenized: h.polynomial,
        fresh,
        degree: h.degree,
        value: check.value,
        excluded: check.excluded,
        required: !sys.is_linear(i),
    })
}

/// Runs every check and the reduction on `seed`. Failures become verdicts.
pub fn certify_complete(sys: &FirstOrderSystem, seed: &LaurentRelation) -> Certificate {
    let mut cert = Certificate {
        verdict: Verdict::NotCertified,
        system: sys.clone(),
        integrability: check_integrability(sys),
        infinity_checks: Vec::new(),
        monic_witnesses: Vec::new(),
        seed: None,
        reduction: Vec::new(),
        final_relation: None,
        axioms: Vec::new(),
        notes: Vec::new(),
    };
    if !cert.integrability.compatible {
        cert.verdict = Verdict::Incompatible;
        for p in cert.integrability.pairs.iter().filter(|p| !p.compatible) {
            cert.notes.push(format!(
                "d{}, d{} do not commute: residual {}",
                p.i, p.j, p.residual
            ));
        }
        return cert;
    }
    if sys.reducing_derivation().is_none() {
        cert.verdict = Verdict::ReducesToConstants;
        return cert;
    }

    for i in 1..=sys.derivations() {
        match infinity_record(sys, i) {
            Ok(rec) => {
                if rec.required && !rec.excluded {
                    cert.notes
                        .push(format!("d{i}: the point at infinity lies on the zero set"));
                }
                cert.infinity_checks.push(rec);
            }
            Err(e) => cert.notes.push(format!("d{i}: {e}")),
        }
    }
    for i in sys.nonlinear_indices() {
        match is_monic(&sys.equation(i)) {
            Ok(Some(form)) => cert.monic_witnesses.push(MonicWitness {
                derivation: i,
                polynomial: form.polynomial,
                scale: form.scale,
                leading_coefficient: sys.leading_coefficient(i),
                degree: form.n,
            }),
            Ok(None) => cert.notes.push(format!("d{i}: no monic scaling")),
            Err(e) => cert.notes.push(format!("d{i}: {e}")),
        }
    }
    if !cert.monic_witnesses.is_empty() {
        cert.axioms.push(BLUM_AXIOM.to_string());
    }

    cert.seed = Some(seed.clone());
    match run_reduction(seed, sys) {
        Ok(red) => {
            cert.reduction = red.steps;
            cert.final_relation = Some(red.final_relation);
        }
        Err(e) => cert.notes.push(format!("reduction: {e}")),
    }
    if cert.notes.is_empty() {
        cert.verdict = Verdict::Certified;
    }
    cert
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub derivations: usize,
    pub variable: String,
    pub equations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDocument {
    pub i: usize,
    pub j: usize,
    pub residual: String,
    pub compatible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegrabilityDocument {
    pub compatible: bool,
    pub pairs: Vec<PairDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfinityDocument {
    pub derivation: usize,
    pub homogenized: String,
    pub fresh: String,
    pub degree: u32,
    pub value: String,
    pub excluded: bool,
    pub required: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonicDocument {
    pub derivation: usize,
    pub polynomial: String,
    pub scale: String,
    pub leading_coefficient: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenamingDocument {
    pub generator: String,
    pub definition: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDocument {
    pub derivation: usize,
    pub input: String,
    pub renaming: Option<RenamingDocument>,
    pub working: String,
    pub leading_degree: i64,
    pub system_degree: u32,
    pub leading_coefficient: String,
    pub differentiated: String,
    pub solved: String,
    pub output: String,
}

/// Serializable form of a [`Certificate`]; every polynomial is a canonical
/// string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub schema: String,
    pub version: u32,
    pub verdict: String,
    pub system: SystemDocument,
    pub integrability: IntegrabilityDocument,
    pub infinity_checks: Vec<InfinityDocument>,
    pub monic_witnesses: Vec<MonicDocument>,
    /// Coefficient generators, including every renamed one.
    pub generators: Vec<String>,
    pub seed: Option<String>,
    pub reduction: Vec<StepDocument>,
    pub final_relation: Option<String>,
    pub axioms: Vec<String>,
    pub notes: Vec<String>,
}

fn doc_error(msg: impl Into<String>) -> CertifyError {
    CertifyError::Document(msg.into())
}

fn parse_rational(text: &str) -> Result<Rational, CertifyError> {
    Rational::from_str(text.trim()).map_err(|_| doc_error(format!("`{text}` is not a rational")))
}

impl Certificate {
    /// Generator ring holding every relation of the trace.
    pub fn generator_ring(&self) -> Option<&Arc<RingContext>> {
        self.final_relation
            .as_ref()
            .or(self.reduction.last().map(|s| &s.output))
            .or(self.seed.as_ref())
            .map(|r| r.ring())
    }

    pub fn to_document(&self) -> CertificateDocument {
        let sys = &self.system;
        CertificateDocument {
            schema: SCHEMA.to_string(),
            version: SCHEMA_VERSION,
            verdict: self.verdict.to_string(),
            system: SystemDocument {
                derivations: sys.derivations(),
                variable: sys.variable().to_string(),
                equations: sys.equation_strings(),
            },
            integrability: IntegrabilityDocument {
                compatible: self.integrability.compatible,
                pairs: self
                    .integrability
                    .pairs
                    .iter()
                    .map(|p| PairDocument {
                        i: p.i,
                        j: p.j,
                        residual: p.residual.to_string(),
                        compatible: p.compatible,
                    })
                    .collect(),
            },
            infinity_checks: self
                .infinity_checks
                .iter()
                .map(|r| InfinityDocument {
                    derivation: r.derivation,
                    homogenized: r.homogenized.to_string(),
                    fresh: r.fresh.clone(),
                    degree: r.degree,
                    value: r.value.to_string(),
                    excluded: r.excluded,
                    required: r.required,
                })
                .collect(),
            monic_witnesses: self
                .monic_witnesses
                .iter()
                .map(|w| MonicDocument {
                    derivation: w.derivation,
                    polynomial: w.polynomial.to_string(),
                    scale: w.scale.to_string(),
                    leading_coefficient: w.leading_coefficient.to_string(),
                    degree: w.degree,
                })
                .collect(),
            generators: self
                .generator_ring()
                .map(|r| r.variables().to_vec())
                .unwrap_or_default(),
            seed: self.seed.as_ref().map(ToString::to_string),
            reduction: self.reduction.iter().map(step_document).collect(),
            final_relation: self.final_relation.as_ref().map(ToString::to_string),
            axioms: self.axioms.clone(),
            notes: self.notes.clone(),
        }
    }

    /// Rebuilds a certificate, parsing every string in the ring it names.
    pub fn from_document(doc: &CertificateDocument) -> Result<Self, CertifyError> {
        if doc.schema != SCHEMA || doc.version != SCHEMA_VERSION {
            return Err(doc_error(format!(
                "unsupported schema {} version {}",
                doc.schema, doc.version
            )));
        }
        let system = FirstOrderSystem::parse(&doc.system.equations.join("; "))?;
        if system.derivations() != doc.system.derivations || system.variable() != doc.system.variable {
            return Err(doc_error("system header does not match its equations"));
        }
        let m = system.derivations();
        let sys_ring = system.ring().clone();

        let mut pairs = Vec::new();
        for p in &doc.integrability.pairs {
            pairs.push(PairCheck {
                i: p.i,
                j: p.j,
                residual: lang::parse(&p.residual, &sys_ring)?,
                compatible: p.compatible,
            });
        }
        let integrability = IntegrabilityReport {
            compatible: doc.integrability.compatible,
            pairs,
        };

        let mut infinity_checks = Vec::new();
        for r in &doc.infinity_checks {
            let h_ring = sys_ring.with_variable(&r.fresh)?;
            let v_ring = RingContext::new(m, std::iter::empty::<String>())?;
            infinity_checks.push(InfinityRecord {
                derivation: r.derivation,
                homogenized: lang::parse(&r.homogenized, &h_ring)?,
                fresh: r.fresh.clone(),
                degree: r.degree,
                value: lang::parse(&r.value, &v_ring)?,
                excluded: r.excluded,
                required: r.required,
            });
        }

        let mut monic_witnesses = Vec::new();
        for w in &doc.monic_witnesses {
            monic_witnesses.push(MonicWitness {
                derivation: w.derivation,
                polynomial: lang::parse(&w.polynomial, &sys_ring)?,
                scale: parse_rational(&w.scale)?,
                leading_coefficient: parse_rational(&w.leading_coefficient)?,
                degree: w.degree,
            });
        }

        let gens = RingContext::new(m, doc.generators.iter().cloned())?;
        let relation = |text: &str| LaurentRelation::parse_in(text, &gens);
        let seed = doc.seed.as_deref().map(relation).transpose()?;
        let final_relation = doc.final_relation.as_deref().map(relation).transpose()?;
        let mut reduction = Vec::new();
        for s in &doc.reduction {
            reduction.push(step_from_document(s, &gens)?);
        }

        Ok(Self {
            verdict: doc.verdict.parse()?,
            system,
            integrability,
            infinity_checks,
            monic_witnesses,
            seed,
            reduction,
            final_relation,
            axioms: doc.axioms.clone(),
            notes: doc.notes.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CertifyError> {
        let doc: CertificateDocument =
            serde_json::from_str(text).map_err(|e| doc_error(e.to_string()))?;
        Self::from_document(&doc)
    }

    /// Human-readable summary.
    pub fn report(&self) -> String {
        let mut out = format!("verdict: {}\n", self.verdict);
        out.push_str(&format!("system: {}\n", self.system));
        for p in &self.integrability.pairs {
            out.push_str(&format!(
                "integrability d{} d{}: residual {}\n",
                p.i, p.j, p.residual
            ));
        }
        for r in &self.infinity_checks {
            out.push_str(&format!(
                "H{} = {} (degree {}), value at [1, 0] = {}{}\n",
                r.derivation,
                r.homogenized,
                r.degree,
                r.value,
                if r.required { "" } else { " (not required)" }
            ));
        }
        for w in &self.monic_witnesses {
            out.push_str(&format!(
                "monic d{}: {} (scale {}, n = {})\n",
                w.derivation, w.polynomial, w.scale, w.degree
            ));
        }
        if let Some(seed) = &self.seed {
            out.push_str(&format!("seed: {seed}\n"));
        }
        for (k, s) in self.reduction.iter().enumerate() {
            out.push_str(&format!("step {} (d{}):\n", k + 1, s.derivation));
            if let Some(r) = &s.renaming {
                out.push_str(&format!("  rename {} := {}\n", r.generator, r.definition));
            }
            out.push_str(&format!("  {}\n", s.differentiated_string()));
            out.push_str(&format!("  {}\n", s.solved_string()));
            out.push_str(&format!("  {}\n", s.output));
        }
        if let Some(f) = &self.final_relation {
            out.push_str(&format!("final: {f}\n"));
        }
        for a in &self.axioms {
            out.push_str(&format!("axiom: {a}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

fn step_document(s: &ReductionStep) -> StepDocument {
    StepDocument {
        derivation: s.derivation,
        input: s.input.to_string(),
        renaming: s.renaming.as_ref().map(|r| RenamingDocument {
            generator: r.generator.clone(),
            definition: r.definition.to_string(),
        }),
        working: s.working.to_string(),
        leading_degree: s.leading_degree,
        system_degree: s.system_degree,
        leading_coefficient: s.leading_coefficient.to_string(),
        differentiated: s.differentiated_string(),
        solved: s.solved_string(),
        output: s.output.to_string(),
    }
}

fn step_from_document(
    s: &StepDocument,
    gens: &Arc<RingContext>,
) -> Result<ReductionStep, CertifyError> {
    let relation = |text: &str| LaurentRelation::parse_in(text, gens);
    let working = relation(&s.working)?;
    let (zero, differentiated) = parse_laurent_equation(&s.differentiated, gens)?;
    if !zero.is_zero() {
        return Err(doc_error("differentiated identity must read `0 = ...`"));
    }
    let (lead, solved) = parse_laurent_equation(&s.solved, gens)?;
    let expected_lead = LaurentSum::monomial(
        gens,
        s.leading_degree,
        working.rhs().coefficient(s.leading_degree),
    );
    if lead != expected_lead {
        return Err(doc_error(format!(
            "solved expression is for `{lead}`, not the leading term"
        )));
    }
    let renaming = match &s.renaming {
        Some(r) => Some(Renaming {
            generator: r.generator.clone(),
            definition: lang::parse(&r.definition, gens)?,
        }),
        None => None,
    };
    Ok(ReductionStep {
        derivation: s.derivation,
        input: relation(&s.input)?,
        renaming,
        working,
        leading_degree: s.leading_degree,
        system_degree: s.system_degree,
        leading_coefficient: parse_rational(&s.leading_coefficient)?,
        differentiated,
        solved,
        output: relation(&s.output)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::integer;

    #[test]
    fn riccati_certificate() {
        let sys = FirstOrderSystem::parse("d1(y) = y^2").unwrap();
        let cert = certify_complete(&sys, &LaurentRelation::default_seed(1));
        assert_eq!(cert.verdict, Verdict::Certified, "{:?}", cert.notes);
        let h = &cert.infinity_checks[0];
        assert_eq!(h.value, DiffPolynomial::constant(h.value.ring(), integer(-1)));
        assert_eq!(h.homogenized.to_string(), "-d1(y1)*y + y1*d1(y) - y^2");
        let w = &cert.monic_witnesses[0];
        assert_eq!(w.polynomial, lang::parse("y^2 - d1(y)", sys.ring()).unwrap());
        assert_eq!(w.degree, 2);
        assert_eq!(cert.reduction.len(), 1);
        assert_eq!(
            cert.final_relation.as_ref().unwrap().to_string(),
            "1 = (m0 - d1(m1)) - d1(m0)*x^-1"
        );
        assert_eq!(cert.axioms, [BLUM_AXIOM]);
    }

    #[test]
    fn document_round_trip() {
        let sys = FirstOrderSystem::parse("d1(y) = y^2; d2(y) = 2*y^2").unwrap();
        let seed = LaurentRelation::parse("1 = m2*x^2 + m1*x + m0", 2).unwrap();
        let cert = certify_complete(&sys, &seed);
        assert_eq!(cert.verdict, Verdict::Certified);
        let doc = cert.to_document();
        assert_eq!(doc.generators, ["m2", "m1", "m0", "n1"]);
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back.to_document(), doc);
    }

    #[test]
    fn negative_verdicts() {
        let sys = FirstOrderSystem::parse("d1(y) = y^2; d2(y) = y^3").unwrap();
        let cert = certify_complete(&sys, &LaurentRelation::default_seed(2));
        assert_eq!(cert.verdict, Verdict::Incompatible);
        assert_eq!(cert.integrability.pairs[0].residual.to_string(), "y^4");
        assert!(cert.reduction.is_empty());

        let sys = FirstOrderSystem::parse("d1(y) = y").unwrap();
        let cert = certify_complete(&sys, &LaurentRelation::default_seed(1));
        assert_eq!(cert.verdict, Verdict::ReducesToConstants);
        assert!(cert.infinity_checks.is_empty() && cert.seed.is_none());

        let sys = FirstOrderSystem::parse("d1(y) = y^2").unwrap();
        let bad_seed = LaurentRelation::parse("1 = m1*x + 1", 1).unwrap();
        let cert = certify_complete(&sys, &bad_seed);
        assert_eq!(cert.verdict, Verdict::NotCertified);
        assert_eq!(cert.notes.len(), 1);
    }

    #[test]
    fn mixed_linear_and_nonlinear() {
        let sys = FirstOrderSystem::parse("d1(y) = y^2; d2(y) = 0").unwrap();
        let cert = certify_complete(&sys, &LaurentRelation::default_seed(2));
        assert_eq!(cert.verdict, Verdict::Certified, "{:?}", cert.notes);
        let second = &cert.infinity_checks[1];
        assert!(!second.required && !second.excluded);
    }
}
