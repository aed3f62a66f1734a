//! Command-line front end.
//!
//! Exit codes: [`EXIT_OK`] on success (including `CERTIFIED` and
//! `REDUCES_TO_CONSTANTS`), [`EXIT_USAGE`] for bad flags or arguments,
//! [`EXIT_PARSE`] for unparsable expressions, systems, relations or
//! certificates, [`EXIT_NEGATIVE`] for a negative verdict (`INCOMPATIBLE`,
//! `NOT_CERTIFIED`, a failed identity, a certificate that does not replay).

use std::ffi::OsString;
use std::io::{Read, Write};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{AlgebraError, DiffPolynomial, RingContext};
use crate::certify::{
    certify_complete, replay_detailed, run_reduction, Certificate, CertifyError,
    FirstOrderSystem, LaurentRelation, Verdict,
};
use crate::homogenize::{self, HomogenizationError};
use crate::kolchin::{self, KolchinError, NON_COMPUTATIONAL_STEPS};
use crate::lang::{self, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;

const DEFAULT_SEED: &str = "1 = m1*x + m0";

#[derive(Debug, Parser)]
#[command(name = "deltapoly", version, about = "Partial differential polynomial algebra")]
struct Cli {
    /// Number of commuting derivations.
    #[arg(short = 'm', long = "derivations", global = true)]
    m: Option<usize>,
    /// Ring variables, comma separated. Inferred from the input when absent.
    #[arg(long, global = true, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply the derivation d<k> to an expression.
    Derive {
        #[arg(short = 'i')]
        index: usize,
        /// Expression, or `-` for stdin.
        expr: String,
    },
    /// Homogenize an expression in the given variables.
    Homog {
        expr: String,
        /// Variables to homogenize in (default: every ring variable).
        #[arg(long = "var", value_delimiter = ',')]
        var: Vec<String>,
        /// Name of the new coordinate (default: y0 or a fresh variant).
        #[arg(long)]
        fresh: Option<String>,
    },
    /// Test Δ-homogeneity of a given degree.
    IsHomog {
        expr: String,
        #[arg(short = 'd')]
        degree: u32,
        #[arg(long = "var", value_delimiter = ',')]
        var: Vec<String>,
    },
    /// Verify the non-completeness witness for the projective line.
    Kolchin {
        #[arg(short = 'i', default_value_t = 1)]
        index: usize,
        /// Replacement for the second equation, to check a variant.
        #[arg(long)]
        f2: Option<String>,
    },
    /// Build a completeness certificate for d<i>(y) = P<i>(y).
    Certify {
        #[arg(long)]
        system: String,
        #[arg(long, default_value = DEFAULT_SEED)]
        seed: String,
    },
    /// Run the Laurent degree reduction on a relation.
    Reduce {
        #[arg(long)]
        relation: String,
        #[arg(long)]
        system: String,
    },
    /// Re-verify a JSON certificate.
    Replay {
        /// Path, or `-` for stdin.
        #[arg(long)]
        certificate: String,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(String),
    Negative(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Parse(_) => EXIT_PARSE,
            Self::Negative(_) => EXIT_NEGATIVE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Usage(m) | Self::Parse(m) | Self::Negative(m) => m,
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Self::Parse(e.to_string())
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        Self::Usage(e.to_string())
    }
}

impl From<HomogenizationError> for Failure {
    fn from(e: HomogenizationError) -> Self {
        Self::Usage(e.to_string())
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::Parse(_)
            | CertifyError::InvalidSystem { .. }
            | CertifyError::InvalidRelation(_)
            | CertifyError::CoefficientOutsideIdeal(_)
            | CertifyError::Document(_) => Self::Parse(e.to_string()),
            CertifyError::LinearSystem | CertifyError::LinearDerivation(_) => {
                Self::Negative(e.to_string())
            }
            other => Self::Usage(other.to_string()),
        }
    }
}

impl From<KolchinError> for Failure {
    fn from(e: KolchinError) -> Self {
        match e {
            KolchinError::Algebra(_) | KolchinError::Homogenization(_) => {
                Self::Usage(e.to_string())
            }
            other => Self::Negative(other.to_string()),
        }
    }
}

#[derive(Serialize)]
struct Envelope {
    command: &'static str,
    inputs: Value,
    result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Value>,
}

/// What a command produced, before formatting.
struct Outcome {
    envelope: Envelope,
    text: String,
    code: i32,
}

struct Context<'a> {
    m: Option<usize>,
    vars: Option<Vec<String>>,
    stdin: &'a mut dyn Read,
}

impl Context<'_> {
    /// The argument itself, or stdin when it is `-`.
    fn read_arg(&mut self, arg: &str) -> Result<String, Failure> {
        if arg != "-" {
            return Ok(arg.to_string());
        }
        let mut buf = String::new();
        self.stdin
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        Ok(buf.trim().to_string())
    }

    fn derivations(&self) -> usize {
        self.m.unwrap_or(1)
    }

    /// Ring from `--vars`, or from the identifiers of `text` sorted by name.
    fn ring_for(&self, text: &str) -> Result<Arc<RingContext>, Failure> {
        let names = match &self.vars {
            Some(v) => v.clone(),
            None => {
                let mut ids = lang::parse_expr(text)?.identifiers();
                ids.sort();
                ids
            }
        };
        Ok(RingContext::new(self.derivations(), names)?)
    }

    fn polynomial(&self, text: &str) -> Result<DiffPolynomial, Failure> {
        let ring = self.ring_for(text)?;
        Ok(lang::parse(text, &ring)?)
    }
}

fn ring_json(ring: &RingContext) -> Value {
    json!({ "derivations": ring.derivations(), "vars": ring.variables() })
}

fn outcome(command: &'static str, inputs: Value, result: Value, text: String) -> Outcome {
    Outcome {
        envelope: Envelope {
            command,
            inputs,
            result,
            trace: None,
        },
        text,
        code: EXIT_OK,
    }
}

fn check_index(ring: &RingContext, i: usize) -> Result<(), Failure> {
    if i == 0 || i > ring.derivations() {
        return Err(Failure::Usage(format!(
            "derivation index {i} out of range 1..={}",
            ring.derivations()
        )));
    }
    Ok(())
}

fn derive(ctx: &mut Context, index: usize, expr: &str) -> Result<Outcome, Failure> {
    let text = ctx.read_arg(expr)?;
    let f = ctx.polynomial(&text)?;
    check_index(f.ring(), index)?;
    let df = f.apply_derivation(index)?;
    let mut inputs = json!({ "expr": text, "derivation": index });
    merge(&mut inputs, ring_json(f.ring()));
    Ok(outcome(
        "derive",
        inputs,
        json!({ "polynomial": df.to_string() }),
        format!("{df}\n"),
    ))
}

fn chosen_vars(f: &DiffPolynomial, var: &[String]) -> Vec<String> {
    if var.is_empty() {
        f.ring().variables().to_vec()
    } else {
        var.to_vec()
    }
}

fn homog(ctx: &mut Context, expr: &str, var: &[String], fresh: Option<&str>) -> Result<Outcome, Failure> {
    let text = ctx.read_arg(expr)?;
    let f = ctx.polynomial(&text)?;
    let vars = chosen_vars(&f, var);
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    let fresh = fresh.map_or_else(|| f.ring().fresh_name("y0"), str::to_string);
    let h = homogenize::homogenize(&f, &names, &fresh)?;
    let mut inputs = json!({ "expr": text, "var": vars, "fresh": fresh });
    merge(&mut inputs, ring_json(f.ring()));
    Ok(outcome(
        "homog",
        inputs,
        json!({ "polynomial": h.polynomial.to_string(), "degree": h.degree, "fresh": h.fresh }),
        format!("{}\ndegree: {}\n", h.polynomial, h.degree),
    ))
}

fn is_homog(ctx: &mut Context, expr: &str, degree: u32, var: &[String]) -> Result<Outcome, Failure> {
    let text = ctx.read_arg(expr)?;
    let f = ctx.polynomial(&text)?;
    let vars = chosen_vars(&f, var);
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    let answer = homogenize::is_delta_homogeneous(&f, &names, degree)?;
    let mut inputs = json!({ "expr": text, "degree": degree, "var": vars });
    merge(&mut inputs, ring_json(f.ring()));
    Ok(outcome(
        "is-homog",
        inputs,
        json!({ "homogeneous": answer }),
        format!("{answer}\n"),
    ))
}

fn kolchin_cmd(ctx: &mut Context, index: usize, f2: Option<&str>) -> Result<Outcome, Failure> {
    let m = ctx.derivations();
    let (f1, default_f2) = kolchin::kolchin_equations(m, index)?;
    let f2 = match f2 {
        Some(t) => {
            let t = ctx.read_arg(t)?;
            lang::parse(&t, f1.ring())?
        }
        None => default_f2,
    };
    let inputs = json!({ "derivations": m, "derivation": index, "f2": f2.to_string() });
    let w = kolchin::verify_kolchin_witness(f1, f2, index)?;
    let result = json!({
        "f1": w.f1.to_string(),
        "f2": w.f2.to_string(),
        "derivative": w.derivative.to_string(),
        "identity": true,
        "homogenized": w.homogenized.to_string(),
        "degree": w.degree,
        "infinity_value": w.infinity_value.to_string(),
        "infinity_excluded": true,
        "zero_fibre_empty": true,
    });
    let mut out = outcome("kolchin", inputs, result, w.report());
    out.envelope.trace = Some(json!({ "not_computed": NON_COMPUTATIONAL_STEPS }));
    Ok(out)
}

fn certify_cmd(ctx: &mut Context, system: &str, seed: &str) -> Result<Outcome, Failure> {
    let system_text = ctx.read_arg(system)?;
    let sys = FirstOrderSystem::parse(&system_text)?;
    let seed_text = ctx.read_arg(seed)?;
    let seed = LaurentRelation::parse(&seed_text, sys.derivations())?;
    let cert = certify_complete(&sys, &seed);
    let doc = serde_json::to_value(cert.to_document()).expect("plain data");
    let mut out = outcome(
        "certify",
        json!({ "system": system_text, "seed": seed_text }),
        doc,
        cert.report(),
    );
    out.code = match cert.verdict {
        Verdict::Certified | Verdict::ReducesToConstants => EXIT_OK,
        Verdict::Incompatible | Verdict::NotCertified => EXIT_NEGATIVE,
    };
    Ok(out)
}

fn reduce_cmd(ctx: &mut Context, relation: &str, system: &str) -> Result<Outcome, Failure> {
    let system_text = ctx.read_arg(system)?;
    let sys = FirstOrderSystem::parse(&system_text)?;
    let relation_text = ctx.read_arg(relation)?;
    let seed = LaurentRelation::parse(&relation_text, sys.derivations())?;
    let red = run_reduction(&seed, &sys)?;
    // Serialize the steps through a certificate document.
    let doc = Certificate {
        verdict: Verdict::NotCertified,
        system: sys.clone(),
        integrability: crate::certify::check_integrability(&sys),
        infinity_checks: Vec::new(),
        monic_witnesses: Vec::new(),
        seed: Some(seed.clone()),
        reduction: red.steps.clone(),
        final_relation: Some(red.final_relation.clone()),
        axioms: Vec::new(),
        notes: Vec::new(),
    }
    .to_document();
    let mut text = String::new();
    for (k, s) in red.steps.iter().enumerate() {
        text.push_str(&format!("step {}: {}\n", k + 1, s.output));
    }
    text.push_str(&format!("final: {}\n", red.final_relation));
    let mut out = outcome(
        "reduce",
        json!({ "relation": relation_text, "system": system_text }),
        json!({
            "final_relation": red.final_relation.to_string(),
            "max_degree": red.final_relation.max_degree(),
            "steps": red.steps.len(),
            "generators": doc.generators,
        }),
        text,
    );
    out.envelope.trace = Some(serde_json::to_value(&doc.reduction).expect("plain data"));
    Ok(out)
}

fn replay_cmd(ctx: &mut Context, path: &str) -> Result<Outcome, Failure> {
    let text = if path == "-" {
        ctx.read_arg("-")?
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?
    };
    let cert = Certificate::from_json(&text)?;
    let check = replay_detailed(&cert);
    let mut out = outcome(
        "replay",
        json!({ "certificate": path }),
        json!({
            "verdict": cert.verdict.as_str(),
            "replayed": check.is_ok(),
            "failure": check.as_ref().err().map(|e| e.0.clone()),
        }),
        match &check {
            Ok(()) => format!("replayed: {}\n", cert.verdict),
            Err(e) => format!("replay failed: {e}\n"),
        },
    );
    if check.is_err() {
        out.code = EXIT_NEGATIVE;
    }
    Ok(out)
}

fn merge(target: &mut Value, extra: Value) {
    if let (Value::Object(t), Value::Object(e)) = (target, extra) {
        t.extend(e);
    }
}

/// Runs the CLI on explicit arguments and streams; returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let rendered = e.render().to_string();
            if informational {
                let _ = write!(stdout, "{rendered}");
                return EXIT_OK;
            }
            let _ = write!(stderr, "{rendered}");
            return EXIT_USAGE;
        }
    };
    let mut ctx = Context {
        m: cli.m,
        vars: cli.vars,
        stdin,
    };
    let result = match &cli.command {
        Command::Derive { index, expr } => derive(&mut ctx, *index, expr),
        Command::Homog { expr, var, fresh } => homog(&mut ctx, expr, var, fresh.as_deref()),
        Command::IsHomog { expr, degree, var } => is_homog(&mut ctx, expr, *degree, var),
        Command::Kolchin { index, f2 } => kolchin_cmd(&mut ctx, *index, f2.as_deref()),
        Command::Certify { system, seed } => certify_cmd(&mut ctx, system, seed),
        Command::Reduce { relation, system } => reduce_cmd(&mut ctx, relation, system),
        Command::Replay { certificate } => replay_cmd(&mut ctx, certificate),
    };
    match result {
        Ok(out) => {
            let _ = match cli.format {
                Format::Text => write!(stdout, "{}", out.text),
                Format::Json => writeln!(
                    stdout,
                    "{}",
                    serde_json::to_string_pretty(&out.envelope).expect("plain data")
                ),
            };
            out.code
        }
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message());
            failure.code()
        }
    }
}

/// Entry point for the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}
