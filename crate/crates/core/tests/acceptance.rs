//! Acceptance harness. Run with `cargo test --test acceptance`; prints one
//! line per criterion and exits non-zero if any fails.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use deltapoly::algebra::{DerivativeVariable, DiffPolynomial, RingContext};
use deltapoly::certify::{
    certify_complete, replay_certificate, replay_detailed, run_reduction, Certificate,
    FirstOrderSystem, LaurentRelation, Verdict,
};
use deltapoly::homogenize::{dehomogenize, excludes_infinity, homogenize, is_delta_homogeneous};
use deltapoly::lang::parse;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{golden, random_polynomial, random_seed, random_system, ACCEPTANCE_SHAPE};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn yz() -> std::sync::Arc<RingContext> {
    RingContext::new(2, ["y", "z"]).unwrap()
}

fn leibniz_and_commutation() -> Outcome {
    let ring = yz();
    let mut rng = StdRng::seed_from_u64(1);
    for k in 0..200 {
        let f = random_polynomial(&mut rng, &ring, ACCEPTANCE_SHAPE);
        let g = random_polynomial(&mut rng, &ring, ACCEPTANCE_SHAPE);
        for i in 1..=2 {
            let d = |p: &DiffPolynomial| p.apply_derivation(i).unwrap();
            ensure(d(&(&f * &g)) == &d(&f) * &g + &f * &d(&g), || {
                format!("pair {k}: Leibniz fails for d{i} on f = {f}, g = {g}")
            })?;
        }
        let d12 = f.apply_derivation(1).unwrap().apply_derivation(2).unwrap();
        let d21 = f.apply_derivation(2).unwrap().apply_derivation(1).unwrap();
        ensure(d12 == d21, || format!("pair {k}: d1 d2 != d2 d1 on {f}"))?;
    }
    Ok("200 pairs, 0 failures".into())
}

fn kolchin_identity() -> Outcome {
    let ring = yz();
    let f1 = parse("z*d1(y)^2 + y^4 - 1", &ring).unwrap();
    let f2 = parse("2*z*d1^2(y) + d1(z)*d1(y) + 4*y^3", &ring).unwrap();
    let dy = parse("d1(y)", &ring).unwrap();
    ensure(f1.apply_derivation(1).unwrap() == &dy * &f2, || {
        "d1(f1) != d1(y)*f2".into()
    })?;
    let h = homogenize(&f1, &["y"], "y1").unwrap();
    let check = excludes_infinity(&h.polynomial, "y", "y1", &BTreeMap::new()).unwrap();
    ensure(check.value == DiffPolynomial::one(check.value.ring()), || {
        format!("H(1, 0) = {}, expected 1", check.value)
    })?;
    Ok(format!("d1(f1) = d1(y)*f2; H(1, 0) = {}", check.value))
}

fn homogenization_round_trip() -> Outcome {
    let ring = yz();
    let mut rng = StdRng::seed_from_u64(3);
    let mut done = 0;
    while done < 100 {
        let f = random_polynomial(&mut rng, &ring, ACCEPTANCE_SHAPE);
        if f.is_zero() {
            continue;
        }
        let vars: &[&str] = if rng.gen_bool(0.5) { &["y"] } else { &["y", "z"] };
        let h = homogenize(&f, vars, "y0").unwrap();
        let p = &h.polynomial;
        ensure(dehomogenize(p, "y0").unwrap() == f, || {
            format!("dehomogenize(homogenize({f})) != f")
        })?;
        let mut hvars = vars.to_vec();
        hvars.push("y0");
        ensure(is_delta_homogeneous(p, &hvars, h.degree).unwrap(), || {
            format!("{p} is not homogeneous of degree {}", h.degree)
        })?;
        // Keep only the terms free of the plain variable y0.
        let y0 = DerivativeVariable::plain(p.ring().index_of("y0").unwrap(), 2);
        let at_zero = DiffPolynomial::from_terms(
            p.ring(),
            p.terms()
                .filter(|(m, _)| m.exponent(&y0) == 0)
                .map(|(m, c)| (m.clone(), c.clone())),
        );
        ensure(!at_zero.is_zero(), || format!("y0 divides {p}"))?;
        done += 1;
    }
    Ok("100 polynomials".into())
}

fn riccati_end_to_end() -> Outcome {
    let sys = FirstOrderSystem::parse("d1(y) = y^2").unwrap();
    let seed = LaurentRelation::parse("1 = m1*x + m0", 1).unwrap();
    let cert = certify_complete(&sys, &seed);
    ensure(cert.verdict == Verdict::Certified, || format!("verdict {}", cert.verdict))?;
    let h = &cert.infinity_checks[0];
    ensure(h.value.to_string() == "-1", || format!("H(1, 0) = {}", h.value))?;
    let w = &cert.monic_witnesses[0];
    let expected = parse("y^2 - d1(y)", w.polynomial.ring()).unwrap();
    ensure(w.polynomial == expected && w.degree == 2, || {
        format!("monic witness {} of degree {}", w.polynomial, w.degree)
    })?;
    ensure(cert.reduction.len() == 1, || format!("{} steps", cert.reduction.len()))?;
    let last = cert.final_relation.as_ref().unwrap().to_string();
    ensure(last == "1 = (m0 - d1(m1)) - d1(m0)*x^-1", || format!("final {last}"))?;
    ensure(replay_certificate(&cert), || "replay failed".into())?;
    Ok(format!("{last}; replay ok"))
}

fn strict_descent() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let mut steps = 0;
    for k in 0..50 {
        let m = rng.gen_range(1..=2);
        let degree = rng.gen_range(2..=3);
        let sys = random_system(&mut rng, m, degree);
        let gens = rng.gen_range(1..=4);
        let top = rng.gen_range(1..=4);
        let bottom = rng.gen_range(-2..=0);
        let seed = random_seed(&mut rng, m, gens, bottom, top);
        let red = run_reduction(&seed, &sys).map_err(|e| format!("seed {k}: {e}"))?;
        let mut prev = seed.max_degree().unwrap();
        for step in &red.steps {
            let next = step.output.max_degree().unwrap_or(i64::MIN);
            ensure(next < prev, || format!("seed {k}: degree {prev} -> {next}"))?;
            prev = next;
        }
        ensure(red.final_relation.max_degree().unwrap_or(0) <= 0, || {
            format!("seed {k}: final {}", red.final_relation)
        })?;
        ensure(red.final_relation.rhs().exponents_outside_ideal().is_empty(), || {
            format!("seed {k}: final {} leaves the ideal", red.final_relation)
        })?;
        let cert = certify_complete(&sys, &seed);
        ensure(cert.verdict == Verdict::Certified, || {
            format!("seed {k}: verdict {} {:?}", cert.verdict, cert.notes)
        })?;
        replay_detailed(&cert).map_err(|e| format!("seed {k}: replay: {}", e.0))?;
        steps += red.steps.len();
    }
    Ok(format!("50 seeds, {steps} steps"))
}

fn negative_controls() -> Outcome {
    let seed = LaurentRelation::default_seed(2);
    let sys = FirstOrderSystem::parse("d1(y) = y^2; d2(y) = y^3").unwrap();
    let cert = certify_complete(&sys, &seed);
    ensure(cert.verdict == Verdict::Incompatible, || format!("verdict {}", cert.verdict))?;
    let residual = cert.integrability.pairs[0].residual.to_string();
    ensure(residual == "y^4", || format!("residual {residual}"))?;

    let linear = FirstOrderSystem::parse("d1(y) = y").unwrap();
    let cert = certify_complete(&linear, &LaurentRelation::default_seed(1));
    ensure(cert.verdict == Verdict::ReducesToConstants, || {
        format!("linear verdict {}", cert.verdict)
    })?;

    let riccati = FirstOrderSystem::parse("d1(y) = y^2").unwrap();
    let cert = certify_complete(&riccati, &LaurentRelation::default_seed(1));
    let json = cert.to_json().replace("- d1(m0)*x^-1", "- 2*d1(m0)*x^-1");
    let tampered = Certificate::from_json(&json).unwrap();
    ensure(!replay_certificate(&tampered), || "tampered certificate replays".into())?;
    Ok("INCOMPATIBLE (y^4), REDUCES_TO_CONSTANTS, tamper rejected".into())
}

fn parser_and_cli() -> Outcome {
    let ring = yz();
    let mut rng = StdRng::seed_from_u64(7);
    for k in 0..500 {
        let f = random_polynomial(&mut rng, &ring, ACCEPTANCE_SHAPE);
        let back = parse(&f.to_string(), &ring).map_err(|e| format!("poly {k}: {e}"))?;
        ensure(back == f, || format!("poly {k}: {f} reparses as {back}"))?;
    }
    let corpus = golden::parser_corpus();
    for (input, canonical) in &corpus {
        let printed = parse(input, &ring).map_err(|e| format!("{input}: {e}"))?.to_string();
        ensure(&printed == canonical, || format!("{input} prints as {printed}"))?;
        let again = parse(&printed, &ring).unwrap().to_string();
        ensure(again == printed, || format!("{printed} is not idempotent"))?;
    }
    let cases = golden::run_all();
    for case in &cases {
        ensure(case.problems.is_empty(), || {
            format!("cli case {}: {}", case.name, case.problems.join("; "))
        })?;
    }
    Ok(format!("500 round trips, {} corpus strings, {} cli cases", corpus.len(), cases.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("Leibniz and commutation", leibniz_and_commutation),
        ("Kolchin identity", kolchin_identity),
        ("homogenization round trip", homogenization_round_trip),
        ("Riccati certificate", riccati_end_to_end),
        ("strict descent", strict_descent),
        ("negative controls", negative_controls),
        ("parser and CLI goldens", parser_and_cli),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}; {secs:.2}s)", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({why}; {secs:.2}s)", n + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
