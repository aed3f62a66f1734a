//! Degree reduction on a larger seed, JSON round trip, and tamper detection.

use deltapoly::certify::{
    certify_complete, replay_detailed, run_reduction, Certificate, FirstOrderSystem,
    LaurentRelation,
};

fn main() {
    let sys = FirstOrderSystem::parse("d1(y) = y^2").unwrap();
    let seed = LaurentRelation::parse("1 = m3*x^3 + m1*x + m0", 1).unwrap();
    let red = run_reduction(&seed, &sys).unwrap();
    println!("seed: {seed}");
    for step in &red.steps {
        if let Some(r) = &step.renaming {
            println!("rename {} := {}", r.generator, r.definition);
        }
        println!("{}", step.differentiated_string());
        println!("{}", step.solved_string());
        println!("{}", step.output);
    }

    let cert = certify_complete(&sys, &seed);
    let json = cert.to_json();
    let back = Certificate::from_json(&json).unwrap();
    println!("replay after JSON round trip: {:?}", replay_detailed(&back));

    let tampered = json.replacen("d1(m0)", "2*d1(m0)", 1);
    let bad = Certificate::from_json(&tampered).unwrap();
    println!("replay after tampering: {:?}", replay_detailed(&bad));
}
