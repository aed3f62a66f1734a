//! Certificates for a few first-order systems, including negative verdicts.

use deltapoly::certify::{certify_complete, replay_certificate, FirstOrderSystem, LaurentRelation};

fn main() {
    for system in [
        "d1(y) = y^2",
        "d1(y) = y^2; d2(y) = 2*y^2",
        "d1(y) = 1/2*y^3 - y",
        "d1(y) = y^2; d2(y) = y^3",
        "d1(y) = y",
    ] {
        let sys = FirstOrderSystem::parse(system).unwrap();
        let seed = LaurentRelation::default_seed(sys.derivations());
        let cert = certify_complete(&sys, &seed);
        println!("== {system}");
        print!("{}", cert.report());
        println!("replays: {}\n", replay_certificate(&cert));
    }
}
