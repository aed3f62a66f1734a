//! The projective line is not Δ-complete: the computable half of the proof.

use deltapoly::kolchin::build_kolchin_witness;

fn main() {
    let m: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1);
    for i in 1..=m {
        let witness = build_kolchin_witness(m, i).expect("identity holds for every derivation");
        print!("{}", witness.report());
        println!();
    }
}
