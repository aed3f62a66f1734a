//! Leibniz rule, commuting derivations and differential substitution.

use std::collections::BTreeMap;

use deltapoly::algebra::{DerivationOperator, DiffPolynomial, RingContext};
use deltapoly::lang::parse;

fn main() {
    let ring = RingContext::new(2, ["y", "z"]).unwrap();
    let f = parse("y^2*z + d1(z)", &ring).unwrap();
    let g = parse("d2(y) - 3*z", &ring).unwrap();

    let d1 = |p: &DiffPolynomial| p.apply_derivation(1).unwrap();
    println!("f = {f}");
    println!("g = {g}");
    println!("d1(f*g)          = {}", d1(&(&f * &g)));
    println!("d1(f)*g + f*d1(g) = {}", &d1(&f) * &g + &f * &d1(&g));

    let op = DerivationOperator::from_exponents(vec![2, 1]);
    println!("d1^2 d2 (f) = {}", f.apply_operator(&op).unwrap());

    // y -> y*z is a differential substitution: derivatives of y follow.
    let image = BTreeMap::from([("y".to_string(), parse("y*z", &ring).unwrap())]);
    println!("g(y := y*z) = {}", g.substitute(&ring, &image).unwrap());
}
