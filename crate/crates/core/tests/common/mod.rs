//! Seeded random generators and golden-file helpers shared by the
//! integration tests.
#![allow(dead_code)]

pub mod golden;

use std::sync::Arc;

use deltapoly::algebra::{
    integer, DerivationOperator, DerivativeVariable, DiffPolynomial, Monomial, RingContext,
};
use deltapoly::certify::{FirstOrderSystem, LaurentRelation, LaurentSum};
use rand::rngs::StdRng;
use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_order: u32,
    pub max_degree: u32,
    pub max_terms: usize,
    pub coeff: i64,
}

pub const ACCEPTANCE_SHAPE: Shape = Shape {
    max_order: 2,
    max_degree: 3,
    max_terms: 5,
    coeff: 9,
};

pub fn random_operator(rng: &mut StdRng, m: usize, max_order: u32) -> DerivationOperator {
    let order = rng.gen_range(0..=max_order);
    let mut exps = vec![0u32; m];
    for _ in 0..order {
        exps[rng.gen_range(0..m)] += 1;
    }
    DerivationOperator::from_exponents(exps)
}

/// A monomial of total degree at most `max_degree`.
pub fn random_monomial(rng: &mut StdRng, ring: &RingContext, shape: Shape) -> Monomial {
    let n = ring.variables().len();
    let degree = rng.gen_range(0..=shape.max_degree);
    let mut mono = Monomial::one();
    for _ in 0..degree {
        let v = DerivativeVariable::new(
            rng.gen_range(0..n),
            random_operator(rng, ring.derivations(), shape.max_order),
        );
        mono = mono.mul(&Monomial::var(v));
    }
    mono
}

pub fn random_polynomial(rng: &mut StdRng, ring: &Arc<RingContext>, shape: Shape) -> DiffPolynomial {
    let terms = rng.gen_range(0..=shape.max_terms);
    DiffPolynomial::from_terms(
        ring,
        (0..terms).map(|_| {
            let c = rng.gen_range(-shape.coeff..=shape.coeff);
            (random_monomial(rng, ring, shape), integer(c))
        }),
    )
}

/// Non-zero polynomial whose every term has positive degree.
pub fn random_ideal_element(rng: &mut StdRng, ring: &Arc<RingContext>, shape: Shape) -> DiffPolynomial {
    loop {
        let p = random_polynomial(rng, ring, shape);
        let c = p.constant_term();
        let q = &p - &DiffPolynomial::constant(ring, c);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Seed `1 = Σ c_j x^j` with `min_exp ≤ j ≤ max_exp` and the top exponent present.
pub fn random_seed(
    rng: &mut StdRng,
    m: usize,
    generators: usize,
    min_exp: i64,
    max_exp: i64,
) -> LaurentRelation {
    let names: Vec<String> = (0..generators).map(|k| format!("m{k}")).collect();
    let ring = RingContext::new(m, names).unwrap();
    let shape = Shape {
        max_order: 1,
        max_degree: 2,
        max_terms: 2,
        coeff: 4,
    };
    let mut terms = vec![(max_exp, random_ideal_element(rng, &ring, shape))];
    for j in min_exp..max_exp {
        if rng.gen_bool(0.6) {
            terms.push((j, random_polynomial(rng, &ring, shape)));
        }
    }
    let sum = LaurentSum::from_terms(&ring, terms);
    // Drop constants so every coefficient lies in the ideal.
    let cleaned = LaurentSum::from_terms(
        &ring,
        sum.terms().map(|(j, c)| (j, c - &DiffPolynomial::constant(&ring, c.constant_term()))),
    );
    LaurentRelation::new(cleaned)
}

/// `δ₁y = P`, with `δᵢy = cᵢ·P` for `i ≥ 2` so the system is integrable.
pub fn random_system(rng: &mut StdRng, m: usize, degree: u32) -> FirstOrderSystem {
    let ring = RingContext::new(1, ["y"]).unwrap();
    let y = DiffPolynomial::variable(&ring, "y").unwrap();
    let mut p = y.pow(degree).scale(&nonzero(rng, 5));
    for k in 0..degree {
        if rng.gen_bool(0.5) {
            p = p + y.pow(k).scale(&integer(rng.gen_range(-5..=5)));
        }
    }
    let rhs = (0..m)
        .map(|i| if i == 0 { p.clone() } else { p.scale(&nonzero(rng, 3)) })
        .collect();
    FirstOrderSystem::new("y", rhs).unwrap()
}

fn nonzero(rng: &mut StdRng, bound: i64) -> deltapoly::algebra::Rational {
    loop {
        let n = rng.gen_range(-bound..=bound);
        if n != 0 {
            return deltapoly::algebra::rational(n, rng.gen_range(1..=3));
        }
    }
}
