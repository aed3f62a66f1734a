use std::collections::BTreeMap;
use std::sync::Arc;

use deltapoly::algebra::{
    integer, DerivationOperator, DerivativeVariable, DiffPolynomial, Monomial, RingContext,
};
use deltapoly::certify::{
    check_integrability, integrability_residual, is_monic, FirstOrderSystem, LaurentRelation,
    LaurentSum,
};
use deltapoly::homogenize::{dehomogenize, divisible_by, excludes_infinity, homogenize, is_delta_homogeneous};
use deltapoly::lang::parse;
use proptest::prelude::*;

type RawTerm = (i64, Vec<(usize, Vec<u32>)>);

fn raw_poly(m: usize, nvars: usize) -> impl Strategy<Value = Vec<RawTerm>> {
    let factor = (0..nvars, proptest::collection::vec(0u32..=2, m));
    let term = (-9i64..=9, proptest::collection::vec(factor, 0..=3));
    proptest::collection::vec(term, 0..=5)
}

fn small_poly(m: usize, nvars: usize) -> impl Strategy<Value = Vec<RawTerm>> {
    let factor = (0..nvars, proptest::collection::vec(0u32..=1, m));
    let term = (-9i64..=9, proptest::collection::vec(factor, 0..=2));
    proptest::collection::vec(term, 0..=3)
}

fn build(ring: &Arc<RingContext>, raw: &[RawTerm]) -> DiffPolynomial {
    DiffPolynomial::from_terms(
        ring,
        raw.iter().map(|(c, factors)| {
            let mono = factors.iter().fold(Monomial::one(), |acc, (b, e)| {
                acc.mul(&Monomial::var(DerivativeVariable::new(
                    *b,
                    DerivationOperator::from_exponents(e.clone()),
                )))
            });
            (mono, integer(*c))
        }),
    )
}

fn yz() -> Arc<RingContext> {
    RingContext::new(2, ["y", "z"]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn leibniz(a in raw_poly(2, 2), b in raw_poly(2, 2), i in 1usize..=2) {
        let r = yz();
        let (f, g) = (build(&r, &a), build(&r, &b));
        let d = |p: &DiffPolynomial| p.apply_derivation(i).unwrap();
        prop_assert_eq!(d(&(&f * &g)), &d(&f) * &g + &f * &d(&g));
    }

    #[test]
    fn derivations_commute(a in raw_poly(2, 2)) {
        let f = build(&yz(), &a);
        let d12 = f.apply_derivation(1).unwrap().apply_derivation(2).unwrap();
        let d21 = f.apply_derivation(2).unwrap().apply_derivation(1).unwrap();
        prop_assert_eq!(&d12, &d21);
        let op = DerivationOperator::from_exponents(vec![1, 1]);
        prop_assert_eq!(f.apply_operator(&op).unwrap(), d12);
    }

    #[test]
    fn derivation_is_linear(a in raw_poly(2, 2), b in raw_poly(2, 2), p in -5i64..=5, q in -5i64..=5) {
        let r = yz();
        let (f, g) = (build(&r, &a), build(&r, &b));
        let d = |x: &DiffPolynomial| x.apply_derivation(1).unwrap();
        prop_assert_eq!(d(&(&f * p + &g * q)), &d(&f) * p + &d(&g) * q);
    }

    #[test]
    fn ring_axioms(a in raw_poly(2, 2), b in raw_poly(2, 2), c in raw_poly(2, 2)) {
        let r = yz();
        let (f, g, h) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &f * &g + &f * &h);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn substitution_is_a_differential_homomorphism(
        a in raw_poly(2, 2), b in raw_poly(2, 2), img in small_poly(2, 2), i in 1usize..=2,
    ) {
        let r = yz();
        let (f, g) = (build(&r, &a), build(&r, &b));
        let sigma = BTreeMap::from([("y".to_string(), build(&r, &img))]);
        let s = |p: &DiffPolynomial| p.substitute(&r, &sigma).unwrap();
        prop_assert_eq!(s(&(&f * &g)), &s(&f) * &s(&g));
        prop_assert_eq!(s(&(&f + &g)), &s(&f) + &s(&g));
        prop_assert_eq!(s(&f.apply_derivation(i).unwrap()), s(&f).apply_derivation(i).unwrap());
    }

    #[test]
    fn canonical_form_is_stable(a in raw_poly(2, 2)) {
        let f = build(&yz(), &a);
        prop_assert_eq!(&f.canonicalize(), &f);
        prop_assert_eq!(f.canonicalize().canonicalize(), f.canonicalize());
        prop_assert!(f.terms().all(|(_, c)| c != &integer(0)));
    }

    #[test]
    fn parse_print_round_trip(a in raw_poly(2, 2)) {
        let r = yz();
        let f = build(&r, &a);
        let text = f.to_string();
        let back = parse(&text, &r).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn homogenization_round_trip(a in raw_poly(1, 2)) {
        let r = RingContext::new(1, ["y", "z"]).unwrap();
        let f = build(&r, &a);
        prop_assume!(!f.is_zero());
        for vars in [&["y"][..], &["y", "z"][..]] {
            let h = homogenize(&f, vars, "y0").unwrap();
            prop_assert_eq!(&dehomogenize(&h.polynomial, "y0").unwrap(), &f);
            let mut all: Vec<&str> = vars.to_vec();
            all.push("y0");
            prop_assert!(is_delta_homogeneous(&h.polynomial, &all, h.degree).unwrap());
            prop_assert!(!divisible_by(&h.polynomial, "y0"));
        }
    }

    #[test]
    fn integrability_is_symmetric(
        p1 in proptest::collection::vec(-3i64..=3, 1..=4),
        p2 in proptest::collection::vec(-3i64..=3, 1..=4),
    ) {
        let r = RingContext::new(1, ["y"]).unwrap();
        let y = DiffPolynomial::variable(&r, "y").unwrap();
        let poly = |cs: &[i64]| cs.iter().enumerate().fold(DiffPolynomial::zero(&r), |acc, (k, c)| acc + y.pow(k as u32) * *c);
        let sys = FirstOrderSystem::new("y", vec![poly(&p1), poly(&p2)]).unwrap();
        let (a, b) = (integrability_residual(&sys, 1, 2), integrability_residual(&sys, 2, 1));
        prop_assert_eq!(a.compatible, b.compatible);
        prop_assert_eq!(&a.residual, &-&b.residual);
        prop_assert_eq!(check_integrability(&sys).compatible, a.compatible);
    }

    #[test]
    fn monic_and_infinity_agree(cs in proptest::collection::vec(-4i64..=4, 3..=5)) {
        let r = RingContext::new(1, ["y"]).unwrap();
        let y = DiffPolynomial::variable(&r, "y").unwrap();
        let p = cs.iter().enumerate().fold(DiffPolynomial::zero(&r), |acc, (k, c)| acc + y.pow(k as u32) * *c);
        prop_assume!(p.total_degree() >= 2);
        let sys = FirstOrderSystem::new("y", vec![p]).unwrap();
        let eq = sys.equation(1);
        let monic = is_monic(&eq).unwrap().is_some();
        let h = homogenize(&eq, &["y"], "y1").unwrap();
        let inf = excludes_infinity(&h.polynomial, "y", "y1", &BTreeMap::new()).unwrap();
        prop_assert!(monic);
        prop_assert!(inf.excluded);
    }

    #[test]
    fn laurent_print_round_trip(raw in proptest::collection::vec((-4i64..=4, raw_poly(1, 2)), 0..=4)) {
        let r = RingContext::new(1, ["m1", "m0"]).unwrap();
        let sum = LaurentSum::from_terms(&r, raw.iter().map(|(j, a)| (*j, build(&r, a))));
        let rel = LaurentRelation::new(sum);
        let back = LaurentRelation::parse_in(&rel.to_string(), &r).unwrap();
        prop_assert_eq!(back, rel);
    }
}
