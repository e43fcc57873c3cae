mod common;

use hermite_core::algebra::monomial::add_term;
use hermite_core::algebra::parse::{parse_field_elem, parse_ring_elem};
use hermite_core::algebra::presentation::{named_presentations, ring_a, ring_r};
use hermite_core::algebra::{Field, Poly};
use hermite_core::sample::{Sampler, DEFAULT_DEGREE, DEFAULT_SEED};
use proptest::prelude::*;
use rand::seq::SliceRandom;

#[test]
fn ring_axioms_f2u() {
    common::ring_axiom_sweep(Field::Rational, 1000, DEFAULT_DEGREE, DEFAULT_SEED).unwrap();
}

#[test]
fn ring_axioms_gf8() {
    common::ring_axiom_sweep(Field::gf8(), 300, DEFAULT_DEGREE, DEFAULT_SEED).unwrap();
}

#[test]
fn homomorphisms_respect_operations() {
    common::hom_sweep(Field::Rational, 1000, DEFAULT_DEGREE, DEFAULT_SEED).unwrap();
    common::hom_sweep(Field::gf4(), 200, DEFAULT_DEGREE, 7).unwrap();
}

#[test]
fn all_presentations_confluent() {
    for field in [Field::Rational, Field::gf4()] {
        for p in named_presentations(field) {
            p.check_confluence().unwrap();
            assert!(p.relators_vanish(), "{}", p.id());
        }
    }
}

#[test]
fn normal_form_ignores_rule_order() {
    let field = Field::Rational;
    for p in named_presentations(field) {
        let mut s = Sampler::new(field, 3);
        let mut order: Vec<usize> = (0..p.rules().len()).collect();
        for _ in 0..50 {
            let mut raw = Poly::new();
            for _ in 0..6 {
                let exps = s.exponents(p.nvars(), 8);
                add_term(&mut raw, p.monomial(&exps), s.nonzero_scalar());
            }
            order.shuffle(s.rng());
            assert_eq!(p.reduce_with_order(raw.clone(), &order), p.reduce(raw), "{}", p.id());
        }
    }
}

#[test]
fn quotient_relations_hold() {
    let a = ring_a(Field::Rational);
    for src in ["s^2", "s*t", "t^2", "(1+s)*(1+s) + 1"] {
        assert!(parse_ring_elem(&a, src).unwrap().is_zero(), "{src}");
    }
    let r = ring_r(Field::Rational);
    let rel = parse_ring_elem(&r, "a^2 + x*y").unwrap();
    assert!(rel.is_zero());
    let unit = parse_ring_elem(&a, "u + s + (1/u)*t").unwrap();
    let inv = unit.inverse().unwrap();
    assert!((&unit * &inv).is_one());
}

fn gf_elem(bits: u64) -> hermite_core::algebra::FieldElem {
    Field::gf8().from_bits(bits & 7)
}

proptest! {
    #[test]
    fn gf8_field_laws(a in 0u64..8, b in 0u64..8, c in 0u64..8) {
        let (a, b, c) = (gf_elem(a), gf_elem(b), gf_elem(c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert!(a.is_square().0);
    }

    #[test]
    fn rational_parse_inverse(n in 1u64..64, d in 1u64..64) {
        let src = format!("({})/({})", poly_src(n), poly_src(d));
        let x = parse_field_elem(Field::Rational, &src).unwrap();
        prop_assert!((&x * &x.inv().unwrap()).is_one());
        let back = parse_field_elem(Field::Rational, &x.to_string()).unwrap();
        prop_assert_eq!(back, x);
    }
}

fn poly_src(bits: u64) -> String {
    let terms: Vec<String> = (0..6).filter(|i| bits >> i & 1 == 1).map(|i| format!("u^{i}")).collect();
    terms.join("+")
}
