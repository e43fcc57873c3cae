use std::sync::Arc;

use hermite_core::algebra::presentation::{poly_axy, poly_st, ring_r};
use hermite_core::algebra::{Field, Presentation, RingElem, StandardHoms};
use hermite_core::matgroup::{factor_product, ElemFactor, Mat};
use hermite_core::patching::{p_membership, pair_section, pullback_pair};
use hermite_core::sample::{Sampler, DEFAULT_SEED};
use hermite_core::steinberg::{Letter, Root, SteinbergWord};
use rand::Rng;

fn random_mat(s: &mut Sampler, pres: &Arc<Presentation>, n: usize) -> Mat {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| s.poly(pres, 2, 3)).collect())
        .collect();
    Mat::from_rows(pres, rows).unwrap()
}

fn random_factors(s: &mut Sampler, pres: &Arc<Presentation>, n: usize, len: usize) -> Vec<ElemFactor> {
    (0..len)
        .map(|_| {
            let i = s.rng().gen_range(1..=n);
            let mut j = s.rng().gen_range(1..n);
            if j >= i {
                j += 1;
            }
            ElemFactor::new(i, j, s.poly(pres, 2, 2))
        })
        .collect()
}

fn random_word(s: &mut Sampler, pres: &Arc<Presentation>, len: usize) -> SteinbergWord {
    let letters: Vec<Letter> = (0..len)
        .map(|_| {
            let root = if s.rng().gen_bool(0.5) { Root::Alpha } else { Root::MinusAlpha };
            Letter::new(root, s.poly(pres, 2, 2))
        })
        .collect();
    SteinbergWord::from_letters(pres, &letters).unwrap()
}

#[test]
fn det_is_multiplicative() {
    let r = ring_r(Field::Rational);
    let mut s = Sampler::new(Field::Rational, DEFAULT_SEED);
    for i in 0..200 {
        let n = 2 + i % 3;
        let a = random_mat(&mut s, &r, n);
        let b = random_mat(&mut s, &r, n);
        assert_eq!(a.try_mul(&b).unwrap().det(), &a.det() * &b.det(), "{a} {b}");
    }
}

#[test]
fn elementary_products_have_det_one() {
    let r = ring_r(Field::gf4());
    let mut s = Sampler::new(Field::gf4(), 1);
    for _ in 0..50 {
        let fs = random_factors(&mut s, &r, 3, 6);
        assert!(factor_product(&r, 3, &fs).unwrap().det().is_one());
    }
}

#[test]
fn sp2_is_sl2_and_closed() {
    let r = ring_r(Field::Rational);
    let mut s = Sampler::new(Field::Rational, 2);
    for _ in 0..100 {
        let m = random_mat(&mut s, &r, 2);
        assert_eq!(m.is_symplectic().unwrap(), m.det().is_one(), "{m}");
        let g = factor_product(&r, 2, &random_factors(&mut s, &r, 2, 4)).unwrap();
        let h = factor_product(&r, 2, &random_factors(&mut s, &r, 2, 4)).unwrap();
        assert!(g.try_mul(&h).unwrap().is_symplectic().unwrap());
        assert!(g.block_sum(&h).unwrap().is_symplectic().unwrap());
    }
}

#[test]
fn word_reduction_is_idempotent_and_associative() {
    let st = poly_st(Field::Rational);
    let mut s = Sampler::new(Field::Rational, 4);
    for _ in 0..100 {
        let w = random_word(&mut s, &st, 8);
        assert_eq!(SteinbergWord::from_letters(&st, w.letters()).unwrap(), w);
        let v = random_word(&mut s, &st, 5);
        let x = random_word(&mut s, &st, 5);
        assert_eq!(w.mul(&v).unwrap().mul(&x).unwrap(), w.mul(&v.mul(&x).unwrap()).unwrap());
        assert!(w.mul(&w.inv()).unwrap().is_empty());
        let mut raw: Vec<Letter> = w.letters().to_vec();
        raw.extend(v.letters().iter().cloned());
        assert_eq!(SteinbergWord::from_letters(&st, &raw).unwrap(), w.mul(&v).unwrap());
    }
}

#[test]
fn evaluation_is_a_homomorphism() {
    let st = poly_st(Field::gf4());
    let mut s = Sampler::new(Field::gf4(), 5);
    for _ in 0..100 {
        let w = random_word(&mut s, &st, 6);
        let v = random_word(&mut s, &st, 6);
        let prod = w.mul(&v).unwrap().eval_sl2();
        assert_eq!(prod, w.eval_sl2().try_mul(&v.eval_sl2()).unwrap());
        assert!(w.inv().eval_sl2().try_mul(&w.eval_sl2()).unwrap().is_identity());
    }
}

#[test]
fn word_map_is_functorial() {
    let k = Field::Rational;
    let homs = StandardHoms::new(k).unwrap();
    let r = ring_r(k);
    let composite = homs.pi_a.compose(&homs.psi).unwrap();
    let mut s = Sampler::new(k, 6);
    for _ in 0..100 {
        let w = random_word(&mut s, &r, 6);
        let stepwise = w.map(&homs.psi).unwrap().map(&homs.pi_a).unwrap();
        assert_eq!(stepwise, w.map(&composite).unwrap());
        assert_eq!(w.map(&homs.psi).unwrap().eval_sl2(), w.eval_sl2().map(&homs.psi).unwrap());
    }
}

#[test]
fn pullback_sections_round_trip() {
    let k = Field::Rational;
    let homs = StandardHoms::new(k).unwrap();
    let axy = poly_axy(k);
    for i in 0..100 {
        let mut s = Sampler::for_trial(k, DEFAULT_SEED, i);
        let f = s.poly(&axy, 6, 6);
        let q = s.poly(&axy, 4, 4);
        let (f, g) = pullback_pair(&f, &q);
        let sec = pair_section(&homs, &f, &g).unwrap();
        assert_eq!(homs.ev0.apply(&sec).unwrap(), f);
        assert_eq!(homs.ev1.apply(&sec).unwrap(), g);
    }
}

#[test]
fn patched_module_is_closed() {
    let k = Field::Rational;
    let u = k.generator();
    let homs = StandardHoms::new(k).unwrap();
    let axy = poly_axy(k);
    let m = hermite_core::matgroup::build_m(&u).unwrap();
    let lift = |r: &RingElem| r.transport(&axy).unwrap();
    let mut s = Sampler::new(k, 8);
    let mut members = Vec::new();
    for _ in 0..20 {
        let p: Vec<RingElem> = (0..2).map(|_| s.poly(&axy, 3, 3)).collect();
        let pi_p: Vec<RingElem> = p.iter().map(|x| homs.pi_r.apply(x).unwrap()).collect();
        let mut q: Vec<RingElem> = m.mul_vec(&pi_p).unwrap().iter().map(lift).collect();
        let rel = pullback_pair(&RingElem::zero(&axy), &s.poly(&axy, 2, 2)).1;
        q[0] = &q[0] + &rel;
        assert!(p_membership(&homs, &u, &p, &q).unwrap());
        members.push((p, q));
    }
    for w in members.windows(2) {
        let (p1, q1) = &w[0];
        let (p2, q2) = &w[1];
        let c = s.poly(&axy, 2, 2);
        let p: Vec<RingElem> = p1.iter().zip(p2).map(|(a, b)| a + &(&c * b)).collect();
        let q: Vec<RingElem> = q1.iter().zip(q2).map(|(a, b)| a + &(&c * b)).collect();
        assert!(p_membership(&homs, &u, &p, &q).unwrap());
    }
}
