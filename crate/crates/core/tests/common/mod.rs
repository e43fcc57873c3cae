//! Seeded sweeps shared by the property tests and the acceptance suite.
#![allow(dead_code)]

use hermite_core::algebra::presentation::named_presentations;
use hermite_core::algebra::{Field, RingElem, StandardHoms};
use hermite_core::exec::ExecMode;
use hermite_core::sample::Sampler;

pub const TERMS: usize = 4;

/// Ring axioms on `samples` triples, spread over the named presentations.
pub fn ring_axiom_sweep(field: Field, samples: u64, degree: u32, seed: u64) -> Result<u64, String> {
    let pres = named_presentations(field);
    let results = ExecMode::Parallel.map_range(0..samples, |i| {
        let p = &pres[(i as usize) % pres.len()];
        let mut s = Sampler::for_trial(field, seed, i);
        let a = s.poly(p, degree, TERMS);
        let b = s.poly(p, degree, TERMS);
        let c = s.poly(p, degree, TERMS);
        let one = RingElem::one(p);
        let zero = RingElem::zero(p);
        let checks = [
            ("add assoc", &(&a + &b) + &c == &a + &(&b + &c)),
            ("add comm", &a + &b == &b + &a),
            ("add zero", &a + &zero == a),
            ("add inverse", (&a + &a.neg()).is_zero()),
            ("mul assoc", &(&a * &b) * &c == &a * &(&b * &c)),
            ("mul comm", &a * &b == &b * &a),
            ("mul one", &a * &one == a),
            ("distributive", &a * &(&b + &c) == &(&a * &b) + &(&a * &c)),
            ("char 2", (&a + &a).is_zero()),
        ];
        match checks.iter().find(|(_, ok)| !ok) {
            Some((name, _)) => Err(format!("{name} fails in {} for a = {a}, b = {b}, c = {c}", p.id())),
            None => Ok(()),
        }
    });
    results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(samples)
}

/// h(f + g) = h(f) + h(g), h(fg) = h(f)h(g), h(1) = 1 for every standard hom.
pub fn hom_sweep(field: Field, samples: u64, degree: u32, seed: u64) -> Result<u64, String> {
    let homs = StandardHoms::new(field).map_err(|e| e.to_string())?;
    let all = homs.all();
    let results = ExecMode::Parallel.map_range(0..samples, |i| {
        let h = all[(i as usize) % all.len()];
        let src = h.source();
        let mut s = Sampler::for_trial(field, seed, i);
        let f = s.poly(src, degree, TERMS);
        let g = s.poly(src, degree, TERMS);
        let ap = |x: &RingElem| h.apply(x).map_err(|e| e.to_string());
        let ok = ap(&(&f + &g))? == &ap(&f)? + &ap(&g)?
            && ap(&(&f * &g))? == &ap(&f)? * &ap(&g)?
            && ap(&RingElem::one(src))?.is_one();
        if ok {
            Ok(())
        } else {
            Err(format!("{} fails on f = {f}, g = {g}", h.name()))
        }
    });
    results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(samples)
}
