//! Seeded random elements for property sweeps.
//!
//! Scalars come from the degree-≤2 slice of the field (polynomials of degree
//! at most 2 in u or w); monomials have total degree at most the bound D.
//! Each trial index gets its own ChaCha stream, so sweeps are reproducible
//! regardless of how they are scheduled.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Field, FieldElem, Presentation, RingElem};

pub const DEFAULT_DEGREE: u32 = 6;
pub const DEFAULT_SEED: u64 = 0;

pub struct Sampler {
    rng: ChaCha8Rng,
    field: Field,
}

impl Sampler {
    pub fn new(field: Field, seed: u64) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            field,
        }
    }

    /// Independent stream for trial `index` under `seed`.
    pub fn for_trial(field: Field, seed: u64, index: u64) -> Sampler {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index + 1);
        Sampler { rng, field }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn scalar(&mut self) -> FieldElem {
        self.field.from_bits(self.rng.gen_range(0..8))
    }

    pub fn nonzero_scalar(&mut self) -> FieldElem {
        loop {
            let c = self.scalar();
            if !c.is_zero() {
                return c;
            }
        }
    }

    /// Scalar outside {0, 1}; for GF(2) no such element exists and 1 is returned.
    pub fn scalar_not_0_1(&mut self) -> FieldElem {
        if self.field.order() == Some(2) {
            return self.field.one();
        }
        loop {
            let c = self.scalar();
            if !c.is_zero() && !c.is_one() {
                return c;
            }
        }
    }

    /// Exponent vector of total degree at most `max_deg`.
    pub fn exponents(&mut self, nvars: usize, max_deg: u32) -> Vec<u16> {
        let mut exps = vec![0u16; nvars];
        if nvars == 0 {
            return exps;
        }
        let d = self.rng.gen_range(0..=max_deg);
        for _ in 0..d {
            exps[self.rng.gen_range(0..nvars)] += 1;
        }
        exps
    }

    /// Up to `max_terms` random terms of total degree ≤ `max_deg`, normalized.
    pub fn poly(&mut self, pres: &Arc<Presentation>, max_deg: u32, max_terms: usize) -> RingElem {
        let nterms = self.rng.gen_range(0..=max_terms);
        let mut acc = RingElem::zero(pres);
        for _ in 0..nterms {
            let exps = self.exponents(pres.nvars(), max_deg);
            let c = self.nonzero_scalar();
            acc = &acc + &RingElem::term(pres, c, &exps);
        }
        acc
    }

    /// Random element without constant term.
    pub fn poly_no_constant(
        &mut self,
        pres: &Arc<Presentation>,
        max_deg: u32,
        max_terms: usize,
    ) -> RingElem {
        let p = self.poly(pres, max_deg, max_terms);
        &p - &RingElem::constant(pres, p.constant_term())
    }

    /// Nonzero constant plus a random element without constant term; a unit
    /// whenever the non-constant part is nilpotent (e.g. in A).
    pub fn local_unit(&mut self, pres: &Arc<Presentation>, max_deg: u32) -> RingElem {
        let c = RingElem::constant(pres, self.nonzero_scalar());
        &c + &self.poly_no_constant(pres, max_deg, 4)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presentation::{ring_a, ring_r};

    #[test]
    fn reproducible() {
        let k = Field::Rational;
        let r = ring_r(k);
        let a: Vec<RingElem> = (0..5).map(|i| Sampler::for_trial(k, 7, i).poly(&r, 6, 5)).collect();
        let b: Vec<RingElem> = (0..5).map(|i| Sampler::for_trial(k, 7, i).poly(&r, 6, 5)).collect();
        assert_eq!(a, b);
        let mut s = Sampler::new(k, 0);
        for _ in 0..100 {
            let p = s.poly(&r, 6, 5);
            assert!(p.total_degree().unwrap_or(0) <= 6);
        }
    }

    #[test]
    fn local_units_invert() {
        let k = Field::gf4();
        let a = ring_a(k);
        let mut s = Sampler::new(k, 3);
        for _ in 0..50 {
            let u = s.local_unit(&a, 3);
            assert!((&u * &u.inverse().unwrap()).is_one());
        }
    }
}
