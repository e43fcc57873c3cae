use std::sync::Arc;

use super::field::{Field, FieldElem};
use super::monomial::Poly;
use super::presentation::{
    ground, poly_axy, poly_st, poly_x, ring_a, ring_r, ring_rp, ring_rps, Presentation,
};
use super::ring::RingElem;
use crate::error::{Error, Result};

/// k-algebra homomorphism given by the images of the source generators.
///
/// Construction checks that every source relator maps to zero.
#[derive(Clone, Debug)]
pub struct RingHom {
    name: String,
    source: Arc<Presentation>,
    target: Arc<Presentation>,
    images: Vec<RingElem>,
}

impl RingHom {
    pub fn new(
        name: &str,
        source: &Arc<Presentation>,
        target: &Arc<Presentation>,
        images: Vec<RingElem>,
    ) -> Result<RingHom> {
        if images.len() != source.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "{name}: {} images for {} generators",
                images.len(),
                source.nvars()
            )));
        }
        if source.field() != target.field() {
            return Err(Error::FieldMismatch(
                source.field().name(),
                target.field().name(),
            ));
        }
        for img in &images {
            if **img.presentation() != **target {
                return Err(Error::PresentationMismatch(
                    format!("{:?}", img.presentation()),
                    format!("{target:?}"),
                ));
            }
        }
        let hom = RingHom {
            name: name.to_string(),
            source: source.clone(),
            target: target.clone(),
            images,
        };
        for rel in source.relators() {
            let image = hom.apply_poly(rel);
            if !image.is_zero() {
                return Err(Error::IllDefinedHom {
                    hom: name.to_string(),
                    relator: source.format_poly(rel),
                    image: image.to_string(),
                });
            }
        }
        Ok(hom)
    }

    /// Hom given by generator-name → image pairs; unnamed generators map to themselves
    /// (which requires the target to have a generator of the same name).
    pub fn by_names(
        name: &str,
        source: &Arc<Presentation>,
        target: &Arc<Presentation>,
        assignments: &[(&str, RingElem)],
    ) -> Result<RingHom> {
        let images = source
            .vars()
            .iter()
            .map(|v| {
                assignments
                    .iter()
                    .find(|(n, _)| n == v)
                    .map(|(_, img)| Ok(img.clone()))
                    .unwrap_or_else(|| {
                        target
                            .var_index(v)
                            .map(|_| RingElem::var(target, v))
                            .ok_or_else(|| Error::BadParameter(format!("{name}: no image for {v}")))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        RingHom::new(name, source, target, images)
    }

    pub fn identity(pres: &Arc<Presentation>) -> RingHom {
        RingHom::by_names("id", pres, pres, &[]).expect("identity is well defined")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<Presentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation> {
        &self.target
    }

    pub fn images(&self) -> &[RingElem] {
        &self.images
    }

    /// Image of a polynomial in the source generators (normalized or not).
    pub fn apply_poly(&self, poly: &Poly) -> RingElem {
        let mut powers: Vec<Vec<RingElem>> = self
            .images
            .iter()
            .map(|img| vec![RingElem::one(&self.target), img.clone()])
            .collect();
        let mut acc = RingElem::zero(&self.target);
        for (m, c) in poly {
            let mut term = RingElem::constant(&self.target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &self.images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    term = &term * &powers[i][e];
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    pub fn apply(&self, f: &RingElem) -> Result<RingElem> {
        if **f.presentation() != *self.source {
            return Err(Error::PresentationMismatch(
                format!("{:?}", f.presentation()),
                format!("{:?}", self.source),
            ));
        }
        Ok(self.apply_poly(f.terms()))
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &RingHom) -> Result<RingHom> {
        if *inner.target != *self.source {
            return Err(Error::PresentationMismatch(
                format!("{:?}", inner.target),
                format!("{:?}", self.source),
            ));
        }
        let images = inner
            .images
            .iter()
            .map(|img| self.apply(img))
            .collect::<Result<Vec<_>>>()?;
        RingHom::new(
            &format!("{}∘{}", self.name, inner.name),
            &inner.source,
            &self.target,
            images,
        )
    }

    /// Agreement on generators (and hence everywhere).
    pub fn agrees_with(&self, other: &RingHom) -> bool {
        *self.source == *other.source && *self.target == *other.target && self.images == other.images
    }
}

/// Every homomorphism the verification needs, built for one coefficient field.
#[derive(Clone, Debug)]
pub struct StandardHoms {
    pub field: Field,
    /// R → k[s,t]: x ↦ t, a ↦ st, y ↦ s²t
    pub psi: RingHom,
    /// k[s,t] → A
    pub pi_a: RingHom,
    /// k[a,x,y] → R
    pub pi_r: RingHom,
    /// k[x] → A: x ↦ t̄
    pub phi: RingHom,
    /// A → A: s̄ ↦ 0, t̄ ↦ t̄
    pub zeta: RingHom,
    /// R → k[x]: a ↦ 0, x ↦ x, y ↦ 0 (the factorization of π_A∘ψ)
    pub factor: RingHom,
    /// k → k[s,t]
    pub iota: RingHom,
    /// k → R
    pub iota_prime: RingHom,
    /// R′ → k[a,x,y], t ↦ 0
    pub ev0: RingHom,
    /// R′ → k[a,x,y], t ↦ a²+xy
    pub ev1: RingHom,
    /// R′ → R′[s], g ↦ s^|g| g with |t| = 2, |a| = |x| = |y| = 1
    pub h: RingHom,
    /// R′[s] → R′, s ↦ 1
    pub s_to_one: RingHom,
    /// R′[s] → R′, s ↦ 0
    pub s_to_zero: RingHom,
    /// k[a,x,y] → R′
    pub axy_into_rp: RingHom,
}

impl StandardHoms {
    pub fn new(field: Field) -> Result<StandardHoms> {
        let st = poly_st(field);
        let px = poly_x(field);
        let axy = poly_axy(field);
        let r = ring_r(field);
        let a = ring_a(field);
        let rp = ring_rp(field);
        let rps = ring_rps(field);
        let k = ground(field);

        let s = RingElem::var(&st, "s");
        let t = RingElem::var(&st, "t");
        let psi = RingHom::by_names(
            "psi",
            &r,
            &st,
            &[
                ("a", &s * &t),
                ("x", t.clone()),
                ("y", &(&s * &s) * &t),
            ],
        )?;
        let pi_a = RingHom::by_names("pi_A", &st, &a, &[])?;
        let pi_r = RingHom::by_names("pi_R", &axy, &r, &[])?;
        let phi = RingHom::by_names("phi", &px, &a, &[("x", RingElem::var(&a, "t"))])?;
        let zeta = RingHom::by_names("zeta", &a, &a, &[("s", RingElem::zero(&a))])?;
        let factor = RingHom::by_names(
            "factor",
            &r,
            &px,
            &[("a", RingElem::zero(&px)), ("y", RingElem::zero(&px))],
        )?;
        let iota = RingHom::new("iota", &k, &st, Vec::new())?;
        let iota_prime = RingHom::new("iota'", &k, &r, Vec::new())?;

        let rel = {
            let av = RingElem::var(&axy, "a");
            &(&av * &av) + &(&RingElem::var(&axy, "x") * &RingElem::var(&axy, "y"))
        };
        let ev0 = RingHom::by_names("ev_t0", &rp, &axy, &[("t", RingElem::zero(&axy))])?;
        let ev1 = RingHom::by_names("ev_t1", &rp, &axy, &[("t", rel)])?;

        let sv = RingElem::var(&rps, "s");
        let h = RingHom::by_names(
            "h",
            &rp,
            &rps,
            &["a", "x", "y", "t"].map(|g| {
                let weight = if g == "t" { 2 } else { 1 };
                (g, &sv.pow(weight) * &RingElem::var(&rps, g))
            }),
        )?;
        let s_to_one = RingHom::by_names("ev_s1", &rps, &rp, &[("s", RingElem::one(&rp))])?;
        let s_to_zero = RingHom::by_names("ev_s0", &rps, &rp, &[("s", RingElem::zero(&rp))])?;
        let axy_into_rp = RingHom::by_names("incl", &axy, &rp, &[])?;

        Ok(StandardHoms {
            field,
            psi,
            pi_a,
            pi_r,
            phi,
            zeta,
            factor,
            iota,
            iota_prime,
            ev0,
            ev1,
            h,
            s_to_one,
            s_to_zero,
            axy_into_rp,
        })
    }

    pub fn all(&self) -> Vec<&RingHom> {
        vec![
            &self.psi,
            &self.pi_a,
            &self.pi_r,
            &self.phi,
            &self.zeta,
            &self.factor,
            &self.iota,
            &self.iota_prime,
            &self.ev0,
            &self.ev1,
            &self.h,
            &self.s_to_one,
            &self.s_to_zero,
            &self.axy_into_rp,
        ]
    }

    /// Machine-checks the factorization identities on generators:
    /// ι = ψ∘ι′ (on the constants 1 and `sample`), π_A∘ψ = φ∘factor,
    /// ζ∘φ = φ, (s↦1)∘h = id, and (s↦0)∘h lands in the constants.
    pub fn check_factorizations(&self, sample: &FieldElem) -> Result<()> {
        let fail = |what: &str| Err(Error::VerifyFailed(what.to_string()));
        let k = self.iota.source().clone();
        for c in [self.field.one(), sample.clone()] {
            let c = RingElem::constant(&k, c);
            if self.iota.apply(&c)? != self.psi.apply(&self.iota_prime.apply(&c)?)? {
                return fail("iota = psi . iota'");
            }
        }
        if !self
            .pi_a
            .compose(&self.psi)?
            .agrees_with(&self.phi.compose(&self.factor)?)
        {
            return fail("pi_A . psi = phi . factor");
        }
        if !self.zeta.compose(&self.phi)?.agrees_with(&self.phi) {
            return fail("zeta . phi = phi");
        }
        let ev1h = self.s_to_one.compose(&self.h)?;
        if !ev1h.agrees_with(&RingHom::identity(self.h.source())) {
            return fail("ev_1 . h = id");
        }
        let ev0h = self.s_to_zero.compose(&self.h)?;
        if ev0h.images().iter().any(|img| img.as_constant().is_none()) {
            return fail("ev_0 . h factors through k");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_and_zeta_examples() {
        let k = Field::Rational;
        let homs = StandardHoms::new(k).unwrap();
        let r = homs.psi.source().clone();
        let a = RingElem::var(&r, "a");
        let img = homs.psi.apply(&(&a * &a)).unwrap();
        let st = homs.psi.target().clone();
        assert_eq!(img, RingElem::term(&st, k.one(), &[2, 2]));
        let ring = homs.zeta.source().clone();
        assert!(homs.zeta.apply(&RingElem::var(&ring, "s")).unwrap().is_zero());
        let axy = homs.pi_r.source().clone();
        let rel = &(&RingElem::var(&axy, "a") * &RingElem::var(&axy, "a"))
            + &(&RingElem::var(&axy, "x") * &RingElem::var(&axy, "y"));
        assert!(homs.pi_r.apply(&rel).unwrap().is_zero());
    }

    #[test]
    fn h_on_generators() {
        let k = Field::gf4();
        let homs = StandardHoms::new(k).unwrap();
        let rp = homs.h.source().clone();
        let rps = homs.h.target().clone();
        let ht = homs.h.apply(&RingElem::var(&rp, "t")).unwrap();
        assert_eq!(ht, RingElem::term(&rps, k.one(), &[0, 0, 0, 1, 2]));
        let ha = homs.h.apply(&RingElem::var(&rp, "a")).unwrap();
        assert_eq!(ha, RingElem::term(&rps, k.one(), &[1, 0, 0, 0, 1]));
    }

    #[test]
    fn factorizations_hold() {
        for k in [Field::Rational, Field::gf4(), Field::gf2()] {
            let homs = StandardHoms::new(k).unwrap();
            homs.check_factorizations(&k.generator()).unwrap();
            let phi_x = homs.zeta.compose(&homs.phi).unwrap().images()[0].clone();
            assert_eq!(phi_x, homs.phi.images()[0]);
        }
    }

    #[test]
    fn ill_defined_hom_names_relator() {
        let k = Field::gf2();
        let r = ring_r(k);
        let st = poly_st(k);
        // a ↦ s, x ↦ t, y ↦ t is not well defined: a² + xy ↦ s² + t²
        let err = RingHom::by_names(
            "bad",
            &r,
            &st,
            &[
                ("a", RingElem::var(&st, "s")),
                ("x", RingElem::var(&st, "t")),
                ("y", RingElem::var(&st, "t")),
            ],
        )
        .unwrap_err();
        match err {
            Error::IllDefinedHom { relator, image, .. } => {
                assert_eq!(relator, "a^2 + x*y");
                assert_eq!(image, "s^2 + t^2");
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn milnor_square_legs_kill_relator() {
        let k = Field::Rational;
        let homs = StandardHoms::new(k).unwrap();
        let rp = homs.ev0.source().clone();
        let t = RingElem::var(&rp, "t");
        let pi0 = homs.pi_r.compose(&homs.ev0).unwrap();
        let pi1 = homs.pi_r.compose(&homs.ev1).unwrap();
        assert!(pi0.agrees_with(&pi1));
        assert!(pi0.apply(&t).unwrap().is_zero());
    }
}
