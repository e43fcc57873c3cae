//! The Milnor square for R′ = k[a,x,y,t]/(t²+t(a²+xy)), pullback sections,
//! lifting of elementary certificates, and the stable-freeness witness.
//!
//! R′ sits in the pullback of k[a,x,y] ⇉ R along ev₀ (t ↦ 0) and
//! ev₁ (t ↦ a²+xy). A module patched from a matrix M over R consists of the
//! pairs (p, q) of vectors over k[a,x,y] with M·π(p) = π(q).

use std::sync::Arc;

use crate::algebra::{FieldElem, Presentation, RingElem, RingHom, StandardHoms};
use crate::error::{Error, Result};
use crate::matgroup::{build_m, factor_product, inverse_factors, ElemFactor, ElementaryCertificate, Mat};

/// ev₀, ev₁ are well defined and π∘ev₀ = π∘ev₁ on generators.
pub fn square_check(homs: &StandardHoms) -> Result<bool> {
    for hom in [&homs.ev0, &homs.ev1] {
        if !hom.source().relators_vanish() {
            return Err(Error::IllDefinedHom {
                hom: hom.name().to_string(),
                relator: String::new(),
                image: String::new(),
            });
        }
    }
    let left = homs.pi_r.compose(&homs.ev0)?;
    let right = homs.pi_r.compose(&homs.ev1)?;
    Ok(left.agrees_with(&right))
}

fn relator_axy(pres: &Arc<Presentation>) -> RingElem {
    let a = RingElem::var(pres, "a");
    &(&a * &a) + &(&RingElem::var(pres, "x") * &RingElem::var(pres, "y"))
}

/// A pair (f, g) over k[a,x,y] with π(f) = π(g).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairElem {
    pub f: RingElem,
    pub g: RingElem,
}

impl PairElem {
    pub fn new(f: RingElem, g: RingElem) -> Result<PairElem> {
        (&g - &f)
            .divide_exact(&relator_axy(f.presentation()))
            .map_err(|e| Error::NotInPullback(format!("({f}, {g}): {e}")))?;
        Ok(PairElem { f, g })
    }
}

/// The element f + t·q of R′ with q = (g−f)/(a²+xy); checks ev₀ = f, ev₁ = g.
pub fn pair_section(homs: &StandardHoms, f: &RingElem, g: &RingElem) -> Result<RingElem> {
    let q = (g - f)
        .divide_exact(&relator_axy(f.presentation()))
        .map_err(|e| Error::NotInPullback(format!("({f}, {g}): {e}")))?;
    let rp = homs.ev0.source();
    let t = RingElem::var(rp, "t");
    let lift = |r: &RingElem| homs.axy_into_rp.apply(r);
    let section = &lift(f)? + &(&t * &lift(&q)?);
    if homs.ev0.apply(&section)? != *f || homs.ev1.apply(&section)? != *g {
        return Err(Error::WitnessFailed(format!("section {section} does not round-trip")));
    }
    Ok(section)
}

/// A lifted elementary matrix over k[a,x,y] with its factors.
#[derive(Clone, Debug)]
pub struct Lift {
    pub matrix: Mat,
    pub factors: Vec<ElemFactor>,
}

/// Lifts factors over R to k[a,x,y] via the normal-form representative of
/// each parameter and checks π(E) = target, det E = 1.
pub fn lift_factors(homs: &StandardHoms, n: usize, factors: &[ElemFactor], target: &Mat) -> Result<Lift> {
    let axy = homs.pi_r.source();
    let lifted = factors
        .iter()
        .map(|f| Ok(ElemFactor::new(f.i, f.j, f.r.transport(axy)?)))
        .collect::<Result<Vec<_>>>()?;
    let matrix = factor_product(axy, n, &lifted)?;
    let image = matrix.map(&homs.pi_r)?;
    if let Some((i, j)) = image.first_difference(target) {
        return Err(Error::LiftVerifyFailed(format!(
            "entry ({}, {}): pi(E) has {}, target has {}",
            i + 1,
            j + 1,
            image.get(i, j),
            target.get(i, j)
        )));
    }
    let det = matrix.det();
    if !det.is_one() {
        return Err(Error::LiftVerifyFailed(format!("det E = {det}")));
    }
    Ok(Lift {
        matrix,
        factors: lifted,
    })
}

pub fn lift_certificate(homs: &StandardHoms, cert: &ElementaryCertificate) -> Result<Lift> {
    lift_factors(homs, cert.dim(), cert.factors(), cert.target())
}

/// Basis b_i = (e_i, E·e_i) of the patched module for π(E), with E⁻¹ built
/// from the reversed, negated factors.
#[derive(Clone, Debug)]
pub struct FreenessWitness {
    pub e: Mat,
    pub e_inv: Mat,
    pub basis: Vec<Vec<PairElem>>,
}

impl FreenessWitness {
    /// Forward map on a coordinate vector of (R′)³ given as a pair (p, q).
    pub fn forward(&self, p: &[RingElem], q: &[RingElem]) -> Result<(Vec<RingElem>, Vec<RingElem>)> {
        Ok((p.to_vec(), self.e.mul_vec(q)?))
    }

    pub fn backward(&self, p: &[RingElem], q: &[RingElem]) -> Result<(Vec<RingElem>, Vec<RingElem>)> {
        Ok((p.to_vec(), self.e_inv.mul_vec(q)?))
    }
}

pub fn freeness_witness(homs: &StandardHoms, lift: &Lift, target: &Mat) -> Result<FreenessWitness> {
    let axy = lift.matrix.presentation();
    let n = lift.matrix.dim();
    let e_inv = factor_product(axy, n, &inverse_factors(&lift.factors))?;
    for prod in [lift.matrix.try_mul(&e_inv)?, e_inv.try_mul(&lift.matrix)?] {
        if !prod.is_identity() {
            return Err(Error::WitnessFailed(format!("E * E^-1 = {prod}")));
        }
    }
    let mut basis = Vec::with_capacity(n);
    for i in 0..n {
        let p: Vec<RingElem> = (0..n)
            .map(|j| if i == j { RingElem::one(axy) } else { RingElem::zero(axy) })
            .collect();
        let q = lift.matrix.column(i);
        if !p_membership_with(homs, target, &p, &q)? {
            return Err(Error::WitnessFailed(format!("basis vector {} not in the patched module", i + 1)));
        }
        // each coordinate pair (π-image of the target column, lift) agrees under π
        let twisted = target.mul_vec(&p.iter().map(|r| homs.pi_r.apply(r)).collect::<Result<Vec<_>>>()?)?;
        let coords = twisted
            .iter()
            .zip(&q)
            .map(|(tw, qi)| PairElem::new(tw.transport(axy)?, qi.clone()))
            .collect::<Result<Vec<_>>>()?;
        basis.push(coords);
    }
    let w = FreenessWitness {
        e: lift.matrix.clone(),
        e_inv,
        basis,
    };
    for i in 0..n {
        let e_i: Vec<RingElem> = (0..n)
            .map(|j| if i == j { RingElem::one(axy) } else { RingElem::zero(axy) })
            .collect();
        let (p, q) = w.forward(&e_i, &e_i)?;
        let (p2, q2) = w.backward(&p, &q)?;
        if p2 != e_i || q2 != e_i {
            return Err(Error::WitnessFailed(format!("round trip of e{} failed", i + 1)));
        }
    }
    Ok(w)
}

/// π(M·p) = π(q) for M over R and p, q over k[a,x,y].
pub fn p_membership_with(homs: &StandardHoms, m: &Mat, p: &[RingElem], q: &[RingElem]) -> Result<bool> {
    let pi = |v: &[RingElem]| v.iter().map(|r| homs.pi_r.apply(r)).collect::<Result<Vec<_>>>();
    Ok(m.mul_vec(&pi(p)?)? == pi(q)?)
}

/// Membership in the module patched from M(u).
pub fn p_membership(homs: &StandardHoms, u: &FieldElem, p: &[RingElem], q: &[RingElem]) -> Result<bool> {
    p_membership_with(homs, &build_m(u)?, p, q)
}

/// h is well defined, (s↦1)∘h = id and (s↦0)∘h lands in k.
pub fn h_extension_checks(homs: &StandardHoms) -> Result<bool> {
    let rp = homs.h.source();
    for rel in rp.relators() {
        let image = homs.h.apply_poly(rel);
        if !image.is_zero() {
            return Err(Error::IllDefinedHom {
                hom: "h".into(),
                relator: rp.format_poly(rel),
                image: image.to_string(),
            });
        }
    }
    let id_ok = homs
        .s_to_one
        .compose(&homs.h)?
        .agrees_with(&RingHom::identity(rp));
    let ev0h = homs.s_to_zero.compose(&homs.h)?;
    let const_ok = ev0h.images().iter().all(|g| g.as_constant().is_some());
    Ok(id_ok && const_ok)
}

/// The pullback pair (f, f + (a²+xy)q).
pub fn pullback_pair(f: &RingElem, q: &RingElem) -> (RingElem, RingElem) {
    let rel = relator_axy(f.presentation());
    (f.clone(), f + &(&rel * q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presentation::poly_axy;
    use crate::algebra::Field;
    use crate::matgroup::build_m0;
    use crate::mennicke::run_lemma21_chain;

    #[test]
    fn square_and_sections() {
        let k = Field::Rational;
        let homs = StandardHoms::new(k).unwrap();
        assert!(square_check(&homs).unwrap());
        let axy = poly_axy(k);
        let x = RingElem::var(&axy, "x");
        let rel = relator_axy(&axy);
        let sec = pair_section(&homs, &x, &(&x + &rel)).unwrap();
        assert_eq!(sec.to_string(), "t + x");
        let sec = pair_section(&homs, &x, &x).unwrap();
        assert_eq!(sec.to_string(), "x");
        let one = RingElem::one(&axy);
        let g = &one + &(&rel * &rel);
        let sec = pair_section(&homs, &one, &g).unwrap();
        assert_eq!(homs.ev1.apply(&sec).unwrap(), g);
        let a = RingElem::var(&axy, "a");
        assert!(matches!(pair_section(&homs, &one, &(&one + &a)), Err(Error::NotInPullback(_))));
    }

    #[test]
    fn lifted_chain() {
        let k = Field::Rational;
        let u = k.generator();
        let homs = StandardHoms::new(k).unwrap();
        let chain = run_lemma21_chain(&u).unwrap();
        let lift = lift_certificate(&homs, &chain.certificate).unwrap();
        let w = freeness_witness(&homs, &lift, chain.certificate.target()).unwrap();
        assert!(w.e.try_mul(&w.e_inv).unwrap().is_identity());
        assert_eq!(w.basis.len(), 3);

        let mut bad = chain.certificate.factors().to_vec();
        let axy_r = bad[0].r.presentation().clone();
        bad[0].r = &bad[0].r + &RingElem::var(&axy_r, "x");
        assert!(matches!(
            lift_factors(&homs, 3, &bad, chain.certificate.target()),
            Err(Error::LiftVerifyFailed(_))
        ));

        let r = build_m0(&u).unwrap().presentation().clone();
        let id = ElementaryCertificate::new(Mat::identity(&r, 3), Vec::new()).unwrap();
        let l = lift_certificate(&homs, &id).unwrap();
        assert!(l.matrix.is_identity());
    }

    #[test]
    fn membership() {
        let k = Field::Rational;
        let u = k.generator();
        let homs = StandardHoms::new(k).unwrap();
        let axy = poly_axy(k);
        let zero = vec![RingElem::zero(&axy); 2];
        assert!(p_membership(&homs, &u, &zero, &zero).unwrap());
        let m = build_m(&u).unwrap();
        let e1 = vec![RingElem::one(&axy), RingElem::zero(&axy)];
        let col: Vec<RingElem> = m.column(0).iter().map(|r| r.transport(&axy).unwrap()).collect();
        assert!(p_membership(&homs, &u, &e1, &col).unwrap());
        assert!(!p_membership(&homs, &u, &e1, &e1).unwrap());
    }

    #[test]
    fn h_checks() {
        let homs = StandardHoms::new(Field::gf4()).unwrap();
        assert!(h_extension_checks(&homs).unwrap());
    }
}
