//! Words in the two long-root one-parameter subgroups x_α, x_{−α}.
//!
//! Words are kept in the free product of the two root subgroups, reduced by
//! x_β(ξ)x_β(ξ′) = x_β(ξ+ξ′) and x_β(0) = 1 only. Any identity that holds in
//! this model also holds in the Steinberg group.

use std::fmt;
use std::sync::Arc;

use crate::algebra::presentation::poly_st;
use crate::algebra::{FieldElem, Presentation, RingElem, RingHom, StandardHoms};
use crate::error::{Error, Result};
use crate::matgroup::{ElemFactor, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Root {
    Alpha,
    MinusAlpha,
}

impl Root {
    pub fn opposite(self) -> Root {
        match self {
            Root::Alpha => Root::MinusAlpha,
            Root::MinusAlpha => Root::Alpha,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub root: Root,
    pub param: RingElem,
}

impl Letter {
    pub fn new(root: Root, param: RingElem) -> Letter {
        Letter { root, param }
    }

    pub fn alpha(param: RingElem) -> Letter {
        Letter::new(Root::Alpha, param)
    }

    pub fn minus_alpha(param: RingElem) -> Letter {
        Letter::new(Root::MinusAlpha, param)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.root {
            Root::Alpha => write!(f, "x_a({})", self.param),
            Root::MinusAlpha => write!(f, "x_-a({})", self.param),
        }
    }
}

/// A reduced word: no zero parameters, no two adjacent letters on the same root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinbergWord {
    pres: Arc<Presentation>,
    letters: Vec<Letter>,
}

impl SteinbergWord {
    pub fn empty(pres: &Arc<Presentation>) -> SteinbergWord {
        SteinbergWord {
            pres: pres.clone(),
            letters: Vec::new(),
        }
    }

    /// Reduces a raw letter list by merging adjacent same-root letters and
    /// dropping zero parameters, until neither applies.
    pub fn reduce(pres: &Arc<Presentation>, raw: Vec<Letter>) -> Result<SteinbergWord> {
        let mut out: Vec<Letter> = Vec::with_capacity(raw.len());
        for l in raw {
            if **l.param.presentation() != **pres {
                return Err(Error::PresentationMismatch(
                    format!("{:?}", l.param.presentation()),
                    format!("{pres:?}"),
                ));
            }
            match out.last_mut() {
                Some(top) if top.root == l.root => {
                    top.param = &top.param + &l.param;
                    if top.param.is_zero() {
                        out.pop();
                    }
                }
                _ if l.param.is_zero() => {}
                _ => out.push(l),
            }
        }
        Ok(SteinbergWord {
            pres: pres.clone(),
            letters: out,
        })
    }

    pub fn from_letters(pres: &Arc<Presentation>, letters: &[Letter]) -> Result<SteinbergWord> {
        SteinbergWord::reduce(pres, letters.to_vec())
    }

    pub fn letter(l: Letter) -> SteinbergWord {
        let pres = l.param.presentation().clone();
        SteinbergWord::reduce(&pres, vec![l]).expect("single letter")
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &SteinbergWord) -> Result<SteinbergWord> {
        if *self.pres != *other.pres {
            return Err(Error::PresentationMismatch(
                format!("{:?}", self.pres),
                format!("{:?}", other.pres),
            ));
        }
        let raw = self.letters.iter().chain(&other.letters).cloned().collect();
        SteinbergWord::reduce(&self.pres, raw)
    }

    pub fn inv(&self) -> SteinbergWord {
        SteinbergWord {
            pres: self.pres.clone(),
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter::new(l.root, l.param.neg()))
                .collect(),
        }
    }

    /// g h g⁻¹ h⁻¹
    pub fn commutator(&self, other: &SteinbergWord) -> Result<SteinbergWord> {
        self.mul(other)?.mul(&self.inv())?.mul(&other.inv())
    }

    /// Applies `h` to every parameter and reduces.
    pub fn map(&self, h: &RingHom) -> Result<SteinbergWord> {
        let raw = self
            .letters
            .iter()
            .map(|l| Ok(Letter::new(l.root, h.apply(&l.param)?)))
            .collect::<Result<Vec<_>>>()?;
        SteinbergWord::reduce(h.target(), raw)
    }

    /// x_α(ξ) ↦ e₁₂(ξ), x_{−α}(ξ) ↦ e₂₁(ξ).
    pub fn elementary_factors(&self) -> Vec<ElemFactor> {
        self.letters
            .iter()
            .map(|l| match l.root {
                Root::Alpha => ElemFactor::new(1, 2, l.param.clone()),
                Root::MinusAlpha => ElemFactor::new(2, 1, l.param.clone()),
            })
            .collect()
    }

    pub fn eval_sl2(&self) -> Mat {
        crate::matgroup::factor_product(&self.pres, 2, &self.elementary_factors())
            .expect("2x2 elementary factors")
    }
}

impl fmt::Display for SteinbergWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn check_u(u: &FieldElem) -> Result<()> {
    if u.is_zero() || u.is_one() {
        return Err(Error::BadParameter(format!("u = {u} must avoid 0 and 1")));
    }
    Ok(())
}

/// The six letters of z over k[s,t]; `first` is the parameter of the first
/// letter (us in z itself).
fn z_letters(pres: &Arc<Presentation>, u: &FieldElem, first: RingElem) -> Result<Vec<Letter>> {
    check_u(u)?;
    let k = u.field();
    let s = RingElem::var(pres, "s");
    let t = RingElem::var(pres, "t");
    let ui = u.inv()?;
    Ok(vec![
        Letter::alpha(first),
        Letter::minus_alpha(t.scale(&ui)),
        Letter::alpha(s.scale(&(&k.one() + u))),
        Letter::minus_alpha(t.clone()),
        Letter::alpha(s),
        Letter::minus_alpha(t.scale(&(&k.one() + &ui))),
    ])
}

/// z = x_α(us) x_{−α}(u⁻¹t) x_α((1+u)s) x_{−α}(t) x_α(s) x_{−α}((1+u⁻¹)t) over k[s,t].
pub fn z_word(u: &FieldElem) -> Result<SteinbergWord> {
    let st = poly_st(u.field());
    let us = RingElem::var(&st, "s").scale(u);
    SteinbergWord::from_letters(&st, &z_letters(&st, u, us)?)
}

/// z with its first parameter replaced by u²s (mutation control).
pub fn z_word_perturbed(u: &FieldElem) -> Result<SteinbergWord> {
    let st = poly_st(u.field());
    let u2s = RingElem::var(&st, "s").scale(&(u * u));
    SteinbergWord::from_letters(&st, &z_letters(&st, u, u2s)?)
}

/// g₁ = [x_α(us), x_{−α}(u⁻¹t)], g₂ = [x_{−α}(u⁻¹t), x_α(s)],
/// g₃ = [x_α(s), x_{−α}((1+u⁻¹)t)].
pub fn commutator_factors(u: &FieldElem) -> Result<[SteinbergWord; 3]> {
    check_u(u)?;
    let k = u.field();
    let st = poly_st(k);
    let s = RingElem::var(&st, "s");
    let t = RingElem::var(&st, "t");
    let ui = u.inv()?;
    let xa = |p: RingElem| SteinbergWord::letter(Letter::alpha(p));
    let xma = |p: RingElem| SteinbergWord::letter(Letter::minus_alpha(p));
    Ok([
        xa(s.scale(u)).commutator(&xma(t.scale(&ui)))?,
        xma(t.scale(&ui)).commutator(&xa(s.clone()))?,
        xa(s).commutator(&xma(t.scale(&(&k.one() + &ui))))?,
    ])
}

/// Residual word of z·(g₁g₂g₃)⁻¹; empty exactly when z = g₁g₂g₃ in the model.
pub fn commutator_residual(z: &SteinbergWord, u: &FieldElem) -> Result<SteinbergWord> {
    let [g1, g2, g3] = commutator_factors(u)?;
    let prod = g1.mul(&g2)?.mul(&g3)?;
    z.mul(&prod.inv())
}

/// Checks z = g₁g₂g₃; on failure the nonempty residual is returned.
pub fn check_lemma_z_commutators(u: &FieldElem) -> Result<(bool, SteinbergWord)> {
    let residual = commutator_residual(&z_word(u)?, u)?;
    Ok((residual.is_empty(), residual))
}

/// z̄ = π_A(z) over A.
pub fn zbar_word(homs: &StandardHoms, u: &FieldElem) -> Result<SteinbergWord> {
    z_word(u)?.map(&homs.pi_a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::matgroup::psi_m_factorization;

    #[test]
    fn reduction_examples() {
        let k = Field::Rational;
        let st = poly_st(k);
        let s = RingElem::var(&st, "s");
        let t = RingElem::var(&st, "t");
        let w = SteinbergWord::from_letters(&st, &[Letter::alpha(s.clone()), Letter::alpha(s.clone())]).unwrap();
        assert!(w.is_empty());
        let u = k.generator();
        let ui = u.inv().unwrap();
        let w = SteinbergWord::from_letters(
            &st,
            &[
                Letter::minus_alpha(t.scale(&ui)),
                Letter::minus_alpha(t.clone()),
                Letter::minus_alpha(t.scale(&(&k.one() + &ui))),
            ],
        )
        .unwrap();
        assert!(w.is_empty());
        let w = SteinbergWord::from_letters(&st, &[Letter::alpha(s.clone()), Letter::minus_alpha(t.clone())]).unwrap();
        assert_eq!(w.len(), 2);
        let c = SteinbergWord::letter(Letter::alpha(s.clone()))
            .commutator(&SteinbergWord::letter(Letter::minus_alpha(t.clone())))
            .unwrap();
        assert_eq!(c.to_string(), "x_a(s) x_-a(t) x_a(s) x_-a(t)");
    }

    #[test]
    fn z_is_product_of_commutators() {
        for (k, u) in [
            (Field::Rational, Field::Rational.generator()),
            (Field::gf4(), Field::gf4().generator()),
        ] {
            let (ok, residual) = check_lemma_z_commutators(&u).unwrap();
            assert!(ok, "{residual}");
            let bad = commutator_residual(&z_word_perturbed(&u).unwrap(), &u).unwrap();
            assert!(!bad.is_empty());
            let homs = StandardHoms::new(k).unwrap();
            let zbar = zbar_word(&homs, &u).unwrap();
            assert!(zbar.map(&homs.zeta).unwrap().is_empty());
            let cert = psi_m_factorization(&homs, &u).unwrap();
            assert_eq!(&z_word(&u).unwrap().eval_sl2(), cert.target());
        }
    }

    #[test]
    fn zbar_parameters() {
        let k = Field::Rational;
        let u = k.generator();
        let homs = StandardHoms::new(k).unwrap();
        let zbar = zbar_word(&homs, &u).unwrap();
        assert_eq!(zbar.len(), 6);
        assert_eq!(zbar.letters()[0].param.to_string(), "u*s");
        assert_eq!(zbar.letters()[1].param.to_string(), "(1/u)*t");
    }

    #[test]
    fn empty_word_evaluates_to_identity() {
        let st = poly_st(Field::Rational);
        assert!(SteinbergWord::empty(&st).eval_sl2().is_identity());
    }
}
