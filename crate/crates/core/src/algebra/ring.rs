use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::field::{Field, FieldElem};
use super::monomial::{add_term, Monomial, Poly};
use super::presentation::Presentation;
use crate::error::{Error, Result};

/// Nilpotency search bound for [`RingElem::inverse`]: n^(2^m) = 0 with m ≤ 8.
pub const NILPOTENCY_BOUND: u32 = 8;

/// Element of a presented ring, always in normal form.
#[derive(Clone)]
pub struct RingElem {
    pres: Arc<Presentation>,
    terms: Poly,
}

impl RingElem {
    pub fn zero(pres: &Arc<Presentation>) -> Self {
        RingElem {
            pres: pres.clone(),
            terms: Poly::new(),
        }
    }

    pub fn one(pres: &Arc<Presentation>) -> Self {
        RingElem::constant(pres, pres.field().one())
    }

    pub fn constant(pres: &Arc<Presentation>, c: FieldElem) -> Self {
        assert_eq!(c.field(), pres.field(), "constant from another field");
        let mut terms = Poly::new();
        add_term(&mut terms, Monomial::one(pres.nvars()), c);
        RingElem {
            pres: pres.clone(),
            terms,
        }
    }

    /// The generator with the given name; panics when absent.
    pub fn var(pres: &Arc<Presentation>, name: &str) -> Self {
        let i = pres
            .var_index(name)
            .unwrap_or_else(|| panic!("{} has no generator {name}", pres.id()));
        let mut exps = vec![0u16; pres.nvars()];
        exps[i] = 1;
        RingElem::term(pres, pres.field().one(), &exps)
    }

    /// `c · x^exps`, normalized.
    pub fn term(pres: &Arc<Presentation>, c: FieldElem, exps: &[u16]) -> Self {
        let mut terms = Poly::new();
        add_term(&mut terms, pres.monomial(exps), c);
        RingElem::from_poly(pres, terms)
    }

    /// Normalizes an arbitrary polynomial in the generators.
    pub fn from_poly(pres: &Arc<Presentation>, poly: Poly) -> Self {
        RingElem {
            pres: pres.clone(),
            terms: pres.reduce(poly),
        }
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn field(&self) -> Field {
        self.pres.field()
    }

    pub fn terms(&self) -> &Poly {
        &self.terms
    }

    pub fn into_terms(self) -> Poly {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> FieldElem {
        self.terms
            .first_key_value()
            .filter(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field().zero())
    }

    /// Some(c) when the element is the constant c.
    pub fn as_constant(&self) -> Option<FieldElem> {
        match self.terms.len() {
            0 => Some(self.field().zero()),
            1 if self.terms.keys().next().unwrap().is_one() => Some(self.constant_term()),
            _ => None,
        }
    }

    /// Coefficient of x^exps.
    pub fn coeff(&self, exps: &[u16]) -> FieldElem {
        self.terms
            .get(&self.pres.monomial(exps))
            .cloned()
            .unwrap_or_else(|| self.field().zero())
    }

    /// Maximal total degree of a term, `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &FieldElem)> {
        self.terms.last_key_value()
    }

    fn check(&self, other: &RingElem) -> Result<()> {
        if *self.pres != *other.pres {
            return Err(Error::PresentationMismatch(
                format!("{:?}", self.pres),
                format!("{:?}", other.pres),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        let (mut big, small) = if self.terms.len() >= other.terms.len() {
            (self.terms.clone(), &other.terms)
        } else {
            (other.terms.clone(), &self.terms)
        };
        for (m, c) in small {
            add_term(&mut big, m.clone(), c.clone());
        }
        // sums of normal forms are normal forms
        Ok(RingElem {
            pres: self.pres.clone(),
            terms: big,
        })
    }

    pub fn try_mul(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        let mut prod = Poly::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                add_term(&mut prod, m1.mul(m2), c1 * c2);
            }
        }
        Ok(RingElem::from_poly(&self.pres, prod))
    }

    pub fn try_sub(&self, other: &RingElem) -> Result<RingElem> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> RingElem {
        RingElem {
            pres: self.pres.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> RingElem {
        if c.is_zero() {
            return RingElem::zero(&self.pres);
        }
        RingElem {
            pres: self.pres.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> RingElem {
        let mut acc = RingElem::one(&self.pres);
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Inverse of `c + n` with c a nonzero constant and n nilpotent.
    ///
    /// Writes c⁻¹f = 1 + m, finds the least j ≤ 8 with m^(2^j) = 0 and
    /// returns c⁻¹(1−m)(1+m²)(1+m⁴)…(1+m^(2^(j−1))). The product is checked
    /// against f before returning.
    pub fn inverse(&self) -> Result<RingElem> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::NotAUnit(format!("{self} has zero constant term")));
        }
        let c_inv = c.inv()?;
        let one = RingElem::one(&self.pres);
        let m = &self.scale(&c_inv) - &one;
        let mut factors = vec![&one - &m];
        let mut power = m.clone();
        let mut nilpotent = m.is_zero();
        for _ in 0..NILPOTENCY_BOUND {
            if nilpotent {
                break;
            }
            power = &power * &power;
            if power.is_zero() {
                nilpotent = true;
            } else {
                factors.push(&one + &power);
            }
        }
        if !nilpotent {
            return Err(Error::NotAUnit(format!(
                "{self}: non-constant part not nilpotent within 2^{NILPOTENCY_BOUND}"
            )));
        }
        let inv = factors
            .iter()
            .fold(RingElem::constant(&self.pres, c_inv), |acc, f| &acc * f);
        if !(self * &inv).is_one() {
            return Err(Error::VerifyFailed(format!("inverse of {self}")));
        }
        Ok(inv)
    }

    /// Exact quotient in a free polynomial ring, by multivariate division
    /// with the divisor's leading monomial.
    pub fn divide_exact(&self, divisor: &RingElem) -> Result<RingElem> {
        self.check(divisor)?;
        if !self.pres.is_free() {
            return Err(Error::BadParameter(format!(
                "exact division needs a polynomial ring, got {}",
                self.pres.id()
            )));
        }
        let (lm, lc) = divisor
            .leading_term()
            .ok_or(Error::DivisionByZero)?;
        let lc_inv = lc.inv()?;
        let mut rest = self.terms.clone();
        let mut quot = Poly::new();
        let mut rem = Poly::new();
        while let Some((m, c)) = rest.pop_last() {
            if lm.divides(&m) {
                let qm = m.div(lm);
                let qc = &c * &lc_inv;
                for (dm, dc) in &divisor.terms {
                    if dm != lm {
                        add_term(&mut rest, dm.mul(&qm), (&qc * dc).neg());
                    }
                }
                add_term(&mut quot, qm, qc);
            } else {
                rem.insert(m, c);
            }
        }
        if !rem.is_empty() {
            return Err(Error::NotDivisible(
                RingElem {
                    pres: self.pres.clone(),
                    terms: rem,
                }
                .to_string(),
            ));
        }
        Ok(RingElem {
            pres: self.pres.clone(),
            terms: quot,
        })
    }

    /// The same polynomial read in another presentation on the same
    /// generator names, normalized there.
    pub fn transport(&self, target: &Arc<Presentation>) -> Result<RingElem> {
        if target.vars() != self.pres.vars() || target.field() != self.field() {
            return Err(Error::PresentationMismatch(
                format!("{:?}", self.pres),
                format!("{target:?}"),
            ));
        }
        let poly = self
            .terms
            .iter()
            .map(|(m, c)| (target.monomial(m.exps()), c.clone()))
            .collect();
        Ok(RingElem::from_poly(target, poly))
    }
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        *self.pres == *other.pres && self.terms == other.terms
    }
}

impl Eq for RingElem {}

impl Hash for RingElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.pres.id().hash(state);
        self.terms.hash(state);
    }
}

impl PartialOrd for RingElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical total order on normal forms (for sorting multisets).
impl Ord for RingElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.pres
            .id()
            .cmp(other.pres.id())
            .then_with(|| self.terms.iter().rev().cmp(other.terms.iter().rev()))
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pres.format_poly(&self.terms))
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.pres.id(), self)
    }
}

impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        self.try_add(rhs).expect("presentation mismatch")
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        self.try_sub(rhs).expect("presentation mismatch")
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        self.try_mul(rhs).expect("presentation mismatch")
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presentation::{poly_axy, ring_a, ring_r, ring_rp};

    #[test]
    fn a_squared_is_xy_in_r() {
        let r = ring_r(Field::Rational);
        let a = RingElem::var(&r, "a");
        let xy = &RingElem::var(&r, "x") * &RingElem::var(&r, "y");
        assert_eq!(&a * &a, xy);
        let a3 = &a * &(&a * &a);
        assert_eq!(a3, &a * &xy);
        assert_eq!(a3.to_string(), "a*x*y");
    }

    #[test]
    fn products_in_local_ring() {
        let ring = ring_a(Field::Rational);
        let one = RingElem::one(&ring);
        let s = RingElem::var(&ring, "s");
        let t = RingElem::var(&ring, "t");
        let lhs = &(&one + &s) * &(&one + &t);
        assert_eq!(lhs, &(&one + &s) + &t);
    }

    #[test]
    fn inverses_in_local_ring() {
        let k = Field::Rational;
        let ring = ring_a(k);
        let one = RingElem::one(&ring);
        let s = RingElem::var(&ring, "s");
        let f = &one + &s;
        assert_eq!(f.inverse().unwrap(), f);
        let us = s.scale(&k.generator());
        let g = &one + &us;
        assert_eq!(g.inverse().unwrap(), g);
        assert!(matches!(s.inverse(), Err(Error::NotAUnit(_))));
        let h = &RingElem::constant(&ring, k.generator()) + &RingElem::var(&ring, "t");
        let hi = h.inverse().unwrap();
        assert!((&h * &hi).is_one());
    }

    #[test]
    fn inverse_in_rp_and_non_units() {
        let k = Field::gf4();
        let rp = ring_rp(k);
        // 1 + a is not a unit of R'
        let f = &RingElem::one(&rp) + &RingElem::var(&rp, "a");
        assert!(matches!(f.inverse(), Err(Error::NotAUnit(_))));
        let r = ring_r(k);
        let g = &RingElem::one(&r) + &RingElem::var(&r, "a");
        assert!(matches!(g.inverse(), Err(Error::NotAUnit(_))));
        let c = RingElem::constant(&rp, k.generator());
        assert_eq!(c.inverse().unwrap(), RingElem::constant(&rp, k.generator().inv().unwrap()));
    }

    #[test]
    fn exact_division() {
        let p = poly_axy(Field::Rational);
        let a = RingElem::var(&p, "a");
        let x = RingElem::var(&p, "x");
        let y = RingElem::var(&p, "y");
        let d = &(&a * &a) + &(&x * &y);
        let f = &(&(&a * &a) * &x) + &(&(&x * &x) * &y);
        assert_eq!(f.divide_exact(&d).unwrap(), x);
        let err = (&a * &a).divide_exact(&d).unwrap_err();
        assert_eq!(err, Error::NotDivisible("x*y".into()));
        assert!(RingElem::zero(&p).divide_exact(&d).unwrap().is_zero());
        assert_eq!(a.divide_exact(&RingElem::zero(&p)), Err(Error::DivisionByZero));
    }

    #[test]
    fn mismatch_is_reported() {
        let k = Field::Rational;
        let a = RingElem::one(&ring_a(k));
        let r = RingElem::one(&ring_r(k));
        assert!(matches!(a.try_add(&r), Err(Error::PresentationMismatch(..))));
    }
}
