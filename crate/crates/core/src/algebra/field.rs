//! Characteristic-2 coefficient fields: GF(2^n) and the rational function
//! field F₂(u).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Polynomial over GF(2), bit `i` of the limb vector is the coefficient of u^i.
///
/// Always trimmed: no trailing zero limbs.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitPoly {
    limbs: Vec<u64>,
}

impl BitPoly {
    pub fn zero() -> Self {
        BitPoly { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        BitPoly::from_u64(1)
    }

    pub fn from_u64(bits: u64) -> Self {
        let mut p = BitPoly { limbs: vec![bits] };
        p.trim();
        p
    }

    /// u^k
    pub fn monomial(k: usize) -> Self {
        let mut limbs = vec![0u64; k / 64 + 1];
        limbs[k / 64] = 1 << (k % 64);
        BitPoly { limbs }
    }

    fn trim(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = *self.limbs.last()?;
        Some((self.limbs.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.limbs
            .get(i / 64)
            .map(|l| (l >> (i % 64)) & 1 == 1)
            .unwrap_or(false)
    }

    fn set(&mut self, i: usize) {
        if self.limbs.len() <= i / 64 {
            self.limbs.resize(i / 64 + 1, 0);
        }
        self.limbs[i / 64] ^= 1 << (i % 64);
    }

    pub fn add(&self, other: &BitPoly) -> BitPoly {
        let n = self.limbs.len().max(other.limbs.len());
        let mut limbs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.limbs.get(i).copied().unwrap_or(0);
            let b = other.limbs.get(i).copied().unwrap_or(0);
            limbs.push(a ^ b);
        }
        let mut p = BitPoly { limbs };
        p.trim();
        p
    }

    fn shl(&self, k: usize) -> BitPoly {
        if self.is_zero() {
            return BitPoly::zero();
        }
        let (w, b) = (k / 64, k % 64);
        let mut limbs = vec![0u64; self.limbs.len() + w + 1];
        for (i, &l) in self.limbs.iter().enumerate() {
            limbs[i + w] ^= l << b;
            if b > 0 {
                limbs[i + w + 1] ^= l >> (64 - b);
            }
        }
        let mut p = BitPoly { limbs };
        p.trim();
        p
    }

    pub fn mul(&self, other: &BitPoly) -> BitPoly {
        let mut acc = BitPoly::zero();
        let Some(d) = other.degree() else {
            return acc;
        };
        for i in 0..=d {
            if other.coeff(i) {
                acc = acc.add(&self.shl(i));
            }
        }
        acc
    }

    /// Euclidean division, panics on a zero divisor.
    pub fn div_rem(&self, divisor: &BitPoly) -> (BitPoly, BitPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = BitPoly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            quot.set(rd - dd);
            rem = rem.add(&divisor.shl(rd - dd));
        }
        quot.trim();
        (quot, rem)
    }

    pub fn gcd(&self, other: &BitPoly) -> BitPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a
    }

    /// Square root when every odd-degree coefficient vanishes (f(u)² = f(u²) over GF(2)).
    pub fn sqrt(&self) -> Option<BitPoly> {
        let Some(d) = self.degree() else {
            return Some(BitPoly::zero());
        };
        let mut root = BitPoly::zero();
        for i in 0..=d {
            if self.coeff(i) {
                if i % 2 == 1 {
                    return None;
                }
                root.set(i / 2);
            }
        }
        root.trim();
        Some(root)
    }

    fn fmt_var(&self, var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return write!(f, "0");
        };
        let mut first = true;
        for i in (0..=d).rev() {
            if !self.coeff(i) {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "1")?,
                1 => write!(f, "{var}")?,
                _ => write!(f, "{var}^{i}")?,
            }
        }
        Ok(())
    }
}

impl PartialOrd for BitPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BitPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl fmt::Debug for BitPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_var("u", f)
    }
}

/// Field descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// GF(2)[w]/(modulus); bit i of `modulus` is the coefficient of w^i.
    Gf2n { degree: u32, modulus: u64 },
    /// F₂(u).
    Rational,
}

impl Field {
    /// GF(2^n) from an irreducible modulus of degree n ≤ 62.
    pub fn gf2n(modulus: u64) -> Result<Field> {
        let p = BitPoly::from_u64(modulus);
        let degree = p
            .degree()
            .filter(|&d| (1..=62).contains(&d))
            .ok_or_else(|| Error::BadParameter(format!("modulus {modulus:#b} has unsupported degree")))?;
        if !is_irreducible(&p) {
            return Err(Error::BadParameter(format!("modulus {p:?} is reducible")));
        }
        Ok(Field::Gf2n {
            degree: degree as u32,
            modulus,
        })
    }

    /// The fields used throughout tests: GF(2), GF(4) = GF(2)[w]/(w²+w+1), GF(8) = GF(2)[w]/(w³+w+1).
    pub fn gf2() -> Field {
        Field::gf2n(0b11).unwrap()
    }

    pub fn gf4() -> Field {
        Field::gf2n(0b111).unwrap()
    }

    pub fn gf8() -> Field {
        Field::gf2n(0b1011).unwrap()
    }

    pub fn zero(&self) -> FieldElem {
        match *self {
            Field::Gf2n { modulus, .. } => FieldElem::Gf2n { modulus, value: 0 },
            Field::Rational => FieldElem::Rational {
                num: BitPoly::zero(),
                den: BitPoly::one(),
            },
        }
    }

    pub fn one(&self) -> FieldElem {
        match *self {
            Field::Gf2n { modulus, .. } => FieldElem::Gf2n { modulus, value: 1 },
            Field::Rational => FieldElem::Rational {
                num: BitPoly::one(),
                den: BitPoly::one(),
            },
        }
    }

    /// u for F₂(u), the class w of the indeterminate for GF(2^n) (equal to 1 in GF(2)).
    pub fn generator(&self) -> FieldElem {
        match *self {
            Field::Gf2n { degree, modulus } => {
                if degree == 1 {
                    self.one()
                } else {
                    FieldElem::Gf2n { modulus, value: 2 }
                }
            }
            Field::Rational => FieldElem::Rational {
                num: BitPoly::monomial(1),
                den: BitPoly::one(),
            },
        }
    }

    /// Element whose polynomial representation (in w or u) has the given bits.
    pub fn from_bits(&self, bits: u64) -> FieldElem {
        match *self {
            Field::Gf2n { modulus, .. } => {
                let value = BitPoly::from_u64(bits).div_rem(&BitPoly::from_u64(modulus)).1;
                FieldElem::Gf2n {
                    modulus,
                    value: value.limbs.first().copied().unwrap_or(0),
                }
            }
            Field::Rational => FieldElem::Rational {
                num: BitPoly::from_u64(bits),
                den: BitPoly::one(),
            },
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Gf2n { .. })
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u64> {
        match *self {
            Field::Gf2n { degree, .. } => Some(1u64 << degree),
            Field::Rational => None,
        }
    }

    /// All elements of a finite field, in bit order.
    pub fn elements(&self) -> Option<Vec<FieldElem>> {
        let q = self.order()?;
        Some((0..q).map(|b| self.from_bits(b)).collect())
    }

    pub fn name(&self) -> String {
        match *self {
            Field::Gf2n { degree, modulus } => format!("gf2:{degree}:{modulus:b}"),
            Field::Rational => "f2-rational".to_string(),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

fn is_irreducible(p: &BitPoly) -> bool {
    let d = p.degree().unwrap_or(0);
    if d == 0 {
        return false;
    }
    // trial division by every polynomial of degree 1..=d/2
    for deg in 1..=d / 2 {
        for low in 0..(1u64 << deg) {
            let q = BitPoly::from_u64((1u64 << deg) | low);
            if p.div_rem(&q).1.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Element of a characteristic-2 field in canonical form.
///
/// GF(2^n) values are reduced modulo the modulus; F₂(u) fractions are in
/// lowest terms with the zero element stored as 0/1. Equal elements have
/// identical representations, so the derived `Eq` is field equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElem {
    Gf2n { modulus: u64, value: u64 },
    Rational { num: BitPoly, den: BitPoly },
}

fn gf_mul(a: u64, b: u64, modulus: u64) -> u64 {
    let deg = 63 - modulus.leading_zeros();
    let mut prod: u128 = 0;
    let mut rest = b;
    while rest != 0 {
        let i = rest.trailing_zeros();
        prod ^= (a as u128) << i;
        rest &= rest - 1;
    }
    while prod != 0 {
        let top = 127 - prod.leading_zeros();
        if top < deg {
            break;
        }
        prod ^= (modulus as u128) << (top - deg);
    }
    prod as u64
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match *self {
            FieldElem::Gf2n { modulus, .. } => Field::Gf2n {
                degree: 63 - modulus.leading_zeros(),
                modulus,
            },
            FieldElem::Rational { .. } => Field::Rational,
        }
    }

    fn rational(num: BitPoly, den: BitPoly) -> FieldElem {
        if num.is_zero() {
            return FieldElem::Rational {
                num,
                den: BitPoly::one(),
            };
        }
        let g = num.gcd(&den);
        FieldElem::Rational {
            num: num.div_rem(&g).0,
            den: den.div_rem(&g).0,
        }
    }

    /// Fraction num/den in F₂(u); errors on a zero denominator.
    pub fn fraction(num: BitPoly, den: BitPoly) -> Result<FieldElem> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElem::rational(num, den))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Gf2n { value, .. } => *value == 0,
            FieldElem::Rational { num, .. } => num.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Gf2n { value, .. } => *value == 1,
            FieldElem::Rational { num, den } => num.is_one() && den.is_one(),
        }
    }

    fn check(&self, other: &FieldElem) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(
                self.field().name(),
                other.field().name(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(match (self, other) {
            (FieldElem::Gf2n { modulus, value: a }, FieldElem::Gf2n { value: b, .. }) => {
                FieldElem::Gf2n {
                    modulus: *modulus,
                    value: a ^ b,
                }
            }
            (FieldElem::Rational { num: n1, den: d1 }, FieldElem::Rational { num: n2, den: d2 }) => {
                if d1 == d2 {
                    FieldElem::rational(n1.add(n2), d1.clone())
                } else {
                    FieldElem::rational(n1.mul(d2).add(&n2.mul(d1)), d1.mul(d2))
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(match (self, other) {
            (FieldElem::Gf2n { modulus, value: a }, FieldElem::Gf2n { value: b, .. }) => {
                FieldElem::Gf2n {
                    modulus: *modulus,
                    value: gf_mul(*a, *b, *modulus),
                }
            }
            (FieldElem::Rational { num: n1, den: d1 }, FieldElem::Rational { num: n2, den: d2 }) => {
                if n1.is_zero() || n2.is_zero() {
                    return Ok(self.field().zero());
                }
                FieldElem::rational(n1.mul(n2), d1.mul(d2))
            }
            _ => unreachable!(),
        })
    }

    /// Additive inverse; the identity in characteristic 2.
    pub fn neg(&self) -> FieldElem {
        self.clone()
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElem::Gf2n { modulus, value } => {
                // x^(2^n - 2)
                let n = 63 - modulus.leading_zeros();
                let mut acc = 1u64;
                let mut sq = *value;
                let mut e: u64 = (1u64 << n) - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = gf_mul(acc, sq, *modulus);
                    }
                    sq = gf_mul(sq, sq, *modulus);
                    e >>= 1;
                }
                FieldElem::Gf2n {
                    modulus: *modulus,
                    value: acc,
                }
            }
            FieldElem::Rational { num, den } => FieldElem::rational(den.clone(), num.clone()),
        })
    }

    pub fn try_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut acc = self.field().one();
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        acc
    }

    /// Square test with root.
    ///
    /// GF(2^n): always a square, root x^(2^(n-1)). F₂(u): a reduced fraction
    /// is a square iff numerator and denominator are squares in GF(2)[u],
    /// i.e. only even powers of u occur. The returned root is checked.
    pub fn is_square(&self) -> (bool, Option<FieldElem>) {
        let root = match self {
            FieldElem::Gf2n { modulus, .. } => {
                let n = 63 - modulus.leading_zeros();
                let mut r = self.clone();
                for _ in 0..n.saturating_sub(1) {
                    r = &r * &r;
                }
                Some(r)
            }
            FieldElem::Rational { num, den } => match (num.sqrt(), den.sqrt()) {
                (Some(n), Some(d)) => Some(FieldElem::rational(n, d)),
                _ => None,
            },
        };
        match root {
            Some(r) => {
                assert_eq!(&(&r * &r), self, "square root verification");
                (true, Some(r))
            }
            None => (false, None),
        }
    }

    /// Polynomial-in-generator representation for GF(2^n), numerator/denominator for F₂(u).
    pub fn as_bits(&self) -> Option<u64> {
        match self {
            FieldElem::Gf2n { value, .. } => Some(*value),
            FieldElem::Rational { num, den } if den.is_one() && num.limbs.len() <= 1 => {
                Some(num.limbs.first().copied().unwrap_or(0))
            }
            _ => None,
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Gf2n { value, .. } => BitPoly::from_u64(*value).fmt_var("w", f),
            FieldElem::Rational { num, den } => {
                if den.is_one() {
                    num.fmt_var("u", f)
                } else {
                    let part = |p: &BitPoly, f: &mut fmt::Formatter<'_>| {
                        if p.limbs.iter().map(|l| l.count_ones()).sum::<u32>() > 1 {
                            write!(f, "(")?;
                            p.fmt_var("u", f)?;
                            write!(f, ")")
                        } else {
                            p.fmt_var("u", f)
                        }
                    };
                    part(num, f)?;
                    write!(f, "/")?;
                    part(den, f)
                }
            }
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self.try_add(&rhs.neg()).expect("field mismatch")
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::neg(self)
    }
}
