//! Square matrices over presented rings, elementary matrices and verified
//! elementary factorizations, and the concrete matrices M₀(u), M(u).

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::presentation::ring_r;
use crate::algebra::{FieldElem, Presentation, RingElem, RingHom, StandardHoms};
use crate::error::{Error, Result};

/// Largest supported dimension (determinants use memoized cofactor expansion, O(n·2ⁿ)).
pub const MAX_DIM: usize = 16;

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pres: Arc<Presentation>,
    n: usize,
    entries: Vec<RingElem>,
}

impl Mat {
    pub fn identity(pres: &Arc<Presentation>, n: usize) -> Mat {
        let mut entries = vec![RingElem::zero(pres); n * n];
        for i in 0..n {
            entries[i * n + i] = RingElem::one(pres);
        }
        Mat {
            pres: pres.clone(),
            n,
            entries,
        }
    }

    pub fn from_rows(pres: &Arc<Presentation>, rows: Vec<Vec<RingElem>>) -> Result<Mat> {
        let n = rows.len();
        if n == 0 || n > MAX_DIM || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "need a square matrix of size 1..={MAX_DIM}"
            )));
        }
        let entries: Vec<RingElem> = rows.into_iter().flatten().collect();
        if let Some(e) = entries.iter().find(|e| **e.presentation() != **pres) {
            return Err(Error::PresentationMismatch(
                format!("{:?}", e.presentation()),
                format!("{pres:?}"),
            ));
        }
        Ok(Mat {
            pres: pres.clone(),
            n,
            entries,
        })
    }

    /// Matrix whose j-th column is `cols[j]`.
    pub fn from_columns(pres: &Arc<Presentation>, cols: Vec<Vec<RingElem>>) -> Result<Mat> {
        Ok(Mat::from_rows(pres, cols)?.transpose())
    }

    pub fn diagonal(pres: &Arc<Presentation>, diag: &[RingElem]) -> Mat {
        let mut m = Mat::identity(pres, diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    /// Block-diagonal sum.
    pub fn block_sum(&self, other: &Mat) -> Result<Mat> {
        self.check_pres(other)?;
        let n = self.n + other.n;
        let mut m = Mat::identity(&self.pres, n);
        for i in 0..n {
            for j in 0..n {
                let v = if i < self.n && j < self.n {
                    self.get(i, j).clone()
                } else if i >= self.n && j >= self.n {
                    other.get(i - self.n, j - self.n).clone()
                } else {
                    RingElem::zero(&self.pres)
                };
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at 0-based (row, col).
    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<RingElem> {
        (0..self.n).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<RingElem> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[RingElem] {
        &self.entries
    }

    fn check_pres(&self, other: &Mat) -> Result<()> {
        if *self.pres != *other.pres {
            return Err(Error::PresentationMismatch(
                format!("{:?}", self.pres),
                format!("{:?}", other.pres),
            ));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Mat) -> Result<Mat> {
        self.check_pres(other)?;
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.n, other.n)));
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = RingElem::zero(&self.pres);
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(Mat {
            pres: self.pres.clone(),
            n,
            entries,
        })
    }

    pub fn mul_vec(&self, v: &[RingElem]) -> Result<Vec<RingElem>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.n, v.len())));
        }
        (0..self.n)
            .map(|i| {
                (0..self.n).try_fold(RingElem::zero(&self.pres), |acc, k| {
                    acc.try_add(&self.get(i, k).try_mul(&v[k])?)
                })
            })
            .collect()
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(j, i).clone());
            }
        }
        Mat {
            pres: self.pres.clone(),
            n,
            entries,
        }
    }

    /// Determinant by cofactor expansion along successive rows, memoized on
    /// the set of remaining columns.
    pub fn det(&self) -> RingElem {
        fn minor(m: &Mat, row: usize, cols: u32, memo: &mut HashMap<u32, RingElem>) -> RingElem {
            if row == m.n {
                return RingElem::one(&m.pres);
            }
            if let Some(v) = memo.get(&cols) {
                return v.clone();
            }
            let mut acc = RingElem::zero(&m.pres);
            let mut sign_even = true;
            for j in 0..m.n {
                if cols & (1 << j) == 0 {
                    continue;
                }
                let e = m.get(row, j);
                if !e.is_zero() {
                    let sub = minor(m, row + 1, cols & !(1 << j), memo);
                    let term = e * &sub;
                    acc = if sign_even { &acc + &term } else { &acc - &term };
                }
                sign_even = !sign_even;
            }
            memo.insert(cols, acc.clone());
            acc
        }
        minor(self, 0, (1u32 << self.n) - 1, &mut HashMap::new())
    }

    /// Entrywise image under a homomorphism.
    pub fn map(&self, h: &RingHom) -> Result<Mat> {
        let entries = self
            .entries
            .iter()
            .map(|e| h.apply(e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat {
            pres: h.target().clone(),
            n: self.n,
            entries,
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(&self.pres, self.n)
    }

    /// First differing entry (0-based) against another matrix of the same shape.
    pub fn first_difference(&self, other: &Mat) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != other.get(i, j))
    }

    /// The standard alternating form: n/2 copies of (0 1; −1 0) on the diagonal.
    pub fn chi(pres: &Arc<Presentation>, n: usize) -> Result<Mat> {
        if n % 2 == 1 {
            return Err(Error::OddDimension(n));
        }
        let mut m = Mat::identity(pres, n);
        for i in 0..n {
            m.set(i, i, RingElem::zero(pres));
        }
        for b in (0..n).step_by(2) {
            m.set(b, b + 1, RingElem::one(pres));
            m.set(b + 1, b, RingElem::one(pres).neg());
        }
        Ok(m)
    }

    /// Mᵀ χ M = χ.
    pub fn is_symplectic(&self) -> Result<bool> {
        let chi = Mat::chi(&self.pres, self.n)?;
        Ok(self.transpose().try_mul(&chi)?.try_mul(self)? == chi)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.pres.id(), self)
    }
}

/// Elementary matrix data e_ij(r), indices 1-based as in the usual notation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemFactor {
    pub i: usize,
    pub j: usize,
    pub r: RingElem,
}

impl ElemFactor {
    pub fn new(i: usize, j: usize, r: RingElem) -> ElemFactor {
        ElemFactor { i, j, r }
    }

    pub fn inverse(&self) -> ElemFactor {
        ElemFactor::new(self.i, self.j, self.r.neg())
    }

    pub fn to_mat(&self, n: usize) -> Result<Mat> {
        elementary(n, self.i, self.j, &self.r)
    }
}

impl fmt::Display for ElemFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}{}({})", self.i, self.j, self.r)
    }
}

/// Identity plus `r` at 1-based position (i, j), i ≠ j.
pub fn elementary(n: usize, i: usize, j: usize, r: &RingElem) -> Result<Mat> {
    if i == j || i == 0 || j == 0 || i > n || j > n || n > MAX_DIM {
        return Err(Error::BadIndex(i, j, n));
    }
    let mut m = Mat::identity(r.presentation(), n);
    m.set(i - 1, j - 1, r.clone());
    Ok(m)
}

/// Left-to-right product of elementary factors; identity for an empty list.
pub fn factor_product(pres: &Arc<Presentation>, n: usize, factors: &[ElemFactor]) -> Result<Mat> {
    let mut acc = Mat::identity(pres, n);
    for f in factors {
        acc = acc.try_mul(&f.to_mat(n)?)?;
    }
    Ok(acc)
}

/// Inverse word: reversed order, negated parameters.
pub fn inverse_factors(factors: &[ElemFactor]) -> Vec<ElemFactor> {
    factors.iter().rev().map(ElemFactor::inverse).collect()
}

/// An ordered list of elementary factors whose product equals `target`.
///
/// Only constructible through [`ElementaryCertificate::new`], which multiplies
/// the factors out and compares with the target, so every value of this type
/// has been verified.
#[derive(Clone, Debug)]
pub struct ElementaryCertificate {
    target: Mat,
    factors: Vec<ElemFactor>,
}

impl ElementaryCertificate {
    pub fn new(target: Mat, factors: Vec<ElemFactor>) -> Result<ElementaryCertificate> {
        let product = factor_product(target.presentation(), target.dim(), &factors)?;
        if let Some((i, j)) = product.first_difference(&target) {
            return Err(Error::VerifyFailed(format!(
                "entry ({}, {}): product has {}, target has {}",
                i + 1,
                j + 1,
                product.get(i, j),
                target.get(i, j)
            )));
        }
        Ok(ElementaryCertificate { target, factors })
    }

    pub fn target(&self) -> &Mat {
        &self.target
    }

    pub fn factors(&self) -> &[ElemFactor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    /// Re-runs the product check.
    pub fn verify(&self) -> Result<()> {
        ElementaryCertificate::new(self.target.clone(), self.factors.clone()).map(|_| ())
    }
}

fn check_u(u: &FieldElem) -> Result<()> {
    if u.is_zero() || u.is_one() {
        return Err(Error::BadParameter(format!("u = {u} must avoid 0 and 1")));
    }
    Ok(())
}

/// M₀(u) = (1+(1+u)a², (1+u)(1+a)y; (1+u⁻¹)(1+a)x, 1+(1+u⁻¹)a²) over R.
pub fn build_m0(u: &FieldElem) -> Result<Mat> {
    check_u(u)?;
    let k = u.field();
    let r = ring_r(k);
    let one = RingElem::one(&r);
    let a = RingElem::var(&r, "a");
    let x = RingElem::var(&r, "x");
    let y = RingElem::var(&r, "y");
    let c = &k.one() + u;
    let ci = &k.one() + &u.inv()?;
    let a2 = &a * &a;
    let one_a = &one + &a;
    Mat::from_rows(
        &r,
        vec![
            vec![&one + &a2.scale(&c), (&one_a * &y).scale(&c)],
            vec![(&one_a * &x).scale(&ci), &one + &a2.scale(&ci)],
        ],
    )
}

/// The factor (1+u⁻¹)x relating M(u) = M₀(u)·e₂₁((1+u⁻¹)x).
pub fn m_correction(u: &FieldElem) -> Result<ElemFactor> {
    check_u(u)?;
    let k = u.field();
    let r = ring_r(k);
    let ci = &k.one() + &u.inv()?;
    Ok(ElemFactor::new(2, 1, RingElem::var(&r, "x").scale(&ci)))
}

/// M(u) = M₀(u)·e₂₁((1+u⁻¹)x).
pub fn build_m(u: &FieldElem) -> Result<Mat> {
    build_m0(u)?.try_mul(&m_correction(u)?.to_mat(2)?)
}

/// The six elementary factors of ψ(M(u)) over k[s,t]:
/// e₁₂(us) e₂₁(u⁻¹t) e₁₂((1+u)s) e₂₁(t) e₁₂(s) e₂₁((1+u⁻¹)t).
pub fn psi_m_factors(pres_st: &Arc<Presentation>, u: &FieldElem) -> Result<Vec<ElemFactor>> {
    check_u(u)?;
    let k = u.field();
    let s = RingElem::var(pres_st, "s");
    let t = RingElem::var(pres_st, "t");
    let ui = u.inv()?;
    Ok(vec![
        ElemFactor::new(1, 2, s.scale(u)),
        ElemFactor::new(2, 1, t.scale(&ui)),
        ElemFactor::new(1, 2, s.scale(&(&k.one() + u))),
        ElemFactor::new(2, 1, t.clone()),
        ElemFactor::new(1, 2, s.clone()),
        ElemFactor::new(2, 1, t.scale(&(&k.one() + &ui))),
    ])
}

/// Certificate that the six factors multiply to ψ(M(u)).
pub fn psi_m_factorization(homs: &StandardHoms, u: &FieldElem) -> Result<ElementaryCertificate> {
    let target = build_m(u)?.map(&homs.psi)?;
    let factors = psi_m_factors(homs.psi.target(), u)?;
    ElementaryCertificate::new(target, factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::presentation::{poly_st, ring_a};
    use crate::algebra::Field;

    #[test]
    fn determinants() {
        let k = Field::Rational;
        let r = ring_r(k);
        assert!(Mat::identity(&r, 3).det().is_one());
        let f = &RingElem::var(&r, "x") + &RingElem::var(&r, "a");
        assert!(elementary(3, 1, 2, &f).unwrap().det().is_one());
        let u = k.generator();
        assert!(build_m0(&u).unwrap().det().is_one());
        assert!(build_m(&u).unwrap().det().is_one());
    }

    #[test]
    fn elementary_matrices() {
        let k = Field::Rational;
        let st = poly_st(k);
        let u = k.generator();
        let us = RingElem::var(&st, "s").scale(&u);
        let e = elementary(2, 1, 2, &us).unwrap();
        assert_eq!(e.get(0, 1), &us);
        assert!(e.get(1, 0).is_zero());
        let t = RingElem::var(&st, "t");
        let sq = elementary(2, 2, 1, &t).unwrap();
        assert!(sq.try_mul(&sq).unwrap().is_identity());
        assert!(elementary(3, 1, 3, &RingElem::zero(&st)).unwrap().is_identity());
        assert_eq!(elementary(2, 1, 1, &t), Err(Error::BadIndex(1, 1, 2)));
        assert_eq!(elementary(2, 1, 3, &t), Err(Error::BadIndex(1, 3, 2)));
    }

    #[test]
    fn symplectic_checks() {
        let k = Field::Rational;
        let r = ring_r(k);
        assert!(Mat::identity(&r, 2).is_symplectic().unwrap());
        assert!(build_m0(&k.generator()).unwrap().is_symplectic().unwrap());
        let a = ring_a(k);
        let d = Mat::diagonal(&a, &[RingElem::one(&a), &RingElem::one(&a) + &RingElem::var(&a, "s")]);
        assert!(!d.is_symplectic().unwrap());
        assert_eq!(Mat::identity(&r, 3).is_symplectic(), Err(Error::OddDimension(3)));
    }

    #[test]
    fn m0_entries() {
        let k = Field::Rational;
        let u = k.generator();
        let m0 = build_m0(&u).unwrap();
        assert_eq!(m0.get(0, 0).to_string(), "(u+1)*x*y + 1");
        let homs = StandardHoms::new(k).unwrap();
        let psi_m0 = m0.map(&homs.psi).unwrap();
        assert_eq!(psi_m0.get(0, 0).to_string(), "(u+1)*s^2*t^2 + 1");
        assert!(matches!(build_m0(&k.one()), Err(Error::BadParameter(_))));
        assert!(matches!(build_m0(&k.zero()), Err(Error::BadParameter(_))));
    }

    #[test]
    fn six_factor_identity() {
        for (k, u) in [
            (Field::Rational, Field::Rational.generator()),
            (Field::gf4(), Field::gf4().generator()),
        ] {
            let homs = StandardHoms::new(k).unwrap();
            let cert = psi_m_factorization(&homs, &u).unwrap();
            assert_eq!(cert.len(), 6);
            // reduction modulo (s², st, t²) is the identity
            assert!(cert.target().map(&homs.pi_a).unwrap().is_identity());
        }
    }

    #[test]
    fn certificate_rejects_wrong_product() {
        let k = Field::Rational;
        let st = poly_st(k);
        let u = k.generator();
        let mut factors = psi_m_factors(&st, &u).unwrap();
        factors[0].r = RingElem::var(&st, "s").scale(&(&u * &u));
        let homs = StandardHoms::new(k).unwrap();
        let target = build_m(&u).unwrap().map(&homs.psi).unwrap();
        assert!(matches!(
            ElementaryCertificate::new(target, factors),
            Err(Error::VerifyFailed(_))
        ));
    }

    #[test]
    fn det_matches_two_by_two_formula() {
        let k = Field::gf4();
        let m = build_m0(&k.generator()).unwrap();
        let direct = &(m.get(0, 0) * m.get(1, 1)) - &(m.get(0, 1) * m.get(1, 0));
        assert_eq!(m.det(), direct);
    }
}
