use std::collections::BTreeMap;

use smallvec::SmallVec;

use super::field::FieldElem;

/// Exponent vector tagged with its weighted degree.
///
/// The derived ordering compares the weighted degree first and then the
/// exponents lexicographically with the first generator most significant.
/// With unit weights this is degree-lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial {
    wdeg: u32,
    exps: SmallVec<[u16; 6]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            wdeg: 0,
            exps: SmallVec::from_elem(0, nvars),
        }
    }

    pub fn from_exps(exps: &[u16], weights: &[u32]) -> Self {
        debug_assert_eq!(exps.len(), weights.len());
        let wdeg = exps.iter().zip(weights).map(|(&e, &w)| e as u32 * w).sum();
        Monomial {
            wdeg,
            exps: SmallVec::from_slice(exps),
        }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn weighted_degree(&self) -> u32 {
        self.wdeg
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            wdeg: self.wdeg + other.wdeg,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial {
            wdeg: self.wdeg - other.wdeg,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial, weights: &[u32]) -> Monomial {
        let exps: SmallVec<[u16; 6]> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        Monomial::from_exps(&exps, weights)
    }
}

/// Sparse polynomial: monomial → nonzero coefficient.
pub type Poly = BTreeMap<Monomial, FieldElem>;

/// Adds `c·m` to `p`, dropping the term if it cancels.
pub fn add_term(p: &mut Poly, m: Monomial, c: FieldElem) {
    if c.is_zero() {
        return;
    }
    match p.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}
