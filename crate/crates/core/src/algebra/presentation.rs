//! Presented commutative k-algebras k[x₁..xₙ]/(relators) with rewrite rules
//! derived from the relators' leading monomials.

use std::fmt;
use std::sync::Arc;

use super::field::{Field, FieldElem};
use super::monomial::{add_term, Monomial, Poly};
use super::ring::RingElem;
use crate::error::{Error, Result};

/// Rewrite rule `lhs → rhs`; every monomial of `rhs` is smaller than `lhs`.
#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: Monomial,
    pub rhs: Poly,
}

pub struct Presentation {
    id: String,
    field: Field,
    vars: Vec<String>,
    weights: Vec<u32>,
    relators: Vec<Poly>,
    rules: Vec<Rule>,
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}] over {}", self.id, self.vars.join(","), self.field)
    }
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.field == other.field && self.vars == other.vars
    }
}

impl Eq for Presentation {}

pub const POLY_ST: &str = "POLY_ST";
pub const POLY_X: &str = "POLY_X";
pub const POLY_AXY: &str = "POLY_AXY";
pub const RING_R: &str = "R";
pub const RING_A: &str = "A";
pub const RING_RP: &str = "RP";
pub const RING_RPS: &str = "RPS";
pub const GROUND: &str = "K";

impl Presentation {
    /// Polynomial ring on `vars` with unit weights.
    pub fn free(id: &str, field: Field, vars: &[&str]) -> Arc<Presentation> {
        let weights = vec![1; vars.len()];
        Presentation::with_relators(id, field, vars, &weights, |_| Vec::new())
    }

    /// Quotient by the relators produced from the free ring on the same
    /// generators. Rules are the relators solved for their leading monomial
    /// in weighted-degree-then-lex order.
    pub fn with_relators(
        id: &str,
        field: Field,
        vars: &[&str],
        weights: &[u32],
        relators: impl FnOnce(&Arc<Presentation>) -> Vec<RingElem>,
    ) -> Arc<Presentation> {
        assert_eq!(vars.len(), weights.len());
        assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
        let free = Arc::new(Presentation {
            id: format!("free:{id}"),
            field,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            weights: weights.to_vec(),
            relators: Vec::new(),
            rules: Vec::new(),
        });
        let relators: Vec<Poly> = relators(&free)
            .into_iter()
            .map(|r| r.into_terms())
            .filter(|p| !p.is_empty())
            .collect();
        let rules = relators
            .iter()
            .map(|rel| {
                let (lhs, lc) = rel.last_key_value().expect("nonzero relator");
                let lc_inv = lc.inv().expect("nonzero coefficient");
                let mut rhs = Poly::new();
                for (m, c) in rel.iter() {
                    if m != lhs {
                        add_term(&mut rhs, m.clone(), (&c.neg()) * &lc_inv);
                    }
                }
                Rule {
                    lhs: lhs.clone(),
                    rhs,
                }
            })
            .collect();
        Arc::new(Presentation {
            id: id.to_string(),
            field,
            vars: free.vars.clone(),
            weights: weights.to_vec(),
            relators,
            rules,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_free(&self) -> bool {
        self.rules.is_empty()
    }

    /// Relators as elements of the free ring on the same generators.
    pub fn relators(&self) -> &[Poly] {
        &self.relators
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn monomial(&self, exps: &[u16]) -> Monomial {
        Monomial::from_exps(exps, &self.weights)
    }

    /// Normal form, applying the first matching rule in `order` to the
    /// largest reducible term until no rule applies.
    pub fn reduce_with_order(&self, poly: Poly, order: &[usize]) -> Poly {
        if self.rules.is_empty() {
            return poly;
        }
        let mut work = poly;
        let mut out = Poly::new();
        while let Some((m, c)) = work.pop_last() {
            match order.iter().find(|&&i| self.rules[i].lhs.divides(&m)) {
                Some(&i) => {
                    let rule = &self.rules[i];
                    let q = m.div(&rule.lhs);
                    for (rm, rc) in &rule.rhs {
                        add_term(&mut work, rm.mul(&q), rc * &c);
                    }
                }
                None => {
                    out.insert(m, c);
                }
            }
        }
        out
    }

    pub fn reduce(&self, poly: Poly) -> Poly {
        let order: Vec<usize> = (0..self.rules.len()).collect();
        self.reduce_with_order(poly, &order)
    }

    fn rewrite_once(&self, m: &Monomial, rule: usize) -> Poly {
        let r = &self.rules[rule];
        let q = m.div(&r.lhs);
        let mut p = Poly::new();
        for (rm, rc) in &r.rhs {
            add_term(&mut p, rm.mul(&q), rc.clone());
        }
        p
    }

    /// Critical-pair check: for every pair of rules, rewriting the lcm of the
    /// left-hand sides first by one rule and first by the other reaches the
    /// same normal form. Returns the number of overlaps examined.
    pub fn check_confluence(&self) -> Result<usize> {
        let mut overlaps = 0;
        for i in 0..self.rules.len() {
            for j in (i + 1)..self.rules.len() {
                let l = self.rules[i].lhs.lcm(&self.rules[j].lhs, &self.weights);
                let via_i = self.reduce(self.rewrite_once(&l, i));
                let via_j = self.reduce(self.rewrite_once(&l, j));
                overlaps += 1;
                if via_i != via_j {
                    return Err(Error::VerifyFailed(format!(
                        "{}: overlap {:?} of rules {i} and {j} has two normal forms",
                        self.id,
                        l.exps()
                    )));
                }
            }
        }
        Ok(overlaps)
    }

    pub fn format_poly(&self, poly: &Poly) -> String {
        if poly.is_empty() {
            return "0".to_string();
        }
        let coeff = |c: &FieldElem| {
            let s = c.to_string();
            if s.contains('+') || s.contains('/') {
                format!("({s})")
            } else {
                s
            }
        };
        poly.iter()
            .rev()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .exps()
                    .iter()
                    .zip(&self.vars)
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                    .collect();
                match (vars.is_empty(), c.is_one()) {
                    (true, _) => coeff(c),
                    (false, true) => vars.join("*"),
                    (false, false) => format!("{}*{}", coeff(c), vars.join("*")),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Whether every relator normalizes to zero (the rules generate the relators).
    pub fn relators_vanish(&self) -> bool {
        self.relators
            .iter()
            .all(|r| self.reduce(r.clone()).is_empty())
    }
}

/// Fixed weights for a free-standing presentation built from the helpers below.
fn ring(id: &str, field: Field, vars: &[&str], weights: &[u32], rels: &[&[(u64, &[u16])]]) -> Arc<Presentation> {
    let rels: Vec<Vec<(u64, Vec<u16>)>> = rels
        .iter()
        .map(|r| r.iter().map(|(c, e)| (*c, e.to_vec())).collect())
        .collect();
    Presentation::with_relators(id, field, vars, weights, move |free| {
        rels.iter()
            .map(|terms| {
                terms.iter().fold(RingElem::zero(free), |acc, (c, e)| {
                    &acc + &RingElem::term(free, field.from_bits(*c), e)
                })
            })
            .collect()
    })
}

/// The ground field k as a presentation with no generators.
pub fn ground(field: Field) -> Arc<Presentation> {
    Presentation::free(GROUND, field, &[])
}

/// k[s,t]
pub fn poly_st(field: Field) -> Arc<Presentation> {
    Presentation::free(POLY_ST, field, &["s", "t"])
}

/// k[x]
pub fn poly_x(field: Field) -> Arc<Presentation> {
    Presentation::free(POLY_X, field, &["x"])
}

/// k[a,x,y]
pub fn poly_axy(field: Field) -> Arc<Presentation> {
    Presentation::free(POLY_AXY, field, &["a", "x", "y"])
}

/// k[a,x,y]/(a²+xy), rule a² → xy.
pub fn ring_r(field: Field) -> Arc<Presentation> {
    ring(RING_R, field, &["a", "x", "y"], &[1, 1, 1], &[&[(1, &[2, 0, 0]), (1, &[0, 1, 1])]])
}

/// k[s,t]/(s²,st,t²), rules s² → 0, st → 0, t² → 0.
pub fn ring_a(field: Field) -> Arc<Presentation> {
    ring(
        RING_A,
        field,
        &["s", "t"],
        &[1, 1],
        &[&[(1, &[2, 0])], &[(1, &[1, 1])], &[(1, &[0, 2])]],
    )
}

const RP_RELATOR: &[(u64, &[u16])] = &[(1, &[0, 0, 0, 2]), (1, &[2, 0, 0, 1]), (1, &[0, 1, 1, 1])];
const RPS_RELATOR: &[(u64, &[u16])] = &[
    (1, &[0, 0, 0, 2, 0]),
    (1, &[2, 0, 0, 1, 0]),
    (1, &[0, 1, 1, 1, 0]),
];

/// k[a,x,y,t]/(t²+t(a²+xy)), rule t² → t(a²+xy). The weight 3 on t makes t²
/// the leading monomial.
pub fn ring_rp(field: Field) -> Arc<Presentation> {
    ring(RING_RP, field, &["a", "x", "y", "t"], &[1, 1, 1, 3], &[RP_RELATOR])
}

/// R′[s]: the ring above with a free generator s adjoined.
pub fn ring_rps(field: Field) -> Arc<Presentation> {
    ring(
        RING_RPS,
        field,
        &["a", "x", "y", "t", "s"],
        &[1, 1, 1, 3, 1],
        &[RPS_RELATOR],
    )
}

/// The seven named presentations, in a fixed order.
pub fn named_presentations(field: Field) -> Vec<Arc<Presentation>> {
    vec![
        poly_st(field),
        poly_x(field),
        poly_axy(field),
        ring_r(field),
        ring_a(field),
        ring_rp(field),
        ring_rps(field),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_have_expected_leading_terms() {
        let k = Field::Rational;
        let r = ring_r(k);
        assert_eq!(r.rules().len(), 1);
        assert_eq!(r.rules()[0].lhs.exps(), &[2, 0, 0]);
        let rp = ring_rp(k);
        assert_eq!(rp.rules()[0].lhs.exps(), &[0, 0, 0, 2]);
        let a = ring_a(k);
        let lhs: Vec<_> = a.rules().iter().map(|r| r.lhs.exps().to_vec()).collect();
        assert_eq!(lhs, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert!(a.rules().iter().all(|r| r.rhs.is_empty()));
    }

    #[test]
    fn all_named_presentations_confluent() {
        for k in [Field::Rational, Field::gf4()] {
            for p in named_presentations(k) {
                p.check_confluence().unwrap();
                assert!(p.relators_vanish(), "{}", p.id());
            }
        }
        assert_eq!(ring_a(Field::gf2()).check_confluence().unwrap(), 3);
    }

    #[test]
    fn non_confluent_system_detected() {
        // x² → y and x² → z are two rules with the same head: y ≠ z.
        let k = Field::gf2();
        let p = ring("bad", k, &["x", "y", "z"], &[1, 1, 1], &[
            &[(1, &[2, 0, 0]), (1, &[0, 1, 0])],
            &[(1, &[2, 0, 0]), (1, &[0, 0, 1])],
        ]);
        assert!(p.check_confluence().is_err());
    }
}
