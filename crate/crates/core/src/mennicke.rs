//! Mennicke symbols with constructive certificates.
//!
//! A symbol [a,b] is carried together with a completion C ∈ SL₂ whose first
//! row is (a,b). Triviality of the symbol is witnessed by an
//! [`ElementaryCertificate`] for diag(C,1) ∈ SL₃.

use std::sync::Arc;

use crate::algebra::presentation::{ring_r, RING_R};
use crate::algebra::{FieldElem, Presentation, RingElem};
use crate::error::{Error, Result};
use crate::matgroup::{build_m0, factor_product, inverse_factors, ElemFactor, Mat};

pub use crate::matgroup::ElementaryCertificate;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MennickeSymbol {
    completion: Mat,
}

impl MennickeSymbol {
    /// Symbol of the first row of a 2×2 determinant-one matrix.
    pub fn new(completion: Mat) -> Result<MennickeSymbol> {
        if completion.dim() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "completion must be 2x2, got {}x{}",
                completion.dim(),
                completion.dim()
            )));
        }
        let det = completion.det();
        if !det.is_one() {
            return Err(Error::WitnessFailed(format!("completion has determinant {det}")));
        }
        Ok(MennickeSymbol { completion })
    }

    pub fn from_entries(
        pres: &Arc<Presentation>,
        a: RingElem,
        b: RingElem,
        c: RingElem,
        d: RingElem,
    ) -> Result<MennickeSymbol> {
        MennickeSymbol::new(Mat::from_rows(pres, vec![vec![a, b], vec![c, d]])?)
    }

    pub fn a(&self) -> &RingElem {
        self.completion.get(0, 0)
    }

    pub fn b(&self) -> &RingElem {
        self.completion.get(0, 1)
    }

    pub fn completion(&self) -> &Mat {
        &self.completion
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        self.completion.presentation()
    }

    /// diag(C, 1)
    pub fn stabilized(&self) -> Mat {
        let pres = self.presentation();
        self.completion
            .block_sum(&Mat::identity(pres, 1))
            .expect("same presentation")
    }
}

impl std::fmt::Display for MennickeSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.a(), self.b())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry {
    First,
    Second,
}

/// new completion = (∏ left)·old·(∏ right), all 2×2 elementary.
#[derive(Clone, Debug, Default)]
pub struct ShiftWitness {
    pub left: Vec<ElemFactor>,
    pub right: Vec<ElemFactor>,
}

impl ShiftWitness {
    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    pub fn check(&self, old: &Mat, new: &Mat) -> Result<()> {
        let pres = old.presentation();
        let lhs = factor_product(pres, 2, &self.left)?
            .try_mul(old)?
            .try_mul(&factor_product(pres, 2, &self.right)?)?;
        if &lhs != new {
            return Err(Error::WitnessFailed(format!("{lhs} != {new}")));
        }
        Ok(())
    }
}

/// [a,b] → [a+tb, b] (first) or [a, b+ta] (second).
pub fn symbol_shift(
    sym: &MennickeSymbol,
    which: Entry,
    t: &RingElem,
) -> Result<(MennickeSymbol, ShiftWitness)> {
    if t.is_zero() {
        return Ok((sym.clone(), ShiftWitness::default()));
    }
    let factor = match which {
        Entry::First => ElemFactor::new(2, 1, t.clone()),
        Entry::Second => ElemFactor::new(1, 2, t.clone()),
    };
    let new = sym.completion.try_mul(&factor.to_mat(2)?)?;
    let witness = ShiftWitness {
        left: Vec::new(),
        right: vec![factor],
    };
    witness.check(&sym.completion, &new)?;
    let expected = match which {
        Entry::First => (sym.a() + &(t * sym.b()), sym.b().clone()),
        Entry::Second => (sym.a().clone(), sym.b() + &(t * sym.a())),
    };
    if (new.get(0, 0), new.get(0, 1)) != (&expected.0, &expected.1) {
        return Err(Error::WitnessFailed(format!("shifted row is not ({}, {})", expected.0, expected.1)));
    }
    Ok((MennickeSymbol::new(new)?, witness))
}

/// Turns a certificate for the shifted symbol into one for the original,
/// using old = L⁻¹·new·R⁻¹.
pub fn certificate_before_shift(
    old: &MennickeSymbol,
    witness: &ShiftWitness,
    new_cert: &ElementaryCertificate,
) -> Result<ElementaryCertificate> {
    let mut factors = inverse_factors(&witness.left);
    factors.extend_from_slice(new_cert.factors());
    factors.extend(inverse_factors(&witness.right));
    ElementaryCertificate::new(old.stabilized(), factors)
}

/// Inverse of a unit. Over R and over polynomial rings the units are the
/// nonzero constants; elsewhere the nilpotent-series inverse is used.
pub fn unit_inverse(r: &RingElem) -> Result<RingElem> {
    if let Some(c) = r.as_constant() {
        if c.is_zero() {
            return Err(Error::NotAUnit(r.to_string()));
        }
        return Ok(RingElem::constant(r.presentation(), c.inv()?));
    }
    let pres = r.presentation();
    if pres.is_free() || pres.id() == RING_R {
        return Err(Error::NotAUnit(r.to_string()));
    }
    r.inverse()
}

/// diag(a, a⁻¹) = w(a)·w(−1) with w(x) = e₁₂(x)e₂₁(−x⁻¹)e₁₂(x).
fn diag_factors(a: &RingElem, a_inv: &RingElem) -> Vec<ElemFactor> {
    let one = RingElem::one(a.presentation());
    vec![
        ElemFactor::new(1, 2, a.clone()),
        ElemFactor::new(2, 1, a_inv.neg()),
        ElemFactor::new(1, 2, a.clone()),
        ElemFactor::new(1, 2, one.neg()),
        ElemFactor::new(2, 1, one.clone()),
        ElemFactor::new(1, 2, one.neg()),
    ]
}

fn prune(factors: Vec<ElemFactor>) -> Vec<ElemFactor> {
    factors.into_iter().filter(|f| !f.r.is_zero()).collect()
}

/// Elementary factorization of diag(C,1) when a or b is a unit.
///
/// For a unit first entry, C = e₂₁(ca⁻¹)·diag(a,a⁻¹)·e₁₂(a⁻¹b). For a unit
/// second entry the first entry is first shifted to 1 by t = b⁻¹(1−a).
pub fn symbol_unit_certificate(sym: &MennickeSymbol) -> Result<ElementaryCertificate> {
    let (a, b) = (sym.a(), sym.b());
    if let Ok(a_inv) = unit_inverse(a) {
        let c = sym.completion.get(1, 0);
        let mut factors = vec![ElemFactor::new(2, 1, c * &a_inv)];
        if !a.is_one() {
            factors.extend(diag_factors(a, &a_inv));
        }
        factors.push(ElemFactor::new(1, 2, &a_inv * b));
        return ElementaryCertificate::new(sym.stabilized(), prune(factors));
    }
    if let Ok(b_inv) = unit_inverse(b) {
        let one = RingElem::one(sym.presentation());
        let t = &b_inv * &(&one - a);
        let (shifted, witness) = symbol_shift(sym, Entry::First, &t)?;
        let cert = symbol_unit_certificate(&shifted)?;
        return certificate_before_shift(sym, &witness, &cert);
    }
    Err(Error::NotAUnit(format!("neither entry of {sym} is a unit")))
}

/// Factors L with (∏L)·M = M′ for M, M′ ∈ SL₂ with equal first rows.
///
/// Such M′ differs from M by adding λ·(row 1) to row 2, and λ is read off
/// as the (2,1) entry of M′·adj(M).
pub fn completion_shift(m: &Mat, m2: &Mat) -> Result<Vec<ElemFactor>> {
    if m.dim() != 2 || m2.dim() != 2 {
        return Err(Error::DimensionMismatch("completions must be 2x2".into()));
    }
    if m.row(0) != m2.row(0) {
        return Err(Error::BadParameter(format!(
            "first rows differ: ({}, {}) vs ({}, {})",
            m.get(0, 0),
            m.get(0, 1),
            m2.get(0, 0),
            m2.get(0, 1)
        )));
    }
    if m == m2 {
        return Ok(Vec::new());
    }
    let pres = m.presentation();
    let adj = Mat::from_rows(
        pres,
        vec![
            vec![m.get(1, 1).clone(), m.get(0, 1).neg()],
            vec![m.get(1, 0).neg(), m.get(0, 0).clone()],
        ],
    )?;
    let lambda = m2.try_mul(&adj)?.get(1, 0).clone();
    let factors = vec![ElemFactor::new(2, 1, lambda)];
    if factor_product(pres, 2, &factors)?.try_mul(m)? != *m2 {
        return Err(Error::NoSolutionInBound(format!("no row operation takes {m} to {m2}")));
    }
    Ok(factors)
}

/// Relabels 3×3 factors by the cycle 1→2→3→1, taking diag(Y,1) to diag(1,Y).
fn shift_indices(factors: &[ElemFactor]) -> Vec<ElemFactor> {
    let next = |i: usize| i % 3 + 1;
    factors
        .iter()
        .map(|f| ElemFactor::new(next(f.i), next(f.j), f.r.clone()))
        .collect()
}

/// Builds a certificate for the product symbol [a, bb′] from certificates
/// for two symbols sharing the first entry a.
///
/// With X = (a b; c d), Y = (a b′; c′ d′) and Z = (a bb′; −cc′, d′−c′db′):
/// diag(Z,1) = w₂₃·e₃₂(−c′)·diag(X,1)·diag(1,Y)·w₂₃(−1)·e₁₃(b)·e₃₁(c)·e₃₂(db′).
#[derive(Clone, Debug)]
pub struct MultCombinator {
    x: MennickeSymbol,
    y: MennickeSymbol,
    product: MennickeSymbol,
}

impl MultCombinator {
    pub fn product(&self) -> &MennickeSymbol {
        &self.product
    }

    pub fn apply(
        &self,
        cert_x: &ElementaryCertificate,
        cert_y: &ElementaryCertificate,
    ) -> Result<ElementaryCertificate> {
        if cert_x.target() != &self.x.stabilized() || cert_y.target() != &self.y.stabilized() {
            return Err(Error::WitnessFailed(
                "certificates do not match the factor symbols".into(),
            ));
        }
        let pres = self.product.presentation();
        let one = RingElem::one(pres);
        let x = self.x.completion();
        let (b, c, d) = (x.get(0, 1), x.get(1, 0), x.get(1, 1));
        let y = self.y.completion();
        let (b2, c2) = (y.get(0, 1), y.get(1, 0));
        let mut factors = vec![
            ElemFactor::new(2, 3, one.clone()),
            ElemFactor::new(3, 2, one.neg()),
            ElemFactor::new(2, 3, one.clone()),
            ElemFactor::new(3, 2, c2.neg()),
        ];
        factors.extend_from_slice(cert_x.factors());
        factors.extend(shift_indices(cert_y.factors()));
        factors.extend([
            ElemFactor::new(2, 3, one.neg()),
            ElemFactor::new(3, 2, one.clone()),
            ElemFactor::new(2, 3, one.neg()),
            ElemFactor::new(1, 3, b.clone()),
            ElemFactor::new(3, 1, c.clone()),
            ElemFactor::new(3, 2, d * b2),
        ]);
        ElementaryCertificate::new(self.product.stabilized(), prune(factors))
    }
}

/// [a,b]·[a,b′] = [a,bb′], with a combinator producing the certificate.
pub fn symbol_mult_second(
    s1: &MennickeSymbol,
    s2: &MennickeSymbol,
) -> Result<(MennickeSymbol, MultCombinator)> {
    if s1.a() != s2.a() {
        return Err(Error::FirstEntryMismatch(s1.a().to_string(), s2.a().to_string()));
    }
    let x = s1.completion();
    let y = s2.completion();
    let (a, b, c, d) = (x.get(0, 0), x.get(0, 1), x.get(1, 0), x.get(1, 1));
    let (b2, c2, d2) = (y.get(0, 1), y.get(1, 0), y.get(1, 1));
    let product = MennickeSymbol::from_entries(
        s1.presentation(),
        a.clone(),
        b * b2,
        (c * c2).neg(),
        d2 - &(&(c2 * d) * b2),
    )?;
    Ok((
        product.clone(),
        MultCombinator {
            x: s1.clone(),
            y: s2.clone(),
            product,
        },
    ))
}

/// One step of the symbol chain, for the report.
#[derive(Clone, Debug)]
pub struct ChainStep {
    pub name: String,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Lemma21Chain {
    pub certificate: ElementaryCertificate,
    pub steps: Vec<ChainStep>,
}

fn step_err(step: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::ChainStepFailed {
        step: step.to_string(),
        detail: e.to_string(),
    }
}

fn require(step: &str, ok: bool, detail: String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ChainStepFailed {
            step: step.to_string(),
            detail,
        })
    }
}

/// Certificate that diag(M₀(u),1) is elementary over R.
///
/// [A₀, B₀] with A₀ = 1+(1+u)a², B₀ = (1+u)(1+a)y is split as
/// [A₀,1+u]·[A₀,y]·[A₀,1+a]. The first is trivial since 1+u ∈ k×, the second
/// becomes [1,y] after adding (1+u)x·y to the first entry, and the third
/// becomes [u,1+a] after adding (1+u)(1+a)·(1+a), using
/// 1+(1+u)a²+(1+u)(1+a²) = u.
pub fn run_lemma21_chain(u: &FieldElem) -> Result<Lemma21Chain> {
    let m0 = build_m0(u)?;
    let k = u.field();
    let r = ring_r(k);
    let one = RingElem::one(&r);
    let zero = RingElem::zero(&r);
    let a = RingElem::var(&r, "a");
    let x = RingElem::var(&r, "x");
    let y = RingElem::var(&r, "y");
    let c = &k.one() + u;
    let cu = RingElem::constant(&r, c.clone());
    let uu = RingElem::constant(&r, u.clone());
    let one_a = &one + &a;
    let a0 = m0.get(0, 0).clone();
    let mut steps = Vec::new();

    let lhs = (&one_a * &one_a).scale(&c);
    let rhs = (&one + &(&a * &a)).scale(&c);
    require("square-of-1+a", lhs == rhs, format!("{lhs} != {rhs}"))?;
    let sum = &a0 + &rhs;
    require("first-entry-collapse", sum == uu, format!("1+(1+u)a^2+(1+u)(1+a^2) = {sum}"))?;
    steps.push(ChainStep {
        name: "identities".into(),
        detail: format!("(1+u)(1+a)^2 = (1+u)(1+a^2); 1+(1+u)a^2+(1+u)(1+a^2) = {sum}"),
    });

    let s1 = MennickeSymbol::from_entries(&r, a0.clone(), cu.clone(), unit_inverse(&cu)?.neg(), zero.clone())
        .map_err(step_err("symbol [A0, 1+u]"))?;
    let cert1 = symbol_unit_certificate(&s1).map_err(step_err("symbol [A0, 1+u]"))?;
    steps.push(ChainStep {
        name: "[A0, 1+u]".into(),
        detail: format!("1+u is a unit; {} factors", cert1.len()),
    });

    let tx = x.scale(&c);
    let s2 = MennickeSymbol::from_entries(&r, a0.clone(), y.clone(), tx.clone(), one.clone())
        .map_err(step_err("symbol [A0, y]"))?;
    let (s2_shifted, w2) = symbol_shift(&s2, Entry::First, &tx).map_err(step_err("symbol [A0, y]"))?;
    require("symbol [A0, y]", s2_shifted.a().is_one(), format!("shifted to {s2_shifted}"))?;
    let cert2 = certificate_before_shift(&s2, &w2, &symbol_unit_certificate(&s2_shifted)?)
        .map_err(step_err("symbol [A0, y]"))?;
    steps.push(ChainStep {
        name: "[A0, y]".into(),
        detail: format!("[A0 + (1+u)x*y, y] = {s2_shifted}; {} factors", cert2.len()),
    });

    let t3 = one_a.scale(&c);
    let base = Mat::from_rows(&r, vec![vec![uu.clone(), one_a.clone()], vec![zero, unit_inverse(&uu)?]])?;
    let s3 = MennickeSymbol::new(base.try_mul(&ElemFactor::new(2, 1, t3.clone()).to_mat(2)?)?)
        .map_err(step_err("symbol [A0, 1+a]"))?;
    require("symbol [A0, 1+a]", s3.a() == &a0, format!("completion has first entry {}", s3.a()))?;
    let (s3_shifted, w3) = symbol_shift(&s3, Entry::First, &t3).map_err(step_err("symbol [A0, 1+a]"))?;
    require("symbol [A0, 1+a]", s3_shifted.a() == &uu, format!("shifted to {s3_shifted}"))?;
    let cert3 = certificate_before_shift(&s3, &w3, &symbol_unit_certificate(&s3_shifted)?)
        .map_err(step_err("symbol [A0, 1+a]"))?;
    steps.push(ChainStep {
        name: "[A0, 1+a]".into(),
        detail: format!("[A0 + (1+u)(1+a)^2, 1+a] = {s3_shifted}; {} factors", cert3.len()),
    });

    let (s12, comb12) = symbol_mult_second(&s1, &s2).map_err(step_err("multiply"))?;
    let cert12 = comb12.apply(&cert1, &cert2).map_err(step_err("multiply"))?;
    let (s123, comb123) = symbol_mult_second(&s12, &s3).map_err(step_err("multiply"))?;
    let cert123 = comb123.apply(&cert12, &cert3).map_err(step_err("multiply"))?;
    require(
        "multiply",
        s123.b() == m0.get(0, 1),
        format!("product symbol {s123} has second entry != {}", m0.get(0, 1)),
    )?;
    steps.push(ChainStep {
        name: "multiplicativity".into(),
        detail: format!("{s123}; {} factors", cert123.len()),
    });

    let lift = completion_shift(s123.completion(), &m0).map_err(step_err("completion"))?;
    let mut factors = lift.clone();
    factors.extend_from_slice(cert123.factors());
    let certificate = ElementaryCertificate::new(m0.block_sum(&Mat::identity(&r, 1))?, factors)
        .map_err(step_err("final"))?;
    steps.push(ChainStep {
        name: "completion".into(),
        detail: format!(
            "M0 = e21({}) * completion; certificate of {} factors",
            lift.first().map(|f| f.r.to_string()).unwrap_or_else(|| "0".into()),
            certificate.len()
        ),
    });
    Ok(Lemma21Chain { certificate, steps })
}
