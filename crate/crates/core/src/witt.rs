//! Free symmetric bilinear spaces, Pfister forms in characteristic 2, norm
//! groups over A = k[s,t]/(s²,st,t²), and the distinctness decision for ρ(z̄).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::presentation::{ring_a, RING_A};
use crate::algebra::{Field, FieldElem, Presentation, RingElem};
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::matgroup::Mat;
use crate::mennicke::unit_inverse;
use crate::sample::Sampler;

pub fn is_unit(r: &RingElem) -> bool {
    unit_inverse(r).is_ok()
}

#[derive(Clone, PartialEq, Eq)]
pub struct BilinearSpace {
    gram: Mat,
}

impl BilinearSpace {
    pub fn new(gram: Mat) -> Result<BilinearSpace> {
        if gram.transpose() != gram {
            return Err(Error::BadParameter(format!("Gram matrix {gram} is not symmetric")));
        }
        Ok(BilinearSpace { gram })
    }

    /// ⟨a₁,…,aₙ⟩ with unit entries.
    pub fn diagonal(pres: &Arc<Presentation>, entries: &[RingElem]) -> Result<BilinearSpace> {
        if let Some(e) = entries.iter().find(|e| !is_unit(e)) {
            return Err(Error::NotAUnit(e.to_string()));
        }
        BilinearSpace::new(Mat::diagonal(pres, entries))
    }

    /// A(λ,μ) = (λ 1; 1 μ)
    pub fn a_form(lambda: &RingElem, mu: &RingElem) -> Result<BilinearSpace> {
        let pres = lambda.presentation();
        let one = RingElem::one(pres);
        BilinearSpace::new(Mat::from_rows(
            pres,
            vec![vec![lambda.clone(), one.clone()], vec![one, mu.clone()]],
        )?)
    }

    /// ⟪a,b⟫ = ⟨1,−a,−b,ab⟩.
    pub fn pfister2(a: &RingElem, b: &RingElem) -> Result<BilinearSpace> {
        let pres = a.presentation();
        BilinearSpace::diagonal(pres, &[RingElem::one(pres), a.neg(), b.neg(), a * b])
    }

    pub fn perp(&self, other: &BilinearSpace) -> Result<BilinearSpace> {
        BilinearSpace::new(self.gram.block_sum(&other.gram)?)
    }

    /// Kronecker product of Gram matrices.
    pub fn tensor(&self, other: &BilinearSpace) -> Result<BilinearSpace> {
        let (n, m) = (self.rank(), other.rank());
        let pres = self.presentation();
        let rows = (0..n * m)
            .map(|i| {
                (0..n * m)
                    .map(|j| self.gram.get(i / m, j / m) * other.gram.get(i % m, j % m))
                    .collect()
            })
            .collect();
        BilinearSpace::new(Mat::from_rows(pres, rows)?)
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.dim()
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        self.gram.presentation()
    }

    /// B(v, w) = vᵀ G w
    pub fn value(&self, v: &[RingElem], w: &[RingElem]) -> Result<RingElem> {
        let gw = self.gram.mul_vec(w)?;
        v.iter()
            .zip(&gw)
            .try_fold(RingElem::zero(self.presentation()), |acc, (a, b)| acc.try_add(&a.try_mul(b)?))
    }

    /// Gram matrix in the basis given by the columns of P: PᵀGP.
    pub fn transform(&self, p: &Mat) -> Result<BilinearSpace> {
        BilinearSpace::new(p.transpose().try_mul(&self.gram)?.try_mul(p)?)
    }
}

impl fmt::Display for BilinearSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gram)
    }
}

impl fmt::Debug for BilinearSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.gram)
    }
}

/// True iff PᵀG(E)P = G(F) and det P is a unit.
pub fn congruent_check(e: &BilinearSpace, f: &BilinearSpace, p: &Mat) -> Result<bool> {
    if e.rank() != f.rank() {
        return Err(Error::RankMismatch(e.rank(), f.rank()));
    }
    if p.dim() != e.rank() {
        return Err(Error::RankMismatch(e.rank(), p.dim()));
    }
    Ok(e.transform(p)? == *f && is_unit(&p.det()))
}

/// A verified change of basis from `source` to `target`.
#[derive(Clone, Debug)]
pub struct IsometryWitness {
    p: Mat,
    source: BilinearSpace,
    target: BilinearSpace,
}

impl IsometryWitness {
    pub fn new(source: BilinearSpace, target: BilinearSpace, p: Mat) -> Result<IsometryWitness> {
        if !congruent_check(&source, &target, &p)? {
            let got = source.transform(&p)?;
            return Err(Error::WitnessFailed(format!(
                "basis change gives {got}, expected {target}; det = {}",
                p.det()
            )));
        }
        Ok(IsometryWitness { p, source, target })
    }

    pub fn matrix(&self) -> &Mat {
        &self.p
    }

    pub fn source(&self) -> &BilinearSpace {
        &self.source
    }

    pub fn target(&self) -> &BilinearSpace {
        &self.target
    }
}

fn binomial_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Largest rank for which a missing extension is searched among standard vectors.
const EXTENSION_SEARCH_MAX_RANK: usize = 8;

/// True iff B vanishes on the span of `lagrangian` and the columns extend
/// to a basis with unit determinant, using `extension` when given and
/// otherwise searching among standard basis vectors.
pub fn metabolic_check(
    e: &BilinearSpace,
    lagrangian: &[Vec<RingElem>],
    extension: Option<&[Vec<RingElem>]>,
) -> Result<bool> {
    let n = e.rank();
    if n % 2 == 1 {
        return Err(Error::OddRank(n));
    }
    if lagrangian.len() != n / 2 {
        return Err(Error::DimensionMismatch(format!(
            "lagrangian has {} vectors, need {}",
            lagrangian.len(),
            n / 2
        )));
    }
    for (i, v) in lagrangian.iter().enumerate() {
        for w in &lagrangian[i..] {
            if !e.value(v, w)?.is_zero() {
                return Ok(false);
            }
        }
    }
    let pres = e.presentation();
    let unit_basis = |ext: &[Vec<RingElem>]| -> Result<bool> {
        let cols: Vec<Vec<RingElem>> = lagrangian.iter().chain(ext).cloned().collect();
        Ok(is_unit(&Mat::from_columns(pres, cols)?.det()))
    };
    if let Some(ext) = extension {
        if ext.len() != n / 2 {
            return Err(Error::DimensionMismatch("extension must have rank/2 vectors".into()));
        }
        return unit_basis(ext);
    }
    if n > EXTENSION_SEARCH_MAX_RANK {
        return Err(Error::UnsupportedShape(format!(
            "rank {n}: supply an extension basis"
        )));
    }
    let std_vec = |i: usize| -> Vec<RingElem> {
        (0..n)
            .map(|j| if i == j { RingElem::one(pres) } else { RingElem::zero(pres) })
            .collect()
    };
    for subset in binomial_subsets(n, n / 2) {
        let ext: Vec<Vec<RingElem>> = subset.into_iter().map(std_vec).collect();
        if unit_basis(&ext)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// How one 2-dimensional block of a diagonal form is split off.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PairKind {
    /// ⟨λ,−λ⟩ ≅ A(λ,0) via (eᵢ, λ⁻¹(eᵢ+eⱼ))
    Hyperbolic,
    /// ⟨x,−x⁻¹⟩ ≅ A(x,0) via (eᵢ, x⁻¹eᵢ+eⱼ)
    Inverse,
}

fn pair_kind(di: &RingElem, dj: &RingElem) -> Option<PairKind> {
    if *dj == di.neg() {
        Some(PairKind::Hyperbolic)
    } else if (di * dj).neg().is_one() {
        Some(PairKind::Inverse)
    } else {
        None
    }
}

/// Perfect matching of diagonal entries into ⟨λ,−λ⟩ or ⟨x,−x⁻¹⟩ pairs.
fn match_pairs(diag: &[RingElem]) -> Option<Vec<(usize, usize)>> {
    fn go(diag: &[RingElem], used: &mut Vec<bool>, out: &mut Vec<(usize, usize)>) -> bool {
        let Some(i) = used.iter().position(|u| !u) else {
            return true;
        };
        used[i] = true;
        for j in i + 1..diag.len() {
            if !used[j] && pair_kind(&diag[i], &diag[j]).is_some() {
                used[j] = true;
                out.push((i, j));
                if go(diag, used, out) {
                    return true;
                }
                out.pop();
                used[j] = false;
            }
        }
        used[i] = false;
        false
    }
    let mut used = vec![false; diag.len()];
    let mut out = Vec::new();
    go(diag, &mut used, &mut out).then_some(out)
}

/// A metabolic decomposition: an isometry onto ⟂ A(λₖ,0) together with the
/// Lagrangian (second vector of each block) and its complement.
#[derive(Clone, Debug)]
pub struct MetabolicWitness {
    pub isometry: IsometryWitness,
    pub lambdas: Vec<RingElem>,
    pub kinds: Vec<String>,
}

impl MetabolicWitness {
    fn from_columns(
        space: &BilinearSpace,
        cols: Vec<Vec<RingElem>>,
        kinds: Vec<String>,
    ) -> Result<MetabolicWitness> {
        let pres = space.presentation();
        let p = Mat::from_columns(pres, cols.clone())?;
        let image = space.transform(&p)?;
        let n = space.rank();
        let mut target: Option<BilinearSpace> = None;
        let mut lambdas = Vec::new();
        for b in (0..n).step_by(2) {
            let lambda = image.gram().get(b, b).clone();
            if !is_unit(&lambda) {
                return Err(Error::WitnessFailed(format!("block parameter {lambda} is not a unit")));
            }
            let block = BilinearSpace::a_form(&lambda, &RingElem::zero(pres))?;
            target = Some(match target {
                None => block,
                Some(t) => t.perp(&block)?,
            });
            lambdas.push(lambda);
        }
        let target = target.ok_or(Error::OddRank(0))?;
        let isometry = IsometryWitness::new(space.clone(), target, p)?;
        let lag: Vec<Vec<RingElem>> = cols.iter().skip(1).step_by(2).cloned().collect();
        let ext: Vec<Vec<RingElem>> = cols.iter().step_by(2).cloned().collect();
        if !metabolic_check(space, &lag, Some(&ext))? {
            return Err(Error::WitnessFailed("lagrangian check failed".into()));
        }
        Ok(MetabolicWitness {
            isometry,
            lambdas,
            kinds,
        })
    }
}

fn unit_vec(pres: &Arc<Presentation>, n: usize, i: usize, c: RingElem) -> Vec<RingElem> {
    (0..n)
        .map(|j| if i == j { c.clone() } else { RingElem::zero(pres) })
        .collect()
}

/// Splits a diagonal form into ⟨λ,−λ⟩ and ⟨x,−x⁻¹⟩ blocks and certifies it
/// metabolic.
pub fn diagonal_metabolic_witness(space: &BilinearSpace) -> Result<Option<MetabolicWitness>> {
    let n = space.rank();
    let pres = space.presentation();
    let diag: Vec<RingElem> = (0..n).map(|i| space.gram().get(i, i).clone()).collect();
    if space.gram() != &Mat::diagonal(pres, &diag) {
        return Err(Error::UnsupportedShape("form is not diagonal".into()));
    }
    let Some(pairs) = match_pairs(&diag) else {
        return Ok(None);
    };
    let mut cols = Vec::new();
    let mut kinds = Vec::new();
    for (i, j) in pairs {
        let di_inv = unit_inverse(&diag[i])?;
        let mut second = unit_vec(pres, n, i, di_inv.clone());
        match pair_kind(&diag[i], &diag[j]).expect("matched pair") {
            PairKind::Hyperbolic => {
                second[j] = di_inv;
                kinds.push(format!("<{}, -{}>", diag[i], diag[i]));
            }
            PairKind::Inverse => {
                second[j] = RingElem::one(pres);
                kinds.push(format!("<{}, -{}^-1>", diag[i], diag[i]));
            }
        }
        cols.push(unit_vec(pres, n, i, RingElem::one(pres)));
        cols.push(second);
    }
    MetabolicWitness::from_columns(space, cols, kinds).map(Some)
}

/// LHS ⟂ −RHS for two lists of Pfister forms.
fn witt_difference(lhs: &[BilinearSpace], rhs: &[BilinearSpace]) -> Result<BilinearSpace> {
    let mut it = lhs.iter().cloned().chain(rhs.iter().map(|f| {
        let n = f.rank();
        let pres = f.presentation();
        let neg: Vec<RingElem> = (0..n).map(|i| f.gram().get(i, i).neg()).collect();
        BilinearSpace::new(Mat::diagonal(pres, &neg)).expect("diagonal")
    }));
    let first = it.next().ok_or_else(|| Error::BadParameter("empty relation".into()))?;
    it.try_fold(first, |acc, f| acc.perp(&f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PfisterRelation {
    A,
    B,
    C,
    E,
}

impl fmt::Display for PfisterRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PfisterRelation::A => "(a) <<a,b>><<ab,c>> = <<a,bc>><<b,c>>",
            PfisterRelation::B => "(b) <<1,1>> = 0",
            PfisterRelation::C => "(c) <<a,b>> = <<a^-1,b^-1>>",
            PfisterRelation::E => "(e) <<a,b>> = <<a,(1-a)b>>",
        };
        write!(f, "{s}")
    }
}

fn relation_failed(rel: PfisterRelation, inputs: &[&RingElem], why: &str) -> Error {
    let ins: Vec<String> = inputs.iter().map(|r| r.to_string()).collect();
    Error::RelationFailed {
        relation: format!("{rel}: {why}"),
        inputs: ins.join(", "),
    }
}

/// Relations (a), (b), (c): the Witt difference is a perfect matching of
/// ⟨λ,−λ⟩ and ⟨x,−x⁻¹⟩ blocks.
pub fn check_matched_relation(
    rel: PfisterRelation,
    a: &RingElem,
    b: &RingElem,
    c: &RingElem,
) -> Result<MetabolicWitness> {
    let pres = a.presentation();
    let one = RingElem::one(pres);
    let (lhs, rhs) = match rel {
        PfisterRelation::A => (
            vec![BilinearSpace::pfister2(a, b)?, BilinearSpace::pfister2(&(a * b), c)?],
            vec![BilinearSpace::pfister2(a, &(b * c))?, BilinearSpace::pfister2(b, c)?],
        ),
        PfisterRelation::B => (vec![BilinearSpace::pfister2(&one, &one)?], Vec::new()),
        PfisterRelation::C => (
            vec![BilinearSpace::pfister2(a, b)?],
            vec![BilinearSpace::pfister2(&unit_inverse(a)?, &unit_inverse(b)?)?],
        ),
        PfisterRelation::E => {
            return Err(Error::BadParameter("relation (e) uses check_relation_e".into()))
        }
    };
    let space = witt_difference(&lhs, &rhs)?;
    diagonal_metabolic_witness(&space)?
        .ok_or_else(|| relation_failed(rel, &[a, b, c], "no hyperbolic matching"))
}

/// Relation (e) for a with 1−a a unit: after cancelling ⟨1,−1⟩ and ⟨−a,a⟩
/// the remaining ⟨−b, ab, (1−a)b, −a(1−a)b⟩ is split by
/// v₁ = ((1−a)b)⁻¹e₃, v₂ = e₁+e₂+e₃, v₃ = (−a(1−a)b)⁻¹e₄, v₄ = ae₁+e₂+e₄.
pub fn check_relation_e(a: &RingElem, b: &RingElem) -> Result<MetabolicWitness> {
    let pres = a.presentation();
    let one = RingElem::one(pres);
    let one_a = &one - a;
    if !is_unit(&one_a) {
        return Err(Error::NotAUnit(format!("1 - ({a})")));
    }
    let rhs_b = &one_a * b;
    let space = witt_difference(
        &[BilinearSpace::pfister2(a, b)?],
        &[BilinearSpace::pfister2(a, &rhs_b)?],
    )?;
    // coordinates: 0..4 = <1,-a,-b,ab>, 4..8 = -<1,-a,-(1-a)b,a(1-a)b>
    let n = 8;
    let e = |i: usize, c: RingElem| unit_vec(pres, n, i, c);
    let mut cols = Vec::new();
    for (i, j) in [(0usize, 4usize), (1, 5)] {
        let di = space.gram().get(i, i).clone();
        let di_inv = unit_inverse(&di)?;
        let mut second = e(i, di_inv.clone());
        second[j] = di_inv;
        cols.push(e(i, one.clone()));
        cols.push(second);
    }
    let (i1, i2, i3, i4) = (2usize, 3usize, 6usize, 7usize);
    let v1 = e(i3, unit_inverse(&rhs_b)?);
    let mut v2 = e(i1, one.clone());
    v2[i2] = one.clone();
    v2[i3] = one.clone();
    let v3 = e(i4, unit_inverse(&(a * &rhs_b).neg())?);
    let mut v4 = e(i1, a.clone());
    v4[i2] = one.clone();
    v4[i4] = one.clone();
    cols.extend([v1, v2, v3, v4]);
    MetabolicWitness::from_columns(
        &space,
        cols,
        vec![
            "<1, -1>".into(),
            format!("<{}, -{}>", a.neg(), a.neg()),
            "v1, v2".into(),
            "v3, v4".into(),
        ],
    )
    .map_err(|err| relation_failed(PfisterRelation::E, &[a, b], &err.to_string()))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PfisterReport {
    pub trials: usize,
    pub checked_a: usize,
    pub checked_b: usize,
    pub checked_c: usize,
    pub checked_e: usize,
    /// λ, μ of the first (e) witness
    pub sample_e_lambdas: Vec<String>,
}

/// Checks (a), (b), (c), (e) over A on `trials` seeded random unit tuples
/// of degree ≤ 3. Tuples for (e) need a constant term outside {0,1}; over
/// GF(2) none exists and (e) is not exercised.
pub fn verify_pfister_relations(
    field: Field,
    trials: usize,
    seed: u64,
    mode: ExecMode,
) -> Result<PfisterReport> {
    let a_ring = ring_a(field);
    let results = mode.map_range(0..trials as u64, |i| -> Result<(bool, Vec<String>)> {
        let mut s = Sampler::for_trial(field, seed, i);
        let a = s.local_unit(&a_ring, 3);
        let b = s.local_unit(&a_ring, 3);
        let c = s.local_unit(&a_ring, 3);
        for rel in [PfisterRelation::A, PfisterRelation::B, PfisterRelation::C] {
            check_matched_relation(rel, &a, &b, &c)?;
        }
        if field.order() == Some(2) {
            return Ok((false, Vec::new()));
        }
        let c0 = RingElem::constant(&a_ring, s.scalar_not_0_1());
        let w = &c0 + &s.poly_no_constant(&a_ring, 3, 4);
        let wit = check_relation_e(&w, &b)?;
        Ok((true, wit.lambdas[2..].iter().map(|l| l.to_string()).collect()))
    });
    let mut report = PfisterReport {
        trials,
        ..Default::default()
    };
    for r in results {
        let (did_e, lambdas) = r?;
        report.checked_a += 1;
        report.checked_b += 1;
        report.checked_c += 1;
        if did_e {
            report.checked_e += 1;
            if report.sample_e_lambdas.is_empty() {
                report.sample_e_lambdas = lambdas;
            }
        }
    }
    Ok(report)
}

/// Coordinates (c₀, c_s, c_t) of an element c₀ + c_s s̄ + c_t t̄ of A.
fn a_coords(r: &RingElem) -> [FieldElem; 3] {
    [r.coeff(&[0, 0]), r.coeff(&[1, 0]), r.coeff(&[0, 1])]
}

fn require_ring_a(pres: &Presentation) -> Result<()> {
    if pres.id() != RING_A {
        return Err(Error::UnsupportedShape(format!("expected the ring A, got {}", pres.id())));
    }
    Ok(())
}

/// (λ, μ) for a Gram matrix of shape (λs̄ 1; 1 μt̄) with λ, μ ∈ k×.
pub fn distinguished_params(e: &BilinearSpace) -> Result<(FieldElem, FieldElem)> {
    require_ring_a(e.presentation())?;
    if e.rank() != 2 {
        return Err(Error::UnsupportedShape(format!("rank {}", e.rank())));
    }
    let g = e.gram();
    let pres = e.presentation();
    let s = RingElem::var(pres, "s");
    let t = RingElem::var(pres, "t");
    let lambda = g.get(0, 0).coeff(&[1, 0]);
    let mu = g.get(1, 1).coeff(&[0, 1]);
    let shape_ok = g.get(0, 1).is_one()
        && g.get(1, 0).is_one()
        && *g.get(0, 0) == s.scale(&lambda)
        && *g.get(1, 1) == t.scale(&mu)
        && !lambda.is_zero()
        && !mu.is_zero();
    if !shape_ok {
        return Err(Error::UnsupportedShape(format!(
            "{g} is not of the form (l*s 1; 1 m*t) with l, m nonzero"
        )));
    }
    Ok((lambda, mu))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// (c, d) with B(v,v) = target for v = (c, d)
    pub witness: Option<(FieldElem, FieldElem)>,
}

/// Decides target ∈ 𝔤E for E = (λs̄ 1; 1 μt̄).
///
/// B(v,v) = α₀²λs̄ + β₀²μt̄ for v = (α, β), and sums of squares are squares in
/// characteristic 2, so 𝔤E = {c²λs̄ + d²μt̄ : c, d ∈ k}.
pub fn norm_group_membership(e: &BilinearSpace, target: &RingElem) -> Result<Membership> {
    let (lambda, mu) = distinguished_params(e)?;
    let [c0, cs, ct] = a_coords(target);
    let not_member = Membership {
        member: false,
        witness: None,
    };
    if !c0.is_zero() {
        return Ok(not_member);
    }
    let (ok_s, c) = cs.try_div(&lambda)?.is_square();
    let (ok_t, d) = ct.try_div(&mu)?.is_square();
    if !(ok_s && ok_t) {
        return Ok(not_member);
    }
    let (c, d) = (c.expect("root"), d.expect("root"));
    let pres = e.presentation();
    let v = [RingElem::constant(pres, c.clone()), RingElem::constant(pres, d.clone())];
    let value = e.value(&v, &v)?;
    if value != *target {
        return Err(Error::WitnessFailed(format!("B(v,v) = {value} != {target}")));
    }
    Ok(Membership {
        member: true,
        witness: Some((c, d)),
    })
}

type Triple = [FieldElem; 3];

fn triple_add(p: &Triple, q: &Triple) -> Triple {
    [&p[0] + &q[0], &p[1] + &q[1], &p[2] + &q[2]]
}

/// (p₀ + p_s s + p_t t)(q₀ + q_s s + q_t t) with s² = st = t² = 0.
fn triple_mul(p: &Triple, q: &Triple) -> Triple {
    [
        &p[0] * &q[0],
        &(&p[0] * &q[1]) + &(&p[1] * &q[0]),
        &(&p[0] * &q[2]) + &(&p[2] * &q[0]),
    ]
}

/// Largest field for the brute-force oracle.
pub const ORACLE_MAX_ORDER: u64 = 8;

/// 𝔤E by enumerating all |k|⁶ vectors of A² and closing under addition.
///
/// Arithmetic of A is redone here on coordinate triples, independently of
/// the rewriting engine.
pub fn norm_group_oracle(e: &BilinearSpace, mode: ExecMode) -> Result<BTreeSet<RingElem>> {
    require_ring_a(e.presentation())?;
    if e.rank() != 2 {
        return Err(Error::UnsupportedShape(format!("rank {}", e.rank())));
    }
    let pres = e.presentation().clone();
    let field = pres.field();
    let elems = match field.order() {
        Some(q) if q <= ORACLE_MAX_ORDER => field.elements().expect("finite"),
        Some(q) => return Err(Error::FieldTooLarge(q)),
        None => return Err(Error::FieldTooLarge(u64::MAX)),
    };
    let g: Vec<Triple> = e.gram().entries().iter().map(a_coords).collect();
    let q = elems.len() as u64;
    let total = q.pow(6);
    let triple_of = |mut idx: u64| -> Triple {
        let mut out: [FieldElem; 3] = [field.zero(), field.zero(), field.zero()];
        for slot in out.iter_mut() {
            *slot = elems[(idx % q) as usize].clone();
            idx /= q;
        }
        out
    };
    let values: Vec<Triple> = mode.map_range(0..total, |i| {
        let v = [triple_of(i % q.pow(3)), triple_of(i / q.pow(3))];
        let mut acc = [field.zero(), field.zero(), field.zero()];
        for (r, vr) in v.iter().enumerate() {
            for (c, vc) in v.iter().enumerate() {
                acc = triple_add(&acc, &triple_mul(&triple_mul(vr, &g[r * 2 + c]), vc));
            }
        }
        acc
    });
    let generators: BTreeSet<Triple> = values.into_iter().collect();
    let mut span: BTreeSet<Triple> = BTreeSet::new();
    span.insert([field.zero(), field.zero(), field.zero()]);
    for gen in generators {
        if span.contains(&gen) {
            continue;
        }
        let shifted: Vec<Triple> = span.iter().map(|x| triple_add(x, &gen)).collect();
        span.extend(shifted);
    }
    let s = RingElem::var(&pres, "s");
    let t = RingElem::var(&pres, "t");
    Ok(span
        .into_iter()
        .map(|[c0, cs, ct]| &(&RingElem::constant(&pres, c0) + &s.scale(&cs)) + &t.scale(&ct))
        .collect())
}

/// All |k|³ elements of A for a finite field.
pub fn all_elements_of_a(field: Field) -> Result<Vec<RingElem>> {
    let elems = field
        .elements()
        .ok_or(Error::FieldTooLarge(u64::MAX))?;
    let pres = ring_a(field);
    let s = RingElem::var(&pres, "s");
    let t = RingElem::var(&pres, "t");
    let mut out = Vec::new();
    for c0 in &elems {
        for cs in &elems {
            for ct in &elems {
                out.push(&(&RingElem::constant(&pres, c0.clone()) + &s.scale(cs)) + &t.scale(ct));
            }
        }
    }
    Ok(out)
}

/// Anisotropy of (λs̄ 1; 1 μt̄), λ, μ ∈ k×.
///
/// B(v,v) is expanded for a generic v = (α₀+α₁s+α₂t, β₀+β₁s+β₂t) in
/// k[s,t,α₀,α₁,α₂,β₀,β₁,β₂]/(s²,st,t²) and compared with λα₀²s + μβ₀²t. That
/// value vanishes only when α₀ = β₀ = 0, i.e. v ∈ 𝔪A², and such v does not
/// generate a direct summand since A is local.
pub fn anisotropic_check(e: &BilinearSpace) -> Result<(bool, String)> {
    let (lambda, mu) = distinguished_params(e)?;
    let field = e.presentation().field();
    let vars = ["s", "t", "a0", "a1", "a2", "b0", "b1", "b2"];
    let aux = Presentation::with_relators("A_generic", field, &vars, &[1; 8], |free| {
        let s = RingElem::var(free, "s");
        let t = RingElem::var(free, "t");
        vec![&s * &s, &s * &t, &t * &t]
    });
    let v = |n: &str| RingElem::var(&aux, n);
    let (s, t) = (v("s"), v("t"));
    let alpha = &(&v("a0") + &(&v("a1") * &s)) + &(&v("a2") * &t);
    let beta = &(&v("b0") + &(&v("b1") * &s)) + &(&v("b2") * &t);
    let one = RingElem::one(&aux);
    let g00 = s.scale(&lambda);
    let g11 = t.scale(&mu);
    let q = &(&(&(&alpha * &alpha) * &g00) + &(&(&alpha * &beta) * &one))
        + &(&(&(&beta * &alpha) * &one) + &(&(&beta * &beta) * &g11));
    let expected = &(&(&v("a0") * &v("a0")) * &g00) + &(&(&v("b0") * &v("b0")) * &g11);
    Ok((q == expected, q.to_string()))
}

/// A(λs̄, μt̄) over A.
pub fn distinguished_space(field: Field, lambda: &FieldElem, mu: &FieldElem) -> Result<BilinearSpace> {
    let a = ring_a(field);
    BilinearSpace::a_form(
        &RingElem::var(&a, "s").scale(lambda),
        &RingElem::var(&a, "t").scale(mu),
    )
}

/// Checks 𝔪² = 0 and 2 = 0 in `pres` (generators s, t) and that both
/// distinguished forms A(s̄,t̄), A(us̄,u⁻¹t̄) have determinant 1.
pub fn knebusch_hypotheses(pres: &Arc<Presentation>, u: &FieldElem) -> Result<bool> {
    if pres.var_index("s").is_none() || pres.var_index("t").is_none() {
        return Err(Error::HypothesisFailed(format!("{} has no generators s, t", pres.id())));
    }
    let s = RingElem::var(pres, "s");
    let t = RingElem::var(pres, "t");
    for (name, val) in [("s^2", &s * &s), ("s*t", &s * &t), ("t^2", &t * &t)] {
        if !val.is_zero() {
            return Err(Error::HypothesisFailed(format!("{name} = {val} != 0 in {}", pres.id())));
        }
    }
    let one = RingElem::one(pres);
    if !(&one + &one).is_zero() {
        return Err(Error::HypothesisFailed("2 != 0".into()));
    }
    let ui = u.inv()?;
    for (l, m) in [(s.clone(), t.clone()), (s.scale(u), t.scale(&ui))] {
        let det = BilinearSpace::a_form(&l, &m)?.gram().det();
        if !det.is_one() {
            return Err(Error::HypothesisFailed(format!("det A({l}, {m}) = {det}")));
        }
    }
    Ok(true)
}

/// ⟨1, 1+u⁻¹t̄, 1+us̄, 1+u⁻¹t̄+us̄⟩ ≅ A(us̄,u⁻¹t̄) ⟂ A(1,0) via
/// v₁ = (0,r,0,p), v₂ = (0,0,r,q), v₃ = e₁, v₄ = (1,1,1,1) with p = 1+u⁻¹t̄,
/// q = 1+us̄, r = pq. For u = 1 this is ⟪1+t̄,1+s̄⟫ ≅ A(s̄,t̄) ⟂ A(1,0).
pub fn lemma47_isometry(u: &FieldElem) -> Result<IsometryWitness> {
    if u.is_zero() {
        return Err(Error::BadParameter("u = 0".into()));
    }
    let field = u.field();
    let a = ring_a(field);
    let one = RingElem::one(&a);
    let zero = RingElem::zero(&a);
    let s = RingElem::var(&a, "s");
    let t = RingElem::var(&a, "t");
    let ui = u.inv()?;
    let p = &one + &t.scale(&ui);
    let q = &one + &s.scale(u);
    let r = &p * &q;
    let source = BilinearSpace::pfister2(&p, &q)?;
    let listed = BilinearSpace::diagonal(
        &a,
        &[one.clone(), p.clone(), q.clone(), &(&one + &t.scale(&ui)) + &s.scale(u)],
    )?;
    if source != listed {
        return Err(Error::WitnessFailed(format!("{source} != {listed}")));
    }
    let basis = Mat::from_columns(
        &a,
        vec![
            vec![zero.clone(), r.clone(), zero.clone(), p.clone()],
            vec![zero.clone(), zero.clone(), r.clone(), q.clone()],
            vec![one.clone(), zero.clone(), zero.clone(), zero.clone()],
            vec![one.clone(), one.clone(), one.clone(), one.clone()],
        ],
    )?;
    let target = BilinearSpace::a_form(&s.scale(u), &t.scale(&ui))?
        .perp(&BilinearSpace::a_form(&one, &zero)?)?;
    IsometryWitness::new(source, target, basis)
}

/// Formal symbol {x,y}_α raised to ±1.
#[derive(Clone, Debug)]
pub struct FormalSymbol {
    pub x: RingElem,
    pub y: RingElem,
    pub inverse: bool,
}

impl fmt::Display for FormalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.x, self.y)?;
        if self.inverse {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

/// z̄ = {1+u⁻¹t̄, 1+us̄}·{1+t̄, 1+s̄}⁻¹
pub fn zbar_symbols(u: &FieldElem) -> Result<Vec<FormalSymbol>> {
    let a = ring_a(u.field());
    let one = RingElem::one(&a);
    let s = RingElem::var(&a, "s");
    let t = RingElem::var(&a, "t");
    Ok(vec![
        FormalSymbol {
            x: &one + &t.scale(&u.inv()?),
            y: &one + &s.scale(u),
            inverse: false,
        },
        FormalSymbol {
            x: &one + &t,
            y: &one + &s,
            inverse: true,
        },
    ])
}

#[derive(Clone, Debug, Serialize)]
pub struct Distinctness {
    pub distinct: bool,
    pub witness: Option<String>,
    pub rho: String,
    pub note: String,
}

/// Decides whether ρ(z̄) = A(us̄,u⁻¹t̄) − A(s̄,t̄) is nonzero in W(A).
///
/// ρ sends {x,y} to ⟪x,y⟫; the two Pfister forms are identified with
/// A(us̄,u⁻¹t̄) ⟂ A(1,0) and A(s̄,t̄) ⟂ A(1,0) by verified isometries, and
/// A(1,0) is metabolic. The two spaces are nondegenerate and anisotropic
/// over a local ring with 𝔪² = 0 and 2 = 0, so they are Witt-equivalent
/// only if isometric; differing norm groups rule that out.
pub fn rho_zbar_distinctness(u: &FieldElem) -> Result<Distinctness> {
    if u.is_zero() || u.is_one() {
        return Err(Error::BadParameter(format!("u = {u} must avoid 0 and 1")));
    }
    let field = u.field();
    let a = ring_a(field);
    let symbols = zbar_symbols(u)?;
    for sym in &symbols {
        BilinearSpace::pfister2(&sym.x, &sym.y)?;
    }
    lemma47_isometry(u)?;
    lemma47_isometry(&field.one())?;
    let a10 = BilinearSpace::a_form(&RingElem::one(&a), &RingElem::zero(&a))?;
    let zero_vec = vec![RingElem::zero(&a), RingElem::one(&a)];
    if !metabolic_check(&a10, &[zero_vec], None)? {
        return Err(Error::WitnessFailed("A(1,0) not metabolic".into()));
    }
    let plus = distinguished_space(field, u, &u.inv()?)?;
    let minus = distinguished_space(field, &field.one(), &field.one())?;
    let rho = format!(
        "rho({} * {}) = <<{}, {}>> - <<{}, {}>> = A({}, {}) - A({}, {})",
        symbols[0],
        symbols[1],
        symbols[0].x,
        symbols[0].y,
        symbols[1].x,
        symbols[1].y,
        plus.gram().get(0, 0),
        plus.gram().get(1, 1),
        minus.gram().get(0, 0),
        minus.gram().get(1, 1),
    );
    if u.is_square().0 {
        return Ok(Distinctness {
            distinct: false,
            witness: None,
            rho,
            note: format!("u = {u} is a square in k"),
        });
    }
    knebusch_hypotheses(&a, u)?;
    for sp in [&plus, &minus] {
        let (ok, expansion) = anisotropic_check(sp)?;
        if !ok {
            return Err(Error::HypothesisFailed(format!("anisotropy of {sp}: {expansion}")));
        }
    }
    let us = RingElem::var(&a, "s").scale(u);
    let in_plus = norm_group_membership(&plus, &us)?;
    let in_minus = norm_group_membership(&minus, &us)?;
    if in_plus.member && !in_minus.member {
        Ok(Distinctness {
            distinct: true,
            witness: Some(us.to_string()),
            rho,
            note: format!("{us} lies in the norm group of {plus} but not of {minus}"),
        })
    } else {
        Ok(Distinctness {
            distinct: false,
            witness: None,
            rho,
            note: format!("norm groups do not separate on {us}"),
        })
    }
}
