//! Universal-envelope arithmetic with PBW normal ordering, Drinfeld twists and
//! the twisted Hopf structure they induce, truncated at a fixed order in the
//! deformation parameters.
//!
//! Monomials are kept in canonical PBW order: central generators first, then
//! by family, then by ascending index (the derived order on `Generator`).
//! Closed-form coalgebra data (grouplike exponentials, fractional powers of
//! 1 + chi*T[n]) is always handled through its series expansion, so every
//! identity below is decided exactly in the scalar ring.

use crate::algebra::{bracket, AlgError, AlgebraElement, AlgebraName, Family, Generator};
use crate::scalar::{GaussianRational, Scalar};
use crate::tensor::TensorElement;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HopfError {
    #[error("required generator leaves the window: {0}")]
    WindowOverflow(String),
    #[error("bad twist parameter: {0}")]
    BadParameter(String),
    #[error("not a twist: {0}")]
    NotATwist(String),
    #[error("element is not invertible as a series")]
    NotInvertible,
}

impl From<AlgError> for HopfError {
    fn from(e: AlgError) -> Self {
        match e {
            AlgError::IndexOutOfWindow(a, g) => HopfError::WindowOverflow(format!("{a}: {g}")),
            other => HopfError::BadParameter(other.to_string()),
        }
    }
}

/// Truncation context: every product drops terms whose total degree in
/// `params` exceeds `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trunc {
    pub params: BTreeSet<String>,
    pub order: i64,
}

impl Trunc {
    pub fn new(params: &[&str], order: usize) -> Self {
        Self {
            params: params.iter().map(|s| s.to_string()).collect(),
            order: order as i64,
        }
    }

    pub fn cut(&self, s: &Scalar) -> Scalar {
        s.truncate_total_degree(&self.params, self.order)
    }
}

/// A PBW monomial: a non-decreasing sequence of generators.
pub type PbwMono = Vec<Generator>;

/// Sparse element of the universal envelope in PBW basis.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EnvelopeElement {
    pub algebra: AlgebraName,
    pub terms: BTreeMap<PbwMono, Scalar>,
}

impl EnvelopeElement {
    pub fn zero(algebra: AlgebraName) -> Self {
        Self { algebra, terms: BTreeMap::new() }
    }

    pub fn one(algebra: AlgebraName) -> Self {
        let mut e = Self::zero(algebra);
        e.add_term(vec![], Scalar::one());
        e
    }

    pub fn gen(algebra: AlgebraName, g: Generator) -> Self {
        let mut e = Self::zero(algebra);
        e.add_term(vec![g], Scalar::one());
        e
    }

    pub fn from_element(x: &AlgebraElement) -> Self {
        let mut e = Self::zero(x.algebra);
        for (g, c) in &x.terms {
            e.add_term(vec![*g], c.clone());
        }
        e
    }

    pub fn add_term(&mut self, mono: PbwMono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        debug_assert!(mono.windows(2).all(|w| w[0] <= w[1]), "monomial not PBW-ordered");
        let entry = self.terms.entry(mono).or_insert_with(Scalar::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.algebra, other.algebra);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::int(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.algebra);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x.mul(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the empty monomial; this is also the counit.
    pub fn constant_term(&self) -> Scalar {
        self.terms.get(&vec![]).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn mul(&self, other: &Self, trunc: &Trunc) -> Result<Self, HopfError> {
        assert_eq!(self.algebra, other.algebra);
        let mut out = Self::zero(self.algebra);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = trunc.cut(&ca.mul(cb));
                if c.is_zero() {
                    continue;
                }
                let mut w = ma.clone();
                w.extend_from_slice(mb);
                let no = normal_order(self.algebra, &w)?;
                for (m, k) in &no.terms {
                    out.add_term(m.clone(), trunc.cut(&c.mul(k)));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize, trunc: &Trunc) -> Result<Self, HopfError> {
        let mut out = Self::one(self.algebra);
        for _ in 0..k {
            out = out.mul(self, trunc)?;
        }
        Ok(out)
    }

    /// Series inverse of 1 + w (requires constant term exactly 1).
    pub fn inverse(&self, trunc: &Trunc) -> Result<Self, HopfError> {
        if !self.constant_term().is_one() {
            return Err(HopfError::NotInvertible);
        }
        let w = self.sub(&Self::one(self.algebra));
        let mut out = Self::one(self.algebra);
        let mut pw = Self::one(self.algebra);
        for k in 1..=(trunc.order as usize) {
            pw = pw.mul(&w, trunc)?;
            if pw.is_zero() {
                break;
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            out = out.add(&pw.scale(&Scalar::int(sign)));
        }
        Ok(out)
    }

    pub fn canon(&self, trunc: &Trunc) -> Self {
        let mut out = Self::zero(self.algebra);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), trunc.cut(c));
        }
        out
    }
}

type NoCache = BTreeMap<(AlgebraName, PbwMono), Result<EnvelopeElement, HopfError>>;

static NO_CACHE: OnceLock<Mutex<NoCache>> = OnceLock::new();

/// Rewrites an arbitrary word of generators into PBW form using the bracket
/// relations; the result is independent of the rewriting order.
pub fn normal_order(alg: AlgebraName, word: &[Generator]) -> Result<EnvelopeElement, HopfError> {
    if word.windows(2).all(|w| w[0] <= w[1]) {
        let mut e = EnvelopeElement::zero(alg);
        e.add_term(word.to_vec(), Scalar::one());
        return Ok(e);
    }
    let key = (alg, word.to_vec());
    let cache = NO_CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let result = normal_order_uncached(alg, word);
    cache.lock().unwrap().insert(key, result.clone());
    result
}

fn normal_order_uncached(alg: AlgebraName, word: &[Generator]) -> Result<EnvelopeElement, HopfError> {
    let mut out = EnvelopeElement::zero(alg);
    let mut stack: Vec<(PbwMono, Scalar)> = vec![(word.to_vec(), Scalar::one())];
    while let Some((w, c)) = stack.pop() {
        match (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
            None => out.add_term(w, c),
            Some(i) => {
                // a b = b a + [a, b]
                let a = w[i];
                let b = w[i + 1];
                let mut sw = w.clone();
                sw.swap(i, i + 1);
                let br = bracket(
                    &AlgebraElement::gen(alg, a),
                    &AlgebraElement::gen(alg, b),
                )?;
                stack.push((sw, c.clone()));
                for (g, bc) in &br.terms {
                    let mut nw = Vec::with_capacity(w.len() - 1);
                    nw.extend_from_slice(&w[..i]);
                    nw.push(*g);
                    nw.extend_from_slice(&w[i + 2..]);
                    stack.push((nw, c.mul(bc)));
                }
            }
        }
    }
    Ok(out)
}

/// Rank-2 or rank-3 sparse tensor with PBW-monomial legs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorEnvelope {
    pub algebra: AlgebraName,
    pub rank: usize,
    pub terms: BTreeMap<Vec<PbwMono>, Scalar>,
}

impl TensorEnvelope {
    pub fn zero(algebra: AlgebraName, rank: usize) -> Self {
        Self { algebra, rank, terms: BTreeMap::new() }
    }

    pub fn unit(algebra: AlgebraName, rank: usize) -> Self {
        let mut t = Self::zero(algebra, rank);
        t.add_term(vec![vec![]; rank], Scalar::one());
        t
    }

    pub fn add_term(&mut self, legs: Vec<PbwMono>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        assert_eq!(legs.len(), self.rank);
        let entry = self.terms.entry(legs).or_insert_with(Scalar::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.algebra, self.rank), (other.algebra, other.rank));
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::int(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.algebra, self.rank);
        for (l, x) in &self.terms {
            out.add_term(l.clone(), x.mul(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Outer product of envelope elements, one per leg.
    pub fn outer(factors: &[&EnvelopeElement]) -> Self {
        let alg = factors[0].algebra;
        let mut out = Self::unit(alg, factors.len());
        for (i, f) in factors.iter().enumerate() {
            assert_eq!(f.algebra, alg);
            let mut next = Self::zero(alg, factors.len());
            for (legs, c) in &out.terms {
                for (m, k) in &f.terms {
                    let mut l2 = legs.clone();
                    l2[i] = m.clone();
                    next.add_term(l2, c.mul(k));
                }
            }
            out = next;
        }
        out
    }

    /// Leg-wise product in the envelope.
    pub fn mul(&self, other: &Self, trunc: &Trunc) -> Result<Self, HopfError> {
        assert_eq!((self.algebra, self.rank), (other.algebra, other.rank));
        let mut out = Self::zero(self.algebra, self.rank);
        for (la, ca) in &self.terms {
            for (lb, cb) in &other.terms {
                let c0 = trunc.cut(&ca.mul(cb));
                if c0.is_zero() {
                    continue;
                }
                let mut leg_opts: Vec<Vec<(PbwMono, Scalar)>> = Vec::with_capacity(self.rank);
                for i in 0..self.rank {
                    let mut w = la[i].clone();
                    w.extend_from_slice(&lb[i]);
                    let e = normal_order(self.algebra, &w)?;
                    leg_opts.push(e.terms.into_iter().collect());
                }
                distribute(&leg_opts, &c0, trunc, &mut out);
            }
        }
        Ok(out)
    }

    /// Swaps the two legs of a rank-2 tensor.
    pub fn swap12(&self) -> Self {
        assert_eq!(self.rank, 2);
        let mut out = Self::zero(self.algebra, 2);
        for (l, c) in &self.terms {
            out.add_term(vec![l[1].clone(), l[0].clone()], c.clone());
        }
        out
    }

    /// Embeds a rank-2 tensor into rank 3 at leg positions i < j.
    pub fn promote3(&self, i: usize, j: usize) -> Self {
        assert_eq!(self.rank, 2);
        assert!(i < j && j < 3);
        let mut out = Self::zero(self.algebra, 3);
        for (l, c) in &self.terms {
            let mut legs = vec![vec![], vec![], vec![]];
            legs[i] = l[0].clone();
            legs[j] = l[1].clone();
            out.add_term(legs, c.clone());
        }
        out
    }

    /// Applies the counit to one leg of a rank-2 tensor.
    pub fn counit_leg(&self, leg: usize) -> EnvelopeElement {
        assert_eq!(self.rank, 2);
        let mut out = EnvelopeElement::zero(self.algebra);
        for (l, c) in &self.terms {
            if l[leg].is_empty() {
                out.add_term(l[1 - leg].clone(), c.clone());
            }
        }
        out
    }

    pub fn canon(&self, trunc: &Trunc) -> Self {
        let mut out = Self::zero(self.algebra, self.rank);
        for (l, c) in &self.terms {
            out.add_term(l.clone(), trunc.cut(c));
        }
        out
    }

    /// Degree-1 part with single-generator legs, as a plain tensor.
    pub fn order1_tensor(&self, trunc: &Trunc) -> TensorElement {
        let mut out = TensorElement::zero(self.algebra, self.rank);
        for (legs, c) in &self.terms {
            if legs.iter().any(|m| m.len() != 1) {
                continue;
            }
            let mut c1 = Scalar::zero();
            for (m, q) in c.terms() {
                if Scalar::mono_total_degree(m, &trunc.params) == 1 {
                    c1.add_term(m.clone(), q.clone());
                }
            }
            if !c1.is_zero() {
                out.add_term(legs.iter().map(|m| m[0]).collect(), c1);
            }
        }
        out
    }
}

fn distribute(
    leg_opts: &[Vec<(PbwMono, Scalar)>],
    c0: &Scalar,
    trunc: &Trunc,
    out: &mut TensorEnvelope,
) {
    let rank = leg_opts.len();
    let mut legs: Vec<PbwMono> = vec![vec![]; rank];
    fn rec(
        i: usize,
        leg_opts: &[Vec<(PbwMono, Scalar)>],
        legs: &mut Vec<PbwMono>,
        acc: &Scalar,
        trunc: &Trunc,
        out: &mut TensorEnvelope,
    ) {
        if i == leg_opts.len() {
            out.add_term(legs.clone(), acc.clone());
            return;
        }
        for (m, k) in &leg_opts[i] {
            let c = trunc.cut(&acc.mul(k));
            if c.is_zero() {
                continue;
            }
            legs[i] = m.clone();
            rec(i + 1, leg_opts, legs, &c, trunc, out);
        }
        legs[i] = vec![];
    }
    rec(0, leg_opts, &mut legs, c0, trunc, out);
}

fn fact(k: usize) -> i64 {
    (1..=k as i64).product::<i64>().max(1)
}

fn rat_scalar(r: BigRational) -> Scalar {
    Scalar::from_coeff(GaussianRational::new(r, BigRational::zero()))
}

/// exp of a tensor whose terms all carry deformation degree >= 1.
pub fn exp_tensor(t: &TensorEnvelope, trunc: &Trunc) -> Result<TensorEnvelope, HopfError> {
    let mut out = TensorEnvelope::unit(t.algebra, t.rank);
    let mut pw = TensorEnvelope::unit(t.algebra, t.rank);
    for k in 1..=(trunc.order as usize) {
        pw = pw.mul(t, trunc)?;
        if pw.is_zero() {
            break;
        }
        out = out.add(&pw.scale(&Scalar::ratio(1, fact(k))));
    }
    Ok(out)
}

/// exp of an envelope element of deformation degree >= 1.
pub fn exp_elem(e: &EnvelopeElement, trunc: &Trunc) -> Result<EnvelopeElement, HopfError> {
    let mut out = EnvelopeElement::one(e.algebra);
    let mut pw = EnvelopeElement::one(e.algebra);
    for k in 1..=(trunc.order as usize) {
        pw = pw.mul(e, trunc)?;
        if pw.is_zero() {
            break;
        }
        out = out.add(&pw.scale(&Scalar::ratio(1, fact(k))));
    }
    Ok(out)
}

/// log(1 + u) as a series, for u of deformation degree >= 1.
pub fn log1p_elem(u: &EnvelopeElement, trunc: &Trunc) -> Result<EnvelopeElement, HopfError> {
    let mut out = EnvelopeElement::zero(u.algebra);
    let mut pw = EnvelopeElement::one(u.algebra);
    for k in 1..=(trunc.order as usize) {
        pw = pw.mul(u, trunc)?;
        if pw.is_zero() {
            break;
        }
        let sign = if k % 2 == 0 { -1 } else { 1 };
        out = out.add(&pw.scale(&Scalar::ratio(sign, k as i64)));
    }
    Ok(out)
}

/// (1 + u)^(num/den) by the generalized binomial series, exact rational
/// coefficients.
pub fn binom_pow(
    u: &EnvelopeElement,
    num: i64,
    den: i64,
    trunc: &Trunc,
) -> Result<EnvelopeElement, HopfError> {
    assert!(den != 0);
    let q = BigRational::new(BigInt::from(num), BigInt::from(den));
    let mut out = EnvelopeElement::one(u.algebra);
    let mut pw = EnvelopeElement::one(u.algebra);
    let mut coeff = BigRational::one();
    for k in 1..=(trunc.order as usize) {
        pw = pw.mul(u, trunc)?;
        coeff = coeff * (&q - BigRational::from_integer(BigInt::from(k as i64 - 1)))
            / BigRational::from_integer(BigInt::from(k as i64));
        if pw.is_zero() || coeff.is_zero() {
            break;
        }
        out = out.add(&pw.scale(&rat_scalar(coeff.clone())));
    }
    Ok(out)
}

/// Undeformed coalgebra the twist acts on: either the primitive one, or the
/// variant where a distinguished family picks up a grouplike central factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseCoproduct {
    Primitive,
    CentralGrouplike { exponent: AlgebraElement, families: Vec<Family> },
}

impl BaseCoproduct {
    fn grouplike(&self, _alg: AlgebraName, trunc: &Trunc) -> Result<Option<EnvelopeElement>, HopfError> {
        match self {
            BaseCoproduct::Primitive => Ok(None),
            BaseCoproduct::CentralGrouplike { exponent, .. } => {
                Ok(Some(exp_elem(&EnvelopeElement::from_element(exponent), trunc)?))
            }
        }
    }

    fn applies_to(&self, g: &Generator) -> bool {
        match self {
            BaseCoproduct::Primitive => false,
            BaseCoproduct::CentralGrouplike { families, .. } => families.contains(&g.family),
        }
    }
}

fn delta_gen(
    alg: AlgebraName,
    g: Generator,
    base: &BaseCoproduct,
    trunc: &Trunc,
) -> Result<TensorEnvelope, HopfError> {
    let e = EnvelopeElement::gen(alg, g);
    let one = EnvelopeElement::one(alg);
    let mut d = TensorEnvelope::outer(&[&e, &one]);
    if base.applies_to(&g) {
        let gl = base.grouplike(alg, trunc)?.expect("grouplike base");
        d = d.add(&TensorEnvelope::outer(&[&gl, &e]));
    } else {
        d = d.add(&TensorEnvelope::outer(&[&one, &e]));
    }
    Ok(d)
}

/// Coproduct of a PBW monomial, extended multiplicatively from the generators.
pub fn delta_mono(
    alg: AlgebraName,
    mono: &[Generator],
    base: &BaseCoproduct,
    trunc: &Trunc,
) -> Result<TensorEnvelope, HopfError> {
    let mut out = TensorEnvelope::unit(alg, 2);
    for g in mono {
        out = out.mul(&delta_gen(alg, *g, base, trunc)?, trunc)?;
    }
    Ok(out)
}

pub fn delta_env(
    e: &EnvelopeElement,
    base: &BaseCoproduct,
    trunc: &Trunc,
) -> Result<TensorEnvelope, HopfError> {
    let mut out = TensorEnvelope::zero(e.algebra, 2);
    for (m, c) in &e.terms {
        out = out.add(&delta_mono(e.algebra, m, base, trunc)?.scale(c));
    }
    Ok(out.canon(trunc))
}

fn antipode_gen(
    alg: AlgebraName,
    g: Generator,
    base: &BaseCoproduct,
    trunc: &Trunc,
) -> Result<EnvelopeElement, HopfError> {
    let e = EnvelopeElement::gen(alg, g).neg();
    if base.applies_to(&g) {
        let BaseCoproduct::CentralGrouplike { exponent, .. } = base else { unreachable!() };
        let gl_inv = exp_elem(&EnvelopeElement::from_element(&exponent.neg()), trunc)?;
        gl_inv.mul(&e, trunc)
    } else {
        Ok(e)
    }
}

/// Antipode of the undeformed Hopf structure (an anti-automorphism).
pub fn antipode_env(
    e: &EnvelopeElement,
    base: &BaseCoproduct,
    trunc: &Trunc,
) -> Result<EnvelopeElement, HopfError> {
    let mut out = EnvelopeElement::zero(e.algebra);
    for (m, c) in &e.terms {
        let mut acc = EnvelopeElement::one(e.algebra);
        for g in m.iter().rev() {
            acc = acc.mul(&antipode_gen(e.algebra, *g, base, trunc)?, trunc)?;
        }
        out = out.add(&acc.scale(c));
    }
    Ok(out)
}

/// Named twist constructions on the registered algebras.
#[derive(Debug, Clone)]
pub enum TwistKind {
    /// F = exp(left (x) right) with [left, right] = 0; the deformation
    /// parameter lives in the coefficients of the legs.
    Abelian { left: AlgebraElement, right: AlgebraElement },
    Jordanian { n: i64 },
    ExtendedJordanian { n: i64 },
    /// Product of two one-sided Jordanian factors on W2 (parameter `a`).
    LightCone { n: i64 },
    /// Contraction limit of the light-cone twist on B3 (parameter `a`).
    LightConeContracted { n: i64 },
    /// Jordanian leg over exp(alpha c'_L) + chi T_n on the centrally
    /// extended algebra, acting on the grouplike base coalgebra.
    CentralJordanian { n: i64 },
    /// Central-shifted Jordanian times an abelian central factor on B3C.
    CentralAbelian { n: i64 },
    Custom {
        name: String,
        logs: Vec<TensorEnvelope>,
        params: Vec<String>,
        base: BaseCoproduct,
    },
}

impl TwistKind {
    /// The standard abelian exponent of each algebra family.
    pub fn abelian_default(alg: AlgebraName) -> Result<TwistKind, HopfError> {
        use AlgebraName::*;
        use Family as F;
        let eta = Scalar::param("eta");
        let kind = match alg {
            B3 | B3Plus | B3Minus | B3C => TwistKind::Abelian {
                left: AlgebraElement::gen(alg, Generator::one(F::Ll, 0)),
                right: AlgebraElement::term(alg, Generator::one(F::T, 0), eta),
            },
            W2 | W2Plus | W2Minus | W2C => {
                let mut left = AlgebraElement::gen(alg, Generator::one(F::L, 0));
                left.add_term(Generator::one(F::Lb, 0), Scalar::one());
                let mut right = AlgebraElement::term(alg, Generator::one(F::L, 0), eta.clone());
                right.add_term(Generator::one(F::Lb, 0), eta.neg());
                TwistKind::Abelian { left, right }
            }
            B4 | B4Minus | B4C => TwistKind::Abelian {
                left: AlgebraElement::gen(alg, Generator::one(F::K, 0)),
                right: AlgebraElement::term(alg, Generator::one(F::Kb, 0), eta),
            },
            other => {
                return Err(HopfError::BadParameter(format!(
                    "no standard abelian twist on {}",
                    other.as_str()
                )))
            }
        };
        Ok(kind)
    }
}

/// A materialized twist: F and its inverse at a fixed truncation order,
/// verified invertible, counital and 2-cocyclic on construction.
#[derive(Debug, Clone)]
pub struct Twist {
    pub name: String,
    pub algebra: AlgebraName,
    pub kind: TwistKind,
    pub trunc: Trunc,
    pub base: BaseCoproduct,
    pub factors: Vec<TensorEnvelope>,
    pub f: TensorEnvelope,
    pub f_inv: TensorEnvelope,
}

fn admitted(alg: AlgebraName, t: &TensorEnvelope) -> Result<(), HopfError> {
    for legs in t.terms.keys() {
        for leg in legs {
            for g in leg {
                if !alg.admits(g) {
                    return Err(HopfError::WindowOverflow(format!("{}: {}", alg.as_str(), g)));
                }
            }
        }
    }
    Ok(())
}

fn s_sym(alg: AlgebraName, p: i64, q: i64) -> AlgebraElement {
    AlgebraElement::gen(alg, Generator::two(Family::S, p.min(q), p.max(q)))
}

fn a_antisym(alg: AlgebraName, p: i64, q: i64) -> AlgebraElement {
    assert!(p != q);
    let sign = if p < q { Scalar::one() } else { Scalar::int(-1) };
    AlgebraElement::term(alg, Generator::two(Family::A, p.min(q), p.max(q)), sign)
}

fn is_w2(alg: AlgebraName) -> bool {
    matches!(alg, AlgebraName::W2 | AlgebraName::W2Plus | AlgebraName::W2Minus | AlgebraName::W2C)
}

fn is_b3(alg: AlgebraName) -> bool {
    matches!(alg, AlgebraName::B3 | AlgebraName::B3Plus | AlgebraName::B3Minus | AlgebraName::B3C)
}

fn is_b4(alg: AlgebraName) -> bool {
    matches!(alg, AlgebraName::B4 | AlgebraName::B4Minus | AlgebraName::B4C)
}

/// Jordanian data (X, u) with [X, u] = u, so that the twist is
/// exp(X (x) log(1 + u)).
fn jordanian_data(
    alg: AlgebraName,
    n: i64,
    param: &str,
) -> Result<(AlgebraElement, AlgebraElement), HopfError> {
    use Family as F;
    if n == 0 {
        return Err(HopfError::BadParameter("Jordanian twist needs n != 0".into()));
    }
    let c = Scalar::param(param);
    if is_b3(alg) {
        let x = AlgebraElement::term(alg, Generator::one(F::Ll, 0), Scalar::ratio(-1, n));
        let u = AlgebraElement::term(alg, Generator::one(F::T, n), c);
        return Ok((x, u));
    }
    if is_w2(alg) {
        let mut x = AlgebraElement::term(alg, Generator::one(F::L, 0), Scalar::ratio(-1, n));
        x.add_term(Generator::one(F::Lb, 0), Scalar::ratio(-1, n));
        let mut u = AlgebraElement::term(alg, Generator::one(F::L, n), c.clone());
        u.add_term(Generator::one(F::Lb, n), c.neg());
        return Ok((x, u));
    }
    if is_b4(alg) {
        if n.rem_euclid(2) != 1 {
            return Err(HopfError::BadParameter(format!("B4 Jordanian needs odd n, got {n}")));
        }
        let m = (1 - n) / 2;
        let x = AlgebraElement::term(alg, Generator::one(F::K, 0), Scalar::ratio(-1, n));
        let u = s_sym(alg, 1 - m, 1 - m).scale(&c);
        return Ok((x, u));
    }
    Err(HopfError::BadParameter(format!("no Jordanian twist on {}", alg.as_str())))
}

fn materialize(
    alg: AlgebraName,
    kind: &TwistKind,
    order: usize,
) -> Result<(String, Vec<TensorEnvelope>, BTreeSet<String>, BaseCoproduct), HopfError> {
    use Family as F;
    let nondefo = |p: &str| p == "sqrt2" || p == "s";
    match kind {
        TwistKind::Abelian { left, right } => {
            if !bracket(left, right)?.is_zero() {
                return Err(HopfError::BadParameter("abelian twist legs do not commute".into()));
            }
            let mut params = BTreeSet::new();
            for x in [left, right] {
                for c in x.terms.values() {
                    params.extend(c.params().into_iter().filter(|p| !nondefo(p)));
                }
            }
            if params.is_empty() {
                return Err(HopfError::BadParameter(
                    "abelian twist exponent carries no deformation parameter".into(),
                ));
            }
            let log = TensorEnvelope::outer(&[
                &EnvelopeElement::from_element(left),
                &EnvelopeElement::from_element(right),
            ]);
            Ok(("abelian".into(), vec![log], params, BaseCoproduct::Primitive))
        }
        TwistKind::Jordanian { n } => {
            let trunc = Trunc::new(&["chi"], order);
            let (x, u) = jordanian_data(alg, *n, "chi")?;
            let sigma = log1p_elem(&EnvelopeElement::from_element(&u), &trunc)?;
            let log = TensorEnvelope::outer(&[&EnvelopeElement::from_element(&x), &sigma]);
            Ok(("jordanian".into(), vec![log], trunc.params, BaseCoproduct::Primitive))
        }
        TwistKind::ExtendedJordanian { n } => {
            let trunc = Trunc::new(&["chi"], order);
            let (x, u) = jordanian_data(alg, *n, "chi")?;
            let sigma = log1p_elem(&EnvelopeElement::from_element(&u), &trunc)?;
            let jlog = TensorEnvelope::outer(&[&EnvelopeElement::from_element(&x), &sigma]);
            let chi_n = Scalar::param("chi").mul(&Scalar::ratio(1, *n));
            let ext = if is_b3(alg) {
                let ln = AlgebraElement::term(alg, Generator::one(F::Ll, *n), chi_n);
                let t0 = AlgebraElement::gen(alg, Generator::one(F::T, 0));
                TensorEnvelope::outer(&[
                    &EnvelopeElement::from_element(&ln),
                    &EnvelopeElement::from_element(&t0),
                ])
            } else if is_b4(alg) {
                let m = (1 - n) / 2;
                let kn = AlgebraElement::term(alg, Generator::one(F::K, *n), chi_n.clone());
                let kbn = AlgebraElement::term(alg, Generator::one(F::Kb, *n), chi_n);
                TensorEnvelope::outer(&[
                    &EnvelopeElement::from_element(&kn),
                    &EnvelopeElement::from_element(&s_sym(alg, 1 - m, m)),
                ])
                .add(&TensorEnvelope::outer(&[
                    &EnvelopeElement::from_element(&kbn),
                    &EnvelopeElement::from_element(&a_antisym(alg, 1 - m, m)),
                ]))
            } else {
                return Err(HopfError::BadParameter(format!(
                    "no extended Jordanian twist on {}",
                    alg.as_str()
                )));
            };
            Ok(("extended-jordanian".into(), vec![ext, jlog], trunc.params, BaseCoproduct::Primitive))
        }
        TwistKind::LightCone { n } => {
            if !is_w2(alg) {
                return Err(HopfError::BadParameter("light-cone twist lives on W2".into()));
            }
            if *n == 0 {
                return Err(HopfError::BadParameter("light-cone twist needs n != 0".into()));
            }
            let trunc = Trunc::new(&["a"], order);
            let a = Scalar::param("a");
            let l0 = EnvelopeElement::from_element(&AlgebraElement::term(
                alg,
                Generator::one(F::L, 0),
                Scalar::ratio(-1, *n),
            ));
            let lb0 = EnvelopeElement::from_element(&AlgebraElement::term(
                alg,
                Generator::one(F::Lb, 0),
                Scalar::ratio(-1, *n),
            ));
            let un = EnvelopeElement::from_element(&AlgebraElement::term(
                alg,
                Generator::one(F::L, *n),
                a.clone(),
            ));
            let ubn = EnvelopeElement::from_element(&AlgebraElement::term(
                alg,
                Generator::one(F::Lb, *n),
                a.neg(),
            ));
            let log1 = TensorEnvelope::outer(&[&l0, &log1p_elem(&un, &trunc)?]);
            let log2 = TensorEnvelope::outer(&[&lb0, &log1p_elem(&ubn, &trunc)?]);
            Ok(("light-cone".into(), vec![log1, log2], trunc.params, BaseCoproduct::Primitive))
        }
        TwistKind::LightConeContracted { n } => {
            if !is_b3(alg) {
                return Err(HopfError::BadParameter(
                    "contracted light-cone twist lives on B3".into(),
                ));
            }
            if *n == 0 {
                return Err(HopfError::BadParameter("light-cone twist needs n != 0".into()));
            }
            let trunc = Trunc::new(&["a"], order);
            let a = Scalar::param("a");
            let l0 = EnvelopeElement::from_element(&AlgebraElement::term(
                alg,
                Generator::one(F::Ll, 0),
                Scalar::ratio(-1, *n),
            ));
            let t0 = EnvelopeElement::from_element(&AlgebraElement::term(
                alg,
                Generator::one(F::T, 0),
                Scalar::ratio(-1, *n),
            ));
            let atn = EnvelopeElement::from_element(&AlgebraElement::term(
                alg,
                Generator::one(F::T, *n),
                a.clone(),
            ));
            let aln = EnvelopeElement::from_element(&AlgebraElement::term(
                alg,
                Generator::one(F::Ll, *n),
                a,
            ));
            let log = TensorEnvelope::outer(&[&l0, &log1p_elem(&atn, &trunc)?]).add(
                &TensorEnvelope::outer(&[&t0, &aln.mul(&binom_pow(&atn, -1, 1, &trunc)?, &trunc)?]),
            );
            Ok(("light-cone-contracted".into(), vec![log], trunc.params, BaseCoproduct::Primitive))
        }
        TwistKind::CentralJordanian { n } => {
            if *n == 0 {
                return Err(HopfError::BadParameter("central Jordanian needs n != 0".into()));
            }
            let trunc = Trunc::new(&["alpha", "chi"], order);
            let alpha = Scalar::param("alpha");
            let (cen, x, tn, fams): (AlgebraElement, AlgebraElement, AlgebraElement, Vec<Family>) =
                match alg {
                    AlgebraName::B3C => (
                        AlgebraElement::term(alg, Generator::central(F::CPL), alpha),
                        AlgebraElement::term(alg, Generator::one(F::Ll, 0), Scalar::ratio(-1, *n)),
                        AlgebraElement::term(
                            alg,
                            Generator::one(F::T, *n),
                            Scalar::param("chi"),
                        ),
                        vec![F::T],
                    ),
                    AlgebraName::B4C => {
                        if n.rem_euclid(2) != 1 {
                            return Err(HopfError::BadParameter(format!(
                                "B4 central Jordanian needs odd n, got {n}"
                            )));
                        }
                        let m = (1 - n) / 2;
                        let mut cen =
                            AlgebraElement::term(alg, Generator::central(F::Cl), alpha);
                        cen.add_term(Generator::central(F::Clb), Scalar::param("alphabar"));
                        (
                            cen,
                            AlgebraElement::term(
                                alg,
                                Generator::one(F::K, 0),
                                Scalar::ratio(-1, *n),
                            ),
                            s_sym(alg, 1 - m, 1 - m).scale(&Scalar::param("chi")),
                            vec![F::S, F::A, F::T2],
                        )
                    }
                    other => {
                        return Err(HopfError::BadParameter(format!(
                            "no central Jordanian twist on {}",
                            other.as_str()
                        )))
                    }
                };
            let mut params = trunc.params.clone();
            for c in cen.terms.values() {
                params.extend(c.params());
            }
            let trunc = Trunc { params: params.clone(), order: trunc.order };
            // log(E + u) = log(E) + log(1 + E^-1 u) for grouplike central E
            let e_inv = exp_elem(&EnvelopeElement::from_element(&cen.neg()), &trunc)?;
            let arg = e_inv.mul(&EnvelopeElement::from_element(&tn), &trunc)?;
            let sigma = EnvelopeElement::from_element(&cen).add(&log1p_elem(&arg, &trunc)?);
            let log = TensorEnvelope::outer(&[&EnvelopeElement::from_element(&x), &sigma]);
            let base = BaseCoproduct::CentralGrouplike { exponent: cen, families: fams };
            Ok(("central-jordanian".into(), vec![log], params, base))
        }
        TwistKind::CentralAbelian { n } => {
            if alg != AlgebraName::B3C {
                return Err(HopfError::BadParameter(
                    "central abelian twist lives on B3C".into(),
                ));
            }
            if *n == 0 {
                return Err(HopfError::BadParameter("central abelian twist needs n != 0".into()));
            }
            let trunc = Trunc::new(&["alpha", "beta", "chi"], order);
            // shifted Cartan leg l_0 + (beta/chi) c'_L
            let mut x = AlgebraElement::term(alg, Generator::one(F::Ll, 0), Scalar::ratio(-1, *n));
            x.add_term(
                Generator::central(F::CPL),
                Scalar::param("beta")
                    .mul(&Scalar::param_pow("chi", -1))
                    .mul(&Scalar::ratio(-1, *n)),
            );
            let u = EnvelopeElement::from_element(&AlgebraElement::term(
                alg,
                Generator::one(F::T, *n),
                Scalar::param("chi"),
            ));
            let jlog =
                TensorEnvelope::outer(&[&EnvelopeElement::from_element(&x), &log1p_elem(&u, &trunc)?]);
            let clog = TensorEnvelope::outer(&[
                &EnvelopeElement::from_element(&AlgebraElement::term(
                    alg,
                    Generator::central(F::CPL),
                    Scalar::param("alpha"),
                )),
                &EnvelopeElement::gen(alg, Generator::one(F::T, 0)),
            ]);
            Ok(("central-abelian".into(), vec![jlog, clog], trunc.params, BaseCoproduct::Primitive))
        }
        TwistKind::Custom { name, logs, params, base } => Ok((
            name.clone(),
            logs.clone(),
            params.iter().cloned().collect(),
            base.clone(),
        )),
    }
}

/// The two-parameter twist over the Witt double whose first factor is a
/// wedge of the barred Cartan generator with sigma = log(1 + alpha L_1):
/// F = exp(-(beta/alpha) Lb_0 ^ sigma) exp(-L_0 (x) sigma).
pub fn r2_prime_twist(order: usize) -> Result<Twist, HopfError> {
    let alg = AlgebraName::W2;
    let trunc = Trunc::new(&["alpha", "beta"], order);
    let sigma = log1p_elem(
        &EnvelopeElement::from_element(&AlgebraElement::term(
            alg,
            Generator::one(Family::L, 1),
            Scalar::param("alpha"),
        )),
        &trunc,
    )?;
    let lb0 = EnvelopeElement::gen(alg, Generator::one(Family::Lb, 0));
    let l0 = EnvelopeElement::gen(alg, Generator::one(Family::L, 0));
    let coeff = Scalar::param("beta").mul(&Scalar::param_pow("alpha", -1)).neg();
    let log1 = TensorEnvelope::outer(&[&lb0, &sigma])
        .sub(&TensorEnvelope::outer(&[&sigma, &lb0]))
        .scale(&coeff);
    let log2 = TensorEnvelope::outer(&[&l0, &sigma]).neg();
    build_twist(
        alg,
        TwistKind::Custom {
            name: "r2-prime".into(),
            logs: vec![log1, log2],
            params: vec!["alpha".into(), "beta".into()],
            base: BaseCoproduct::Primitive,
        },
        order,
    )
}

/// Builds and verifies a twist at truncation order `order`.
pub fn build_twist(alg: AlgebraName, kind: TwistKind, order: usize) -> Result<Twist, HopfError> {
    if order == 0 {
        return Err(HopfError::BadParameter("truncation order must be >= 1".into()));
    }
    let (name, logs, params, base) = materialize(alg, &kind, order)?;
    let trunc = Trunc { params, order: order as i64 };
    for l in &logs {
        admitted(alg, l)?;
    }
    let mut f = TensorEnvelope::unit(alg, 2);
    for l in &logs {
        f = f.mul(&exp_tensor(l, &trunc)?, &trunc)?;
    }
    let mut f_inv = TensorEnvelope::unit(alg, 2);
    for l in logs.iter().rev() {
        f_inv = f_inv.mul(&exp_tensor(&l.neg(), &trunc)?, &trunc)?;
    }
    let tw = Twist { name, algebra: alg, kind, trunc, base, factors: logs, f, f_inv };
    let unit = TensorEnvelope::unit(alg, 2);
    if tw.f.mul(&tw.f_inv, &tw.trunc)?.canon(&tw.trunc) != unit {
        return Err(HopfError::NotATwist(format!("{}: F F^-1 != 1 (x) 1", tw.name)));
    }
    for leg in 0..2 {
        if tw.f.counit_leg(leg).canon(&tw.trunc) != EnvelopeElement::one(alg) {
            return Err(HopfError::NotATwist(format!("{}: counit normalization fails", tw.name)));
        }
    }
    if !cocycle_holds(&tw)? {
        return Err(HopfError::NotATwist(format!("{}: 2-cocycle identity fails", tw.name)));
    }
    Ok(tw)
}

/// Applies a monomial-wise rank-2 map to one leg of a rank-2 tensor,
/// producing a rank-3 tensor.
fn apply_on_leg(
    t: &TensorEnvelope,
    leg: usize,
    trunc: &Trunc,
    dm: &mut impl FnMut(&[Generator]) -> Result<TensorEnvelope, HopfError>,
) -> Result<TensorEnvelope, HopfError> {
    assert_eq!(t.rank, 2);
    let mut out = TensorEnvelope::zero(t.algebra, 3);
    for (legs, c) in &t.terms {
        let d = dm(&legs[leg])?;
        for (dl, dc) in &d.terms {
            let trio = if leg == 0 {
                vec![dl[0].clone(), dl[1].clone(), legs[1].clone()]
            } else {
                vec![legs[0].clone(), dl[0].clone(), dl[1].clone()]
            };
            out.add_term(trio, trunc.cut(&c.mul(dc)));
        }
    }
    Ok(out)
}

/// F12 (Delta (x) id)(F) = F23 (id (x) Delta)(F) at the truncation order.
pub fn cocycle_holds(tw: &Twist) -> Result<bool, HopfError> {
    let alg = tw.algebra;
    let d0 = apply_on_leg(&tw.f, 0, &tw.trunc, &mut |m| {
        delta_mono(alg, m, &tw.base, &tw.trunc)
    })?;
    let d1 = apply_on_leg(&tw.f, 1, &tw.trunc, &mut |m| {
        delta_mono(alg, m, &tw.base, &tw.trunc)
    })?;
    let lhs = tw.f.promote3(0, 1).mul(&d0, &tw.trunc)?;
    let rhs = tw.f.promote3(1, 2).mul(&d1, &tw.trunc)?;
    Ok(lhs.canon(&tw.trunc) == rhs.canon(&tw.trunc))
}

/// Twisted coproduct of an envelope element: F Delta(e) F^-1.
pub fn delta_f_env(tw: &Twist, e: &EnvelopeElement) -> Result<TensorEnvelope, HopfError> {
    let d = delta_env(e, &tw.base, &tw.trunc)?;
    tw.f.mul(&d, &tw.trunc)?.mul(&tw.f_inv, &tw.trunc)
}

/// Twisted coproduct of a Lie-algebra element.
pub fn twist_coproduct(tw: &Twist, x: &AlgebraElement) -> Result<TensorEnvelope, HopfError> {
    delta_f_env(tw, &EnvelopeElement::from_element(x))
}

/// v = mu (id (x) S)(F), the similarity element of the twisted antipode.
pub fn antipode_element(tw: &Twist) -> Result<EnvelopeElement, HopfError> {
    let mut v = EnvelopeElement::zero(tw.algebra);
    for (legs, c) in &tw.f.terms {
        let mut a = EnvelopeElement::zero(tw.algebra);
        a.add_term(legs[0].clone(), Scalar::one());
        let mut b = EnvelopeElement::zero(tw.algebra);
        b.add_term(legs[1].clone(), Scalar::one());
        let sb = antipode_env(&b, &tw.base, &tw.trunc)?;
        v = v.add(&a.mul(&sb, &tw.trunc)?.scale(c));
    }
    Ok(v)
}

/// Twisted antipode of an envelope element: v S(e) v^-1.
pub fn antipode_f_env(tw: &Twist, e: &EnvelopeElement) -> Result<EnvelopeElement, HopfError> {
    let v = antipode_element(tw)?;
    let v_inv = v.inverse(&tw.trunc)?;
    v.mul(&antipode_env(e, &tw.base, &tw.trunc)?, &tw.trunc)?.mul(&v_inv, &tw.trunc)
}

pub fn twist_antipode(tw: &Twist, x: &AlgebraElement) -> Result<EnvelopeElement, HopfError> {
    antipode_f_env(tw, &EnvelopeElement::from_element(x))
}

/// R = F21 F^-1.
pub fn quantum_r(tw: &Twist) -> Result<TensorEnvelope, HopfError> {
    tw.f.swap12().mul(&tw.f_inv, &tw.trunc)
}

/// Classical r-matrix of the twist: the antisymmetric first order of R.
pub fn classical_r(tw: &Twist) -> TensorElement {
    tw.f.swap12().sub(&tw.f).order1_tensor(&tw.trunc)
}

/// Caches the twisted coproduct and antipode of each PBW monomial so
/// repeated axiom checks over a generator basis stay affordable.
pub struct HopfChecker<'a> {
    tw: &'a Twist,
    v: EnvelopeElement,
    v_inv: EnvelopeElement,
    delta_cache: BTreeMap<PbwMono, TensorEnvelope>,
    antipode_cache: BTreeMap<PbwMono, EnvelopeElement>,
}

impl<'a> HopfChecker<'a> {
    pub fn new(tw: &'a Twist) -> Result<Self, HopfError> {
        let v = antipode_element(tw)?;
        let v_inv = v.inverse(&tw.trunc)?;
        Ok(Self { tw, v, v_inv, delta_cache: BTreeMap::new(), antipode_cache: BTreeMap::new() })
    }

    fn delta_f_mono(&mut self, m: &[Generator]) -> Result<TensorEnvelope, HopfError> {
        if let Some(hit) = self.delta_cache.get(m) {
            return Ok(hit.clone());
        }
        let mut e = EnvelopeElement::zero(self.tw.algebra);
        e.add_term(m.to_vec(), Scalar::one());
        let d = delta_f_env(self.tw, &e)?;
        self.delta_cache.insert(m.to_vec(), d.clone());
        Ok(d)
    }

    fn s_f_mono(&mut self, m: &[Generator]) -> Result<EnvelopeElement, HopfError> {
        if let Some(hit) = self.antipode_cache.get(m) {
            return Ok(hit.clone());
        }
        let mut e = EnvelopeElement::zero(self.tw.algebra);
        e.add_term(m.to_vec(), Scalar::one());
        let s = self
            .v
            .mul(&antipode_env(&e, &self.tw.base, &self.tw.trunc)?, &self.tw.trunc)?
            .mul(&self.v_inv, &self.tw.trunc)?;
        self.antipode_cache.insert(m.to_vec(), s.clone());
        Ok(s)
    }

    /// (Delta_F (x) id) Delta_F = (id (x) Delta_F) Delta_F on x.
    pub fn coassociative(&mut self, x: &AlgebraElement) -> Result<bool, HopfError> {
        let d = twist_coproduct(self.tw, x)?;
        let trunc = self.tw.trunc.clone();
        let mut lhs = TensorEnvelope::zero(self.tw.algebra, 3);
        let mut rhs = TensorEnvelope::zero(self.tw.algebra, 3);
        for (legs, c) in &d.terms {
            for (dl, dc) in &self.delta_f_mono(&legs[0])?.terms {
                lhs.add_term(
                    vec![dl[0].clone(), dl[1].clone(), legs[1].clone()],
                    trunc.cut(&c.mul(dc)),
                );
            }
            for (dl, dc) in &self.delta_f_mono(&legs[1])?.terms {
                rhs.add_term(
                    vec![legs[0].clone(), dl[0].clone(), dl[1].clone()],
                    trunc.cut(&c.mul(dc)),
                );
            }
        }
        Ok(lhs.canon(&trunc) == rhs.canon(&trunc))
    }

    /// Both antipode axioms on a generator-level element (counit zero):
    /// mu (S_F (x) id) Delta_F(x) = 0 = mu (id (x) S_F) Delta_F(x).
    pub fn antipode_axioms(&mut self, x: &AlgebraElement) -> Result<bool, HopfError> {
        let d = twist_coproduct(self.tw, x)?;
        let trunc = self.tw.trunc.clone();
        let mut left = EnvelopeElement::zero(self.tw.algebra);
        let mut right = EnvelopeElement::zero(self.tw.algebra);
        for (legs, c) in &d.terms {
            let mut a = EnvelopeElement::zero(self.tw.algebra);
            a.add_term(legs[0].clone(), Scalar::one());
            let mut b = EnvelopeElement::zero(self.tw.algebra);
            b.add_term(legs[1].clone(), Scalar::one());
            let sa = self.s_f_mono(&legs[0])?;
            let sb = self.s_f_mono(&legs[1])?;
            left = left.add(&sa.mul(&b, &trunc)?.scale(c));
            right = right.add(&a.mul(&sb, &trunc)?.scale(c));
        }
        Ok(left.canon(&trunc).is_zero() && right.canon(&trunc).is_zero())
    }
}

/// (Delta_F (x) id) Delta_F = (id (x) Delta_F) Delta_F on x.
pub fn coassociative(tw: &Twist, x: &AlgebraElement) -> Result<bool, HopfError> {
    HopfChecker::new(tw)?.coassociative(x)
}

/// Both antipode axioms on a generator-level element (counit zero).
pub fn antipode_axioms(tw: &Twist, x: &AlgebraElement) -> Result<bool, HopfError> {
    HopfChecker::new(tw)?.antipode_axioms(x)
}

/// R12 R13 R23 = R23 R13 R12 at the truncation order.
pub fn qybe_holds(tw: &Twist) -> Result<bool, HopfError> {
    let r = quantum_r(tw)?;
    let r12 = r.promote3(0, 1);
    let r13 = r.promote3(0, 2);
    let r23 = r.promote3(1, 2);
    let lhs = r12.mul(&r13, &tw.trunc)?.mul(&r23, &tw.trunc)?;
    let rhs = r23.mul(&r13, &tw.trunc)?.mul(&r12, &tw.trunc)?;
    Ok(lhs.canon(&tw.trunc) == rhs.canon(&tw.trunc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClosureVerdict {
    ClosedFinite,
    InfiniteTower,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyClosure {
    pub family: String,
    pub verdict: ClosureVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecializationReport {
    pub twist: String,
    pub algebra: String,
    pub families: Vec<FamilyClosure>,
    pub overall: ClosureVerdict,
    pub adjoined: Vec<String>,
}

fn max_abs_idx(g: &Generator) -> i64 {
    g.indices().iter().map(|i| i.abs()).max().unwrap_or(0)
}

/// Detects whether the repeated adjoint action of the twist generators drives
/// generator indices off to infinity (an infinite tower in the coproducts) or
/// stays within a finite set for every seed in the window.
pub fn closure_analysis(tw: &Twist) -> SpecializationReport {
    let alg = tw.algebra;
    let mut twist_gens: BTreeSet<Generator> = BTreeSet::new();
    for l in &tw.factors {
        for legs in l.terms.keys() {
            for leg in legs {
                twist_gens.extend(leg.iter().copied());
            }
        }
    }
    let depth_cap = tw.trunc.order as usize + 8;
    let idx_cap = 12;
    let (lo, hi) = alg.window();
    let lo = lo.unwrap_or(-3).max(-3);
    let hi = hi.unwrap_or(3).min(3);
    let mut families = Vec::new();
    let mut overall = ClosureVerdict::ClosedFinite;
    for fam in alg.families() {
        if fam.is_central() {
            continue;
        }
        let seeds: Vec<Generator> = match fam.arity() {
            0 => vec![Generator::plain(fam)],
            1 => (lo..=hi).map(|m| Generator::one(fam, m)).collect(),
            2 => {
                let mut v = Vec::new();
                for p in lo.max(-2)..=hi.min(2) {
                    for q in lo.max(-2)..=hi.min(2) {
                        match fam {
                            Family::S if p > q => continue,
                            Family::A if p >= q => continue,
                            _ => {}
                        }
                        v.push(Generator::two(fam, p, q));
                    }
                }
                v
            }
            _ => unreachable!(),
        };
        let mut verdict = ClosureVerdict::ClosedFinite;
        'seed: for seed in seeds {
            let mut visited: BTreeSet<Generator> = BTreeSet::new();
            visited.insert(seed);
            let mut frontier = vec![seed];
            for _ in 0..depth_cap {
                let mut next = Vec::new();
                for g in &frontier {
                    for t in &twist_gens {
                        let br = match bracket(
                            &AlgebraElement::gen(alg, *t),
                            &AlgebraElement::gen(alg, *g),
                        ) {
                            Ok(b) => b,
                            Err(_) => {
                                verdict = ClosureVerdict::InfiniteTower;
                                break 'seed;
                            }
                        };
                        for g2 in br.terms.keys() {
                            if max_abs_idx(g2) > idx_cap {
                                verdict = ClosureVerdict::InfiniteTower;
                                break 'seed;
                            }
                            if visited.insert(*g2) {
                                next.push(*g2);
                            }
                        }
                    }
                }
                if next.is_empty() {
                    break;
                }
                frontier = next;
            }
        }
        if verdict == ClosureVerdict::InfiniteTower {
            overall = ClosureVerdict::InfiniteTower;
        }
        families.push(FamilyClosure { family: fam.name().to_string(), verdict });
    }
    let adjoined = if overall == ClosureVerdict::ClosedFinite {
        adjoined_elements(tw)
    } else {
        Vec::new()
    };
    SpecializationReport {
        twist: tw.name.clone(),
        algebra: alg.as_str().to_string(),
        families,
        overall,
        adjoined,
    }
}

/// Grouplike elements a specialization would adjoin for each twist family.
fn adjoined_elements(tw: &Twist) -> Vec<String> {
    match &tw.kind {
        TwistKind::Abelian { right, .. } => {
            let r = right
                .terms
                .iter()
                .map(|(g, c)| format!("{}*{}", c.render(), g))
                .collect::<Vec<_>>()
                .join(" + ");
            vec![format!("K = exp({r})"), "K^-1".into()]
        }
        TwistKind::Jordanian { n } | TwistKind::ExtendedJordanian { n } => vec![
            format!("Pi = (1 + chi*T[{n}])^(1/{n})"),
            "Pi^-1".into(),
        ],
        TwistKind::LightCone { n } | TwistKind::LightConeContracted { n } => vec![
            format!("Pi = (1 + a*T[{n}])^(1/{n})"),
            "Pi^-1".into(),
        ],
        TwistKind::CentralJordanian { n } => vec![
            "Pi_c = exp(alpha*c'L)".into(),
            format!("(exp(alpha*c'L) + chi*T[{n}])^(1/{n})"),
        ],
        TwistKind::CentralAbelian { n } => vec![
            "Pi_c = exp(alpha*c'L)".into(),
            format!("Pi = (1 + chi*T[{n}])^(1/{n})"),
            "Pi^-1".into(),
        ],
        TwistKind::Custom { .. } => vec!["grouplike closures of the custom log legs".into()],
    }
}
