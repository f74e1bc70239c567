//! Registry of graded Lie algebras given by structure-constant rules on
//! indexed generator families: the Witt algebra and its relatives, the BMS
//! algebras in three and four dimensions, their central extensions, and the
//! finite subalgebras realized inside them by indexed embeddings.

use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum AlgError {
    #[error("generator {0} does not belong to algebra {1}")]
    ForeignGenerator(String, String),
    #[error("index out of window for {0}: {1}")]
    IndexOutOfWindow(String, String),
    #[error("bad embedding index n = {0} for {1}")]
    BadEmbeddingIndex(i64, String),
    #[error("embedding image does not close in {0} (central obstruction)")]
    EmbeddingNotClosed(String),
    #[error("unknown algebra name `{0}`")]
    UnknownAlgebra(String),
}

/// Generator families, ordered: central elements first, then the infinite
/// families, then generators of the finite algebras.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Family {
    CL,   // c_L
    CLb,  // c_Lbar
    CPL,  // c'_L
    Cl,   // c_l
    Clb,  // c_lbar
    L,    // L_m
    Lb,   // Lbar_m
    Ll,   // l_m
    Llb,  // lbar_m
    T,    // T_m
    T2,   // T_{pq}
    K,    // k_p
    Kb,   // kbar_p
    S,    // S_{pq}
    A,    // A_{pq}
    H,
    Ep,
    Em,
    Hb,
    Epb,
    Emb,
    Mpm, // M_{+-}
    Mp2, // M_{+2}
    Mm2, // M_{-2}
    M12, // M_{12}
    Mp1, // M_{+1}
    Mm1, // M_{-1}
    Pt2, // Ptilde_2
    Ptp, // Ptilde_+
    Ptm, // Ptilde_-
    P2,
    Pp, // P_+
    Pm, // P_-
    P1,
}

impl Family {
    pub fn name(self) -> &'static str {
        use Family::*;
        match self {
            CL => "cL",
            CLb => "cLbar",
            CPL => "c'L",
            Cl => "c_l",
            Clb => "c_lbar",
            L => "L",
            Lb => "Lbar",
            Ll => "l",
            Llb => "lbar",
            T => "T",
            T2 => "T",
            K => "k",
            Kb => "kbar",
            S => "S",
            A => "A",
            H => "H",
            Ep => "E+",
            Em => "E-",
            Hb => "Hbar",
            Epb => "Ebar+",
            Emb => "Ebar-",
            Mpm => "M+-",
            Mp2 => "M+2",
            Mm2 => "M-2",
            M12 => "M12",
            Mp1 => "M+1",
            Mm1 => "M-1",
            Pt2 => "Pt2",
            Ptp => "Pt+",
            Ptm => "Pt-",
            P2 => "P2",
            Pp => "P+",
            Pm => "P-",
            P1 => "P1",
        }
    }

    pub fn arity(self) -> usize {
        use Family::*;
        match self {
            CL | CLb | CPL | Cl | Clb => 0,
            T2 | S | A => 2,
            L | Lb | Ll | Llb | T | K | Kb => 1,
            _ => 0,
        }
    }

    pub fn is_central(self) -> bool {
        matches!(self, Family::CL | Family::CLb | Family::CPL | Family::Cl | Family::Clb)
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Idx {
    None,
    One(i64),
    Two(i64, i64),
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Generator {
    pub family: Family,
    pub idx: Idx,
}

impl Generator {
    pub fn central(f: Family) -> Self {
        debug_assert!(f.is_central());
        Self { family: f, idx: Idx::None }
    }

    pub fn plain(f: Family) -> Self {
        debug_assert_eq!(f.arity(), 0);
        Self { family: f, idx: Idx::None }
    }

    pub fn one(f: Family, m: i64) -> Self {
        debug_assert_eq!(f.arity(), 1);
        Self { family: f, idx: Idx::One(m) }
    }

    pub fn two(f: Family, p: i64, q: i64) -> Self {
        debug_assert_eq!(f.arity(), 2);
        Self { family: f, idx: Idx::Two(p, q) }
    }

    pub fn indices(&self) -> Vec<i64> {
        match self.idx {
            Idx::None => vec![],
            Idx::One(m) => vec![m],
            Idx::Two(p, q) => vec![p, q],
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.idx {
            Idx::None => write!(f, "{}", self.family.name()),
            Idx::One(m) => write!(f, "{}[{}]", self.family.name(), m),
            Idx::Two(p, q) => write!(f, "{}[{},{}]", self.family.name(), p, q),
        }
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum AlgebraName {
    Witt,
    WittPlus,
    WittMinus,
    W2,
    W2Plus,
    W2Minus,
    W2C,
    B3,
    B3Plus,
    B3Minus,
    B3C,
    AdS3,
    B4,
    B4Minus,
    B4C,
    O4,
    SL2,
    P3,
    P4,
    AdS3Fin,
}

impl AlgebraName {
    pub fn parse(name: &str) -> Result<Self, AlgError> {
        use AlgebraName::*;
        Ok(match name {
            "Witt" => Witt,
            "WittPlus" => WittPlus,
            "WittMinus" => WittMinus,
            "W2" => W2,
            "W2Plus" => W2Plus,
            "W2Minus" => W2Minus,
            "W2C" => W2C,
            "B3" => B3,
            "B3Plus" => B3Plus,
            "B3Minus" => B3Minus,
            "B3C" | "B3c" => B3C,
            "AdS3" => AdS3,
            "B4" => B4,
            "B4Minus" => B4Minus,
            "B4C" | "B4c" => B4C,
            "O4" => O4,
            "SL2" => SL2,
            "P3" => P3,
            "P4" => P4,
            "AdS3Fin" => AdS3Fin,
            other => return Err(AlgError::UnknownAlgebra(other.to_string())),
        })
    }

    pub fn as_str(self) -> &'static str {
        use AlgebraName::*;
        match self {
            Witt => "Witt",
            WittPlus => "WittPlus",
            WittMinus => "WittMinus",
            W2 => "W2",
            W2Plus => "W2Plus",
            W2Minus => "W2Minus",
            W2C => "W2C",
            B3 => "B3",
            B3Plus => "B3Plus",
            B3Minus => "B3Minus",
            B3C => "B3C",
            AdS3 => "AdS3",
            B4 => "B4",
            B4Minus => "B4Minus",
            B4C => "B4C",
            O4 => "O4",
            SL2 => "SL2",
            P3 => "P3",
            P4 => "P4",
            AdS3Fin => "AdS3Fin",
        }
    }

    /// Infinite families admissible in this algebra (central ones included).
    pub fn families(self) -> Vec<Family> {
        use AlgebraName::*;
        use Family as F;
        match self {
            Witt | WittPlus | WittMinus => vec![F::L],
            W2 | W2Plus | W2Minus => vec![F::L, F::Lb],
            W2C => vec![F::CL, F::CLb, F::L, F::Lb],
            B3 | B3Plus | B3Minus | AdS3 => vec![F::Ll, F::T],
            B3C => vec![F::CPL, F::Ll, F::T],
            B4 | B4Minus => vec![F::Ll, F::Llb, F::T2, F::K, F::Kb, F::S, F::A],
            B4C => vec![F::Cl, F::Clb, F::Ll, F::Llb, F::T2, F::K, F::Kb, F::S, F::A],
            O4 => vec![F::H, F::Ep, F::Em, F::Hb, F::Epb, F::Emb],
            SL2 => vec![F::H, F::Ep, F::Em],
            P3 => vec![F::Mpm, F::Mp2, F::Mm2, F::P2, F::Pp, F::Pm],
            AdS3Fin => vec![F::Mpm, F::Mp2, F::Mm2, F::Pt2, F::Ptp, F::Ptm],
            P4 => vec![
                F::Mpm,
                F::M12,
                F::Mp1,
                F::Mm1,
                F::Mp2,
                F::Mm2,
                F::Pp,
                F::Pm,
                F::P1,
                F::P2,
            ],
        }
    }

    /// One-sided index bound: (min, max) applied to every generator index.
    pub fn window(self) -> (Option<i64>, Option<i64>) {
        use AlgebraName::*;
        match self {
            WittMinus | W2Minus | B3Minus | B4Minus => (None, Some(1)),
            WittPlus | W2Plus | B3Plus => (Some(-1), None),
            _ => (None, None),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(
            self,
            AlgebraName::O4
                | AlgebraName::SL2
                | AlgebraName::P3
                | AlgebraName::P4
                | AlgebraName::AdS3Fin
        )
    }

    pub fn admits(self, g: &Generator) -> bool {
        if !self.families().contains(&g.family) {
            return false;
        }
        let (lo, hi) = self.window();
        g.indices().iter().all(|&i| {
            lo.map(|l| i >= l).unwrap_or(true) && hi.map(|h| i <= h).unwrap_or(true)
        })
    }
}

/// Sparse linear combination of generators of one algebra.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    pub algebra: AlgebraName,
    pub terms: BTreeMap<Generator, Scalar>,
}

impl Default for AlgebraName {
    fn default() -> Self {
        AlgebraName::Witt
    }
}

impl AlgebraElement {
    pub fn zero(algebra: AlgebraName) -> Self {
        Self { algebra, terms: BTreeMap::new() }
    }

    pub fn gen(algebra: AlgebraName, g: Generator) -> Self {
        Self::term(algebra, g, Scalar::one())
    }

    pub fn term(algebra: AlgebraName, g: Generator, c: Scalar) -> Self {
        let mut e = Self::zero(algebra);
        e.add_term(g, c);
        e
    }

    pub fn add_term(&mut self, g: Generator, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(g).or_insert_with(Scalar::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.algebra, other.algebra);
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(*g, c.clone());
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
        for (g, x) in &self.terms {
            out.add_term(*g, x.mul(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

fn one_gen(alg: AlgebraName, g: Generator, c: Scalar) -> AlgebraElement {
    AlgebraElement::term(alg, g, c)
}

/// Witt-type bracket on a single-index family: [X_m, X_n] = (m-n) X_{m+n}.
fn witt_rule(alg: AlgebraName, fam: Family, m: i64, n: i64) -> AlgebraElement {
    one_gen(alg, Generator::one(fam, m + n), Scalar::int(m - n))
}

/// Virasoro central term: (c/12)(m^3 - m) delta_{m+n,0}.
fn vir_central(alg: AlgebraName, c: Family, m: i64, n: i64) -> AlgebraElement {
    if m + n == 0 {
        one_gen(alg, Generator::central(c), Scalar::ratio(m * m * m - m, 12))
    } else {
        AlgebraElement::zero(alg)
    }
}

/// Structure rule on basis generators, in the canonical basis of each algebra
/// (for the 4D algebras this is the l/lbar/T_pq basis; k/S/A input is handled
/// at the element level by change of basis).
fn bracket_basis(alg: AlgebraName, a: &Generator, b: &Generator) -> AlgebraElement {
    use AlgebraName::*;
    use Family as F;
    let zero = AlgebraElement::zero(alg);
    if a.family.is_central() || b.family.is_central() {
        return zero;
    }
    // canonical orientation: compute for (fa <= fb), flip otherwise
    if (b.family, b.idx) < (a.family, a.idx) {
        return bracket_basis(alg, b, a).neg();
    }
    match alg {
        Witt | WittPlus | WittMinus => match (a.idx, b.idx) {
            (Idx::One(m), Idx::One(n)) => witt_rule(alg, F::L, m, n),
            _ => zero,
        },
        W2 | W2Plus | W2Minus | W2C => {
            let (Idx::One(m), Idx::One(n)) = (a.idx, b.idx) else { return zero };
            match (a.family, b.family) {
                (F::L, F::L) => {
                    let mut r = witt_rule(alg, F::L, m, n);
                    if alg == W2C {
                        r = r.add(&vir_central(alg, F::CL, m, n));
                    }
                    r
                }
                (F::Lb, F::Lb) => {
                    let mut r = witt_rule(alg, F::Lb, m, n);
                    if alg == W2C {
                        r = r.add(&vir_central(alg, F::CLb, m, n));
                    }
                    r
                }
                _ => zero,
            }
        }
        B3 | B3Plus | B3Minus | B3C | AdS3 => {
            let (Idx::One(m), Idx::One(n)) = (a.idx, b.idx) else { return zero };
            match (a.family, b.family) {
                (F::Ll, F::Ll) => witt_rule(alg, F::Ll, m, n),
                (F::Ll, F::T) => {
                    let mut r = witt_rule(alg, F::T, m, n);
                    if alg == B3C && m + n == 0 {
                        // central term (m^3 - m) c'_L, coefficient one (no /12)
                        r = r.add(&one_gen(
                            alg,
                            Generator::central(F::CPL),
                            Scalar::int(m * m * m - m),
                        ));
                    }
                    r
                }
                (F::T, F::T) => {
                    if alg == AdS3 {
                        // [T_m, T_n] = -Lambda (m-n) l_{m+n}, Lambda = -s^2
                        one_gen(
                            alg,
                            Generator::one(F::Ll, m + n),
                            Scalar::int(m - n).mul(&Scalar::param_pow("s", 2)),
                        )
                    } else {
                        zero
                    }
                }
                _ => zero,
            }
        }
        B4 | B4Minus | B4C => match (a.family, b.family) {
            (F::Ll, F::Ll) => {
                let (Idx::One(m), Idx::One(n)) = (a.idx, b.idx) else { return zero };
                let mut r = witt_rule(alg, F::Ll, m, n);
                if alg == B4C {
                    r = r.add(&vir_central(alg, F::Cl, m, n));
                }
                r
            }
            (F::Llb, F::Llb) => {
                let (Idx::One(m), Idx::One(n)) = (a.idx, b.idx) else { return zero };
                let mut r = witt_rule(alg, F::Llb, m, n);
                if alg == B4C {
                    r = r.add(&vir_central(alg, F::Clb, m, n));
                }
                r
            }
            (F::Ll, F::T2) => {
                let (Idx::One(m), Idx::Two(p, q)) = (a.idx, b.idx) else { return zero };
                // ((m+1)/2 - p) T_{m+p, q}
                one_gen(alg, Generator::two(F::T2, m + p, q), Scalar::ratio(m + 1 - 2 * p, 2))
            }
            (F::Llb, F::T2) => {
                let (Idx::One(m), Idx::Two(p, q)) = (a.idx, b.idx) else { return zero };
                one_gen(alg, Generator::two(F::T2, p, q + m), Scalar::ratio(m + 1 - 2 * q, 2))
            }
            _ => zero,
        },
        O4 | SL2 => {
            let table = |x: F, y: F| -> Option<AlgebraElement> {
                // [H, E+-] = +-E+-, [E+, E-] = 2H, barred copy commutes
                match (x, y) {
                    (F::H, F::Ep) => Some(one_gen(alg, Generator::plain(F::Ep), Scalar::one())),
                    (F::H, F::Em) => {
                        Some(one_gen(alg, Generator::plain(F::Em), Scalar::int(-1)))
                    }
                    (F::Ep, F::Em) => {
                        Some(one_gen(alg, Generator::plain(F::H), Scalar::int(2)))
                    }
                    (F::Hb, F::Epb) => {
                        Some(one_gen(alg, Generator::plain(F::Epb), Scalar::one()))
                    }
                    (F::Hb, F::Emb) => {
                        Some(one_gen(alg, Generator::plain(F::Emb), Scalar::int(-1)))
                    }
                    (F::Epb, F::Emb) => {
                        Some(one_gen(alg, Generator::plain(F::Hb), Scalar::int(2)))
                    }
                    _ => None,
                }
            };
            table(a.family, b.family).unwrap_or(zero)
        }
        P3 | P4 | AdS3Fin => finite_bracket_by_delegation(alg, a, b),
    }
}

/// Brackets of the finite spacetime algebras are computed through their unit
/// embedding into the corresponding infinite algebra; each embedding image is
/// a scaled single generator, so results pull back exactly.
fn finite_bracket_by_delegation(alg: AlgebraName, a: &Generator, b: &Generator) -> AlgebraElement {
    let (big, n) = match alg {
        AlgebraName::P3 => (AlgebraName::B3, 1),
        AlgebraName::AdS3Fin => (AlgebraName::AdS3, 1),
        AlgebraName::P4 => (AlgebraName::B4, 1),
        _ => unreachable!(),
    };
    let emb = build_embedding(big, n).expect("unit embedding");
    let fa = Generator { family: a.family, idx: a.idx };
    let fb = Generator { family: b.family, idx: b.idx };
    let xa = emb.map.get(&fa).expect("generator in embedding").clone();
    let xb = emb.map.get(&fb).expect("generator in embedding").clone();
    let z = bracket(&xa, &xb).expect("delegated bracket");
    // invert the (single-generator) embedding images
    let mut reverse: BTreeMap<Generator, (Generator, Scalar)> = BTreeMap::new();
    for (fin, img) in &emb.map {
        assert_eq!(img.terms.len(), 1, "embedding image must be a scaled generator");
        let (g, c) = img.terms.iter().next().unwrap();
        reverse.insert(*g, (*fin, c.inv_monomial().expect("invertible coefficient")));
    }
    let mut out = AlgebraElement::zero(alg);
    for (g, c) in &z.terms {
        let (fin, inv) = reverse
            .get(g)
            .unwrap_or_else(|| panic!("bracket result {g} escapes the embedding image"));
        out.add_term(*fin, c.mul(inv));
    }
    out
}

/// Change of basis on 4D elements: k/kbar/S/A generators rewritten in terms of
/// l/lbar/T_pq.
pub fn b4_to_llt(x: &AlgebraElement) -> AlgebraElement {
    use Family as F;
    let mut out = AlgebraElement::zero(x.algebra);
    let half = Scalar::ratio(1, 2);
    let half_i = Scalar::i().mul(&half);
    for (g, c) in &x.terms {
        match (g.family, g.idx) {
            (F::K, Idx::One(n)) => {
                out.add_term(Generator::one(F::Ll, n), c.clone());
                out.add_term(Generator::one(F::Llb, n), c.clone());
            }
            (F::Kb, Idx::One(n)) => {
                // kbar_n = -i (l_n - lbar_n)
                out.add_term(Generator::one(F::Ll, n), c.mul(&Scalar::i()).neg());
                out.add_term(Generator::one(F::Llb, n), c.mul(&Scalar::i()));
            }
            (F::S, Idx::Two(p, q)) => {
                // S_pq = (T_pq + T_qp)/2
                out.add_term(Generator::two(F::T2, p, q), c.mul(&half));
                out.add_term(Generator::two(F::T2, q, p), c.mul(&half));
            }
            (F::A, Idx::Two(p, q)) => {
                // A_pq = -(i/2)(T_pq - T_qp)
                out.add_term(Generator::two(F::T2, p, q), c.mul(&half_i).neg());
                out.add_term(Generator::two(F::T2, q, p), c.mul(&half_i));
            }
            _ => out.add_term(*g, c.clone()),
        }
    }
    out
}

/// Inverse change of basis: l/lbar/T_pq rewritten in terms of k/kbar/S/A
/// (S stored with p <= q, A with p < q).
pub fn b4_to_ksa(x: &AlgebraElement) -> AlgebraElement {
    use Family as F;
    let mut out = AlgebraElement::zero(x.algebra);
    let half = Scalar::ratio(1, 2);
    for (g, c) in &x.terms {
        match (g.family, g.idx) {
            (F::Ll, Idx::One(n)) => {
                // l_n = (k_n + i kbar_n)/2
                out.add_term(Generator::one(F::K, n), c.mul(&half));
                out.add_term(Generator::one(F::Kb, n), c.mul(&half).mul(&Scalar::i()));
            }
            (F::Llb, Idx::One(n)) => {
                out.add_term(Generator::one(F::K, n), c.mul(&half));
                out.add_term(Generator::one(F::Kb, n), c.mul(&half).mul(&Scalar::i()).neg());
            }
            (F::T2, Idx::Two(p, q)) => {
                // T_pq = S_pq + i A_pq, with S_qp = S_pq and A_qp = -A_pq
                let (sp, sq) = if p <= q { (p, q) } else { (q, p) };
                out.add_term(Generator::two(F::S, sp, sq), c.clone());
                if p != q {
                    let sign = if p < q { Scalar::i() } else { Scalar::i().neg() };
                    out.add_term(Generator::two(F::A, sp, sq), c.mul(&sign));
                }
            }
            _ => out.add_term(*g, c.clone()),
        }
    }
    out
}

fn is_b4(alg: AlgebraName) -> bool {
    matches!(alg, AlgebraName::B4 | AlgebraName::B4Minus | AlgebraName::B4C)
}

fn has_ksa(x: &AlgebraElement) -> bool {
    use Family as F;
    x.terms.keys().any(|g| matches!(g.family, F::K | F::Kb | F::S | F::A))
}

/// Bilinear, antisymmetric bracket of two elements of the same algebra.
pub fn bracket(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement, AlgError> {
    assert_eq!(x.algebra, y.algebra, "bracket across algebras");
    let alg = x.algebra;
    let ksa = is_b4(alg) && (has_ksa(x) || has_ksa(y));
    let (xv, yv) = if ksa { (b4_to_llt(x), b4_to_llt(y)) } else { (x.clone(), y.clone()) };
    let mut out = AlgebraElement::zero(alg);
    for (ga, ca) in &xv.terms {
        for (gb, cb) in &yv.terms {
            let r = bracket_basis(alg, ga, gb);
            let c = ca.mul(cb);
            for (g, rc) in &r.terms {
                out.add_term(*g, rc.mul(&c));
            }
        }
    }
    for g in out.terms.keys() {
        if !alg.admits(g) {
            return Err(AlgError::IndexOutOfWindow(alg.as_str().to_string(), g.to_string()));
        }
    }
    Ok(if ksa { b4_to_ksa(&out) } else { out })
}

/// All basis generators with every index bounded by `m_max` in absolute value
/// (intersected with the algebra's one-sided window). Central generators are
/// included.
pub fn basis_in_window(alg: AlgebraName, m_max: i64) -> Vec<Generator> {
    let (lo, hi) = alg.window();
    let lo = lo.unwrap_or(-m_max).max(-m_max);
    let hi = hi.unwrap_or(m_max).min(m_max);
    let mut out = Vec::new();
    for f in alg.families() {
        match f.arity() {
            0 => out.push(Generator { family: f, idx: Idx::None }),
            1 => {
                for m in lo..=hi {
                    out.push(Generator::one(f, m));
                }
            }
            2 => {
                for p in lo..=hi {
                    for q in lo..=hi {
                        match f {
                            Family::S if p > q => continue,
                            Family::A if p >= q => continue,
                            _ => {}
                        }
                        out.push(Generator::two(f, p, q));
                    }
                }
            }
            _ => unreachable!(),
        }
    }
    out
}

/// Report of a Jacobi-identity scan over a finite window.
#[derive(Debug, Clone, Serialize)]
pub struct JacobiReport {
    pub algebra: String,
    pub window: i64,
    pub triples_checked: usize,
    pub violations: Vec<String>,
}

/// Exhaustive [x,[y,z]] + cyclic = 0 over basis triples in the window.
/// Triples whose intermediate brackets leave a one-sided window are skipped
/// (they cannot occur for registered algebras, but the window bound `m_max`
/// itself is no such boundary: full algebras close over all of Z).
pub fn jacobi_check(alg: AlgebraName, m_max: i64) -> Result<JacobiReport, AlgError> {
    let basis = basis_in_window(alg, m_max);
    let mut violations = Vec::new();
    let mut checked = 0usize;
    for (i, x) in basis.iter().enumerate() {
        let ex = AlgebraElement::gen(alg, *x);
        for (j, y) in basis.iter().enumerate().skip(i) {
            let ey = AlgebraElement::gen(alg, *y);
            for z in basis.iter().skip(j) {
                let ez = AlgebraElement::gen(alg, *z);
                let t1 = bracket(&ex, &bracket(&ey, &ez)?)?;
                let t2 = bracket(&ey, &bracket(&ez, &ex)?)?;
                let t3 = bracket(&ez, &bracket(&ex, &ey)?)?;
                let total = t1.add(&t2).add(&t3);
                checked += 1;
                if !total.is_zero() {
                    violations.push(format!("[{x},[{y},{z}]] + cyclic != 0"));
                }
            }
        }
    }
    Ok(JacobiReport {
        algebra: alg.as_str().to_string(),
        window: m_max,
        triples_checked: checked,
        violations,
    })
}

/// An embedding of a finite algebra into an infinite one.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub source: AlgebraName,
    pub target: AlgebraName,
    pub n: i64,
    pub map: BTreeMap<Generator, AlgebraElement>,
}

/// The indexed embedding of the finite spacetime algebra into `g`. All finite
/// generators are rescaled by 1/n so that the finite structure constants come
/// out independent of n.
pub fn embedding(g: AlgebraName, n: i64) -> Result<Embedding, AlgError> {
    let emb = build_embedding(g, n)?;
    verify_embedding(&emb)?;
    Ok(emb)
}

/// Builds the embedding map without the morphism check. Kept separate so that
/// the finite brackets (which delegate through this map) do not re-enter the
/// verification.
fn build_embedding(g: AlgebraName, n: i64) -> Result<Embedding, AlgError> {
    use AlgebraName::*;
    use Family as F;
    if n == 0 {
        return Err(AlgError::BadEmbeddingIndex(n, g.as_str().to_string()));
    }
    let i = Scalar::i();
    let inv_n = Scalar::ratio(1, n);
    // 1/(sqrt2 * n)
    let inv_sqrt2_n = Scalar::sqrt2().inv_monomial().unwrap().mul(&inv_n);
    let mut map = BTreeMap::new();
    let source = match g {
        W2 | W2C => {
            // H = -L_0/n, E+- = (i/n) L_{+-n}, same for the barred copy
            map.insert(
                Generator::plain(F::H),
                AlgebraElement::term(g, Generator::one(F::L, 0), inv_n.neg()),
            );
            map.insert(
                Generator::plain(F::Ep),
                AlgebraElement::term(g, Generator::one(F::L, n), i.mul(&inv_n)),
            );
            map.insert(
                Generator::plain(F::Em),
                AlgebraElement::term(g, Generator::one(F::L, -n), i.mul(&inv_n)),
            );
            map.insert(
                Generator::plain(F::Hb),
                AlgebraElement::term(g, Generator::one(F::Lb, 0), inv_n.neg()),
            );
            map.insert(
                Generator::plain(F::Epb),
                AlgebraElement::term(g, Generator::one(F::Lb, n), i.mul(&inv_n)),
            );
            map.insert(
                Generator::plain(F::Emb),
                AlgebraElement::term(g, Generator::one(F::Lb, -n), i.mul(&inv_n)),
            );
            O4
        }
        B3 | B3C | AdS3 => {
            // M_{+-} = -i l_0/n, M_{+-2} = +-(i/(sqrt2 n)) l_{+-n},
            // P_2 = -i T_0/n, P_+- = (i/(sqrt2 n)) T_{+-n}
            map.insert(
                Generator::plain(F::Mpm),
                AlgebraElement::term(g, Generator::one(F::Ll, 0), i.mul(&inv_n).neg()),
            );
            map.insert(
                Generator::plain(F::Mp2),
                AlgebraElement::term(g, Generator::one(F::Ll, n), i.mul(&inv_sqrt2_n)),
            );
            map.insert(
                Generator::plain(F::Mm2),
                AlgebraElement::term(g, Generator::one(F::Ll, -n), i.mul(&inv_sqrt2_n).neg()),
            );
            let (p2, pp, pm) =
                if g == AdS3 { (F::Pt2, F::Ptp, F::Ptm) } else { (F::P2, F::Pp, F::Pm) };
            map.insert(
                Generator::plain(p2),
                AlgebraElement::term(g, Generator::one(F::T, 0), i.mul(&inv_n).neg()),
            );
            map.insert(
                Generator::plain(pp),
                AlgebraElement::term(g, Generator::one(F::T, n), i.mul(&inv_sqrt2_n)),
            );
            map.insert(
                Generator::plain(pm),
                AlgebraElement::term(g, Generator::one(F::T, -n), i.mul(&inv_sqrt2_n)),
            );
            if g == AdS3 { AdS3Fin } else { P3 }
        }
        B4 | B4C => {
            if n.rem_euclid(2) != 1 {
                return Err(AlgError::BadEmbeddingIndex(n, g.as_str().to_string()));
            }
            let m = (1 - n) / 2;
            let sqrt2_over_2 = Scalar::sqrt2().mul(&Scalar::ratio(1, 2)); // 1/sqrt2
            let c_rot = i.mul(&inv_n).neg(); // -i/n
            let c_rot_s = c_rot.mul(&sqrt2_over_2); // -i/(sqrt2 n)
            let term = |fam, idx, c: &Scalar| AlgebraElement::term(g, Generator { family: fam, idx }, c.clone());
            map.insert(Generator::plain(F::Mpm), term(F::K, Idx::One(0), &c_rot));
            map.insert(Generator::plain(F::M12), term(F::Kb, Idx::One(0), &c_rot.neg()));
            map.insert(Generator::plain(F::Mp1), term(F::K, Idx::One(n), &c_rot_s));
            map.insert(Generator::plain(F::Mm2), term(F::K, Idx::One(-n), &c_rot_s));
            map.insert(Generator::plain(F::Mp2), term(F::Kb, Idx::One(n), &c_rot_s));
            map.insert(Generator::plain(F::Mm1), term(F::Kb, Idx::One(-n), &c_rot_s));
            map.insert(Generator::plain(F::Pm), term(F::S, Idx::Two(m, m), &c_rot_s));
            map.insert(
                Generator::plain(F::Pp),
                term(F::S, Idx::Two(1 - m, 1 - m), &c_rot_s.neg()),
            );
            map.insert(Generator::plain(F::P1), term(F::S, Idx::Two(m, 1 - m), &c_rot.neg()));
            map.insert(Generator::plain(F::P2), term(F::A, Idx::Two(m, 1 - m), &c_rot.neg()));
            P4
        }
        other => return Err(AlgError::BadEmbeddingIndex(n, other.as_str().to_string())),
    };
    Ok(Embedding { source, target: g, n, map })
}

/// Morphism check: emb([X,Y]_finite) = [emb(X), emb(Y)] for all finite pairs.
fn verify_embedding(emb: &Embedding) -> Result<(), AlgError> {
    let fins: Vec<Generator> = emb.map.keys().copied().collect();
    for (i, a) in fins.iter().enumerate() {
        for b in fins.iter().skip(i + 1) {
            let lhs = bracket(emb.map.get(a).unwrap(), emb.map.get(b).unwrap())?;
            let fin_br = bracket(
                &AlgebraElement::gen(emb.source, *a),
                &AlgebraElement::gen(emb.source, *b),
            )?;
            let mut rhs = AlgebraElement::zero(emb.target);
            for (fg, fc) in &fin_br.terms {
                let img = emb.map.get(fg).ok_or_else(|| {
                    AlgError::EmbeddingNotClosed(emb.target.as_str().to_string())
                })?;
                rhs = rhs.add(&img.scale(fc));
            }
            let lhs = if is_b4(emb.target) { b4_to_ksa(&b4_to_llt(&lhs)) } else { lhs };
            let rhs = if is_b4(emb.target) { b4_to_ksa(&b4_to_llt(&rhs)) } else { rhs };
            if lhs != rhs {
                return Err(AlgError::EmbeddingNotClosed(emb.target.as_str().to_string()));
            }
        }
    }
    Ok(())
}

/// Antilinear involutions defining real forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Involution {
    /// L_m -> -L_m, Lbar_m -> -Lbar_m (and l_m -> -l_m, T_m -> -T_m).
    Dagger,
    /// L_m -> -Lbar_m, Lbar_m -> -L_m.
    DoubleDagger,
}

/// Applies the involution to a single generator; antilinearity on coefficients
/// is the caller's responsibility (see `star`).
pub fn star_gen(inv: Involution, g: &Generator) -> (Generator, Scalar) {
    use Family as F;
    let minus = Scalar::int(-1);
    match inv {
        Involution::Dagger => (*g, minus),
        Involution::DoubleDagger => match g.family {
            F::L => (Generator { family: F::Lb, idx: g.idx }, minus),
            F::Lb => (Generator { family: F::L, idx: g.idx }, minus),
            _ => (*g, minus),
        },
    }
}

/// Antilinear star map on elements.
pub fn star(inv: Involution, x: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero(x.algebra);
    for (g, c) in &x.terms {
        let (g2, sgn) = star_gen(inv, g);
        out.add_term(g2, c.conj().mul(&sgn));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use AlgebraName::*;
    use Family as F;

    #[test]
    fn witt_example() {
        let x = AlgebraElement::gen(Witt, Generator::one(F::L, 1));
        let y = AlgebraElement::gen(Witt, Generator::one(F::L, -1));
        let r = bracket(&x, &y).unwrap();
        assert_eq!(r, AlgebraElement::term(Witt, Generator::one(F::L, 0), Scalar::int(2)));
    }

    #[test]
    fn b3c_central_example() {
        let x = AlgebraElement::gen(B3C, Generator::one(F::Ll, 2));
        let y = AlgebraElement::gen(B3C, Generator::one(F::T, -2));
        let r = bracket(&x, &y).unwrap();
        let mut expect = AlgebraElement::term(B3C, Generator::one(F::T, 0), Scalar::int(4));
        expect.add_term(Generator::central(F::CPL), Scalar::int(6));
        assert_eq!(r, expect);
    }

    #[test]
    fn antisymmetry() {
        let x = AlgebraElement::gen(B4, Generator::one(F::K, 1));
        assert!(bracket(&x, &x).unwrap().is_zero());
    }
}
