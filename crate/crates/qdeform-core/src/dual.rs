//! Dual brackets on the supertranslation sector: non-commutative spacetime
//! coordinates dual to the deformed momenta, Minkowski-closure analysis, and
//! canonical (constant) star-product commutators.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{AlgebraElement, AlgebraName, Family, Generator, Idx};
use crate::scalar::Scalar;
use crate::tensor::{cobracket_eval, Cobracket, TensorElement, TensorError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum DualError {
    #[error("cobracket term {0} (x) {1} has no supertranslation leg; the dual pairing is ill-posed")]
    NonSupertranslationLeg(String, String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Basis element of the dual (pseudo-)basis of the supertranslation sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DualGenerator {
    /// Dual to T_m (3D).
    Chi(i64),
    /// Dual to S_pq, p <= q (4D).
    ChiS(i64, i64),
    /// Dual to A_pq, p < q (4D).
    ChiA(i64, i64),
}

impl DualGenerator {
    /// The primal generator this pairs with.
    pub fn primal(&self) -> Generator {
        match self {
            DualGenerator::Chi(m) => Generator::one(Family::T, *m),
            DualGenerator::ChiS(p, q) => Generator::two(Family::S, *p, *q),
            DualGenerator::ChiA(p, q) => Generator::two(Family::A, *p, *q),
        }
    }

    /// The dual of a supertranslation generator, if it has one.
    pub fn of_primal(g: &Generator) -> Option<DualGenerator> {
        match (g.family, g.idx) {
            (Family::T, Idx::One(m)) => Some(DualGenerator::Chi(m)),
            (Family::S, Idx::Two(p, q)) => Some(DualGenerator::ChiS(p, q)),
            (Family::A, Idx::Two(p, q)) => Some(DualGenerator::ChiA(p, q)),
            _ => None,
        }
    }

    fn max_abs_index(&self) -> i64 {
        match self {
            DualGenerator::Chi(m) => m.abs(),
            DualGenerator::ChiS(p, q) | DualGenerator::ChiA(p, q) => p.abs().max(q.abs()),
        }
    }
}

impl fmt::Display for DualGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualGenerator::Chi(m) => write!(f, "chi^{m}"),
            DualGenerator::ChiS(p, q) => write!(f, "chiS^{{{p},{q}}}"),
            DualGenerator::ChiA(p, q) => write!(f, "chiA^{{{p},{q}}}"),
        }
    }
}

/// Finitely supported element of the dual space.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DualElement {
    pub terms: BTreeMap<DualGenerator, Scalar>,
}

impl DualElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn gen(g: DualGenerator) -> Self {
        let mut e = Self::zero();
        e.add_term(g, Scalar::one());
        e
    }

    pub fn term(g: DualGenerator, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(g, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: DualGenerator, c: Scalar) {
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
        let mut out = Self::zero();
        for (g, x) in &self.terms {
            out.add_term(*g, x.mul(c));
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let mut out = Self::zero();
        for (g, x) in &self.terms {
            out.add_term(*g, f(x));
        }
        out
    }
}

fn is_dual_family(f: Family) -> bool {
    matches!(f, Family::T | Family::S | Family::A)
}

/// Index window of primal supertranslation candidates that can pair against
/// the given duals under the cobracket `d`.
fn candidate_primal(
    d: &Cobracket,
    a: &DualGenerator,
    b: &DualGenerator,
) -> Vec<Generator> {
    let margin = match d {
        Cobracket::Coboundary(r) => r.max_abs_index() + 1,
        _ => 2,
    };
    match (a, b) {
        (DualGenerator::Chi(k), DualGenerator::Chi(j)) => {
            let w = k.abs() + j.abs() + margin;
            (-w..=w).map(|m| Generator::one(Family::T, m)).collect()
        }
        _ => {
            let w = a.max_abs_index().max(b.max_abs_index()) + margin;
            let mut out = Vec::new();
            for p in -w..=w {
                for q in p..=w {
                    out.push(Generator::two(Family::S, p, q));
                    if p < q {
                        out.push(Generator::two(Family::A, p, q));
                    }
                }
            }
            out
        }
    }
}

/// The bracket of the dual Lie algebra, determined by the pairing
/// ⟨[χ, χ'], X⟩ = ⟨χ ⊗ χ', δ(X)⟩ with superrotation and central legs pairing
/// to zero.
pub fn dual_bracket(
    d: &Cobracket,
    a: DualGenerator,
    b: DualGenerator,
) -> Result<DualElement, DualError> {
    let alg = d.algebra();
    let (pa, pb) = (a.primal(), b.primal());
    let mut out = DualElement::zero();
    for g in candidate_primal(d, &a, &b) {
        let x = AlgebraElement::gen(alg, g);
        let t = match cobracket_eval(d, &x) {
            Ok(t) => t,
            // generators the cobracket does not cover cannot receive duals
            Err(TensorError::MissingTableEntry(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        let mut coeff = Scalar::zero();
        for (legs, c) in &t.terms {
            let d0 = is_dual_family(legs[0].family);
            let d1 = is_dual_family(legs[1].family);
            if !d0 && !d1 {
                let central0 = legs[0].idx == Idx::None || legs[1].idx == Idx::None;
                if !central0 {
                    return Err(DualError::NonSupertranslationLeg(
                        legs[0].to_string(),
                        legs[1].to_string(),
                    ));
                }
            }
            if legs[0] == pa && legs[1] == pb {
                coeff = coeff.add(c);
            }
        }
        if !coeff.is_zero() {
            let dg = DualGenerator::of_primal(&g).expect("candidate is a supertranslation");
            out.add_term(dg, coeff);
        }
    }
    Ok(out)
}

/// Bilinear extension of [`dual_bracket`] to dual elements.
pub fn dual_bracket_elem(
    d: &Cobracket,
    x: &DualElement,
    y: &DualElement,
) -> Result<DualElement, DualError> {
    let mut out = DualElement::zero();
    for (a, ca) in &x.terms {
        for (b, cb) in &y.terms {
            let br = dual_bracket(d, *a, *b)?;
            out = out.add(&br.scale(&ca.mul(cb)));
        }
    }
    Ok(out)
}

/// One commutator of the embedded Minkowski coordinates, decomposed into the
/// coordinate span plus whatever falls outside it.
#[derive(Debug, Clone)]
pub struct ClosureEntry {
    pub left: String,
    pub right: String,
    /// Coefficients on the embedding coordinates.
    pub in_coordinates: BTreeMap<String, Scalar>,
    /// Part of the commutator outside the coordinate span.
    pub extra: DualElement,
}

#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub algebra: AlgebraName,
    pub embedding: i64,
    pub closed: bool,
    pub entries: Vec<ClosureEntry>,
}

/// The embedded Minkowski coordinates for the `n` (3D) or odd-`n` (4D)
/// embedding, as named dual elements.
pub fn embedding_coordinates(
    g: AlgebraName,
    n: i64,
) -> Vec<(String, DualElement)> {
    use AlgebraName::*;
    let i = Scalar::i();
    let sqrt2 = Scalar::sqrt2();
    let inv_sqrt2 = Scalar::sqrt2().inv_monomial().expect("sqrt2 invertible");
    match g {
        B4 | B4Minus | B4C => {
            let m = (1 - n) / 2;
            vec![
                (
                    "x+".into(),
                    DualElement::term(DualGenerator::ChiS(1 - m, 1 - m), i.mul(&inv_sqrt2)),
                ),
                (
                    "x-".into(),
                    DualElement::term(DualGenerator::ChiS(m, m), i.mul(&inv_sqrt2).neg()),
                ),
                ("x1".into(), DualElement::term(DualGenerator::ChiS(m, 1 - m), i.clone())),
                ("x2".into(), DualElement::term(DualGenerator::ChiA(m, 1 - m), i.clone())),
            ]
        }
        _ => vec![
            (
                "x+".into(),
                DualElement::term(DualGenerator::Chi(n), i.mul(&sqrt2).neg()),
            ),
            (
                "x-".into(),
                DualElement::term(DualGenerator::Chi(-n), i.mul(&sqrt2).neg()),
            ),
            ("x2".into(), DualElement::term(DualGenerator::Chi(0), i.clone())),
        ],
    }
}

/// Computes all pairwise dual brackets of the embedded Minkowski coordinates
/// and reports whether they close on the coordinate span.
pub fn minkowski_closure(
    d: &Cobracket,
    g: AlgebraName,
    n: i64,
) -> Result<ClosureReport, DualError> {
    let coords = embedding_coordinates(g, n);
    // each coordinate is a scaled single dual generator, so membership in the
    // span is per-generator
    let mut span: BTreeMap<DualGenerator, (String, Scalar)> = BTreeMap::new();
    for (name, e) in &coords {
        assert_eq!(e.terms.len(), 1);
        let (dg, c) = e.terms.iter().next().unwrap();
        let inv = c.inv_monomial().expect("coordinate coefficient invertible");
        span.insert(*dg, (name.clone(), inv));
    }
    let mut entries = Vec::new();
    let mut closed = true;
    for (i, (na, xa)) in coords.iter().enumerate() {
        for (nb, xb) in coords.iter().skip(i + 1) {
            let br = dual_bracket_elem(d, xa, xb)?;
            let mut in_coordinates = BTreeMap::new();
            let mut extra = DualElement::zero();
            for (dg, c) in &br.terms {
                match span.get(dg) {
                    Some((name, inv)) => {
                        in_coordinates.insert(name.clone(), c.mul(inv));
                    }
                    None => extra.add_term(*dg, c.clone()),
                }
            }
            if !extra.is_zero() {
                closed = false;
            }
            entries.push(ClosureEntry {
                left: na.clone(),
                right: nb.clone(),
                in_coordinates,
                extra,
            });
        }
    }
    Ok(ClosureReport { algebra: g, embedding: n, closed, entries })
}

/// First-order star commutator constant [χ^a, χ^b] induced by a pure
/// supertranslation-wedge r-matrix through the inverse twist exp(−r/2): the
/// translation legs act on coordinates as ⟨T, χ⟩, so the commutator is the
/// negated coefficient of primal(a) ⊗ primal(b) in the expanded r.
pub fn canonical_nc(r: &TensorElement, a: DualGenerator, b: DualGenerator) -> Scalar {
    assert_eq!(r.rank, 2);
    debug_assert!(
        r.terms.keys().all(|legs| legs.iter().all(|g| is_dual_family(g.family))),
        "r must be supported on the supertranslation wedge"
    );
    r.terms
        .get(&vec![a.primal(), b.primal()])
        .map(|c| c.neg())
        .unwrap_or_else(Scalar::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraName::{B3, B3C, B4};
    use crate::envelope::{build_twist, classical_r, TwistKind};
    use crate::tensor::TensorElement;

    fn tg(m: i64) -> Generator {
        Generator::one(Family::T, m)
    }

    fn lg(m: i64) -> Generator {
        Generator::one(Family::Ll, m)
    }

    fn chi(m: i64) -> DualGenerator {
        DualGenerator::Chi(m)
    }

    fn p(name: &str) -> Scalar {
        Scalar::param(name)
    }

    fn coboundary_of(alg: AlgebraName, kind: TwistKind, order: usize) -> Cobracket {
        let tw = build_twist(alg, kind, order).unwrap();
        Cobracket::Coboundary(classical_r(&tw))
    }

    #[test]
    fn abelian_dual_bracket_closed_form() {
        // [chi^k, chi^j] = -eta (k d^j_0 chi^k - j d^k_0 chi^j)
        let d = coboundary_of(B3, TwistKind::abelian_default(B3).unwrap(), 2);
        for k in -3..=3i64 {
            for j in -3..=3i64 {
                let got = dual_bracket(&d, chi(k), chi(j)).unwrap();
                let mut want = DualElement::zero();
                if j == 0 {
                    want.add_term(chi(k), p("eta").mul_int(-k));
                }
                if k == 0 {
                    want.add_term(chi(j), p("eta").mul_int(j));
                }
                assert_eq!(got, want, "[chi^{k}, chi^{j}]_A");
            }
        }
    }

    #[test]
    fn jordanian_dual_bracket_closed_form() {
        // [chi^k, chi^j] = (chi/n)(k d^j_n chi^k - j d^k_n chi^j)
        for n in [1i64, 2] {
            let d = coboundary_of(B3, TwistKind::Jordanian { n }, 2);
            for k in -3..=3i64 {
                for j in -3..=3i64 {
                    let got = dual_bracket(&d, chi(k), chi(j)).unwrap();
                    let c = p("chi").mul(&Scalar::ratio(1, n));
                    let mut want = DualElement::zero();
                    if j == n {
                        want.add_term(chi(k), c.mul_int(k));
                    }
                    if k == n {
                        want.add_term(chi(j), c.mul_int(-j));
                    }
                    assert_eq!(got, want, "[chi^{k}, chi^{j}]_J, n={n}");
                }
            }
        }
    }

    #[test]
    fn dual_bracket_is_antisymmetric_and_matches_extended_jordanian_pattern() {
        let n = 1i64;
        let d = coboundary_of(B3, TwistKind::ExtendedJordanian { n }, 2);
        for k in -3..=3i64 {
            for j in -3..=3i64 {
                let got = dual_bracket(&d, chi(k), chi(j)).unwrap();
                let flip = dual_bracket(&d, chi(j), chi(k)).unwrap();
                assert_eq!(got, flip.neg(), "antisymmetry at ({k},{j})");
            }
        }
        // the delta^j_0 tail: [chi^k, chi^0] contains a -(k - 2n) chi^{k-n} term
        let got = dual_bracket(&d, chi(3), chi(0)).unwrap();
        let c = p("chi").mul(&Scalar::ratio(1, n));
        assert_eq!(
            got.terms.get(&chi(3 - n)).cloned().unwrap_or_else(Scalar::zero),
            c.mul_int(2 * n - 3),
            "tail of [chi^3, chi^0]_eJ"
        );
    }

    #[test]
    fn central_charge_legs_do_not_contribute() {
        // adding alpha c' ^ T_n to the r-matrix leaves all dual brackets alone
        let tw = build_twist(B3C, TwistKind::Jordanian { n: 1 }, 2).unwrap();
        let r = classical_r(&tw);
        let central = TensorElement::wedge2(
            &AlgebraElement::gen(B3C, Generator::central(Family::CPL)),
            &AlgebraElement::gen(B3C, tg(1)),
        )
        .scale(&p("alpha"));
        let d_plain = Cobracket::Coboundary(r.clone());
        let d_central = Cobracket::Coboundary(r.add(&central));
        for k in -2..=2i64 {
            for j in -2..=2i64 {
                assert_eq!(
                    dual_bracket(&d_plain, chi(k), chi(j)).unwrap(),
                    dual_bracket(&d_central, chi(k), chi(j)).unwrap(),
                    "({k},{j})"
                );
            }
        }
    }

    #[test]
    fn pairing_rejects_purely_rotational_legs() {
        let mut map = BTreeMap::new();
        map.insert(
            tg(0),
            TensorElement::wedge2(
                &AlgebraElement::gen(B3, lg(1)),
                &AlgebraElement::gen(B3, lg(-1)),
            ),
        );
        let d = Cobracket::Table(B3, map);
        let err = dual_bracket(&d, chi(0), chi(0)).unwrap_err();
        assert!(matches!(err, DualError::NonSupertranslationLeg(_, _)));
    }

    #[test]
    fn minkowski_closure_tables() {
        use crate::algebra::AlgebraName;
        let i = Scalar::i();
        let s2 = Scalar::sqrt2();
        let c_ab = |n: i64| i.mul(&p("eta")).mul_int(-n);
        let c_j3 = i.mul(&p("chi")).mul(&s2).neg();
        let c_j4 = i.mul(&p("chi")).mul(&s2).mul(&Scalar::ratio(1, 2));
        let c_x3 = p("chi").mul(&s2);
        let cases: Vec<(AlgebraName, TwistKind, i64)> = vec![
            (B3, TwistKind::abelian_default(B3).unwrap(), 1),
            (B3, TwistKind::abelian_default(B3).unwrap(), 2),
            (B3, TwistKind::Jordanian { n: 1 }, 1),
            (B3, TwistKind::Jordanian { n: 2 }, 2),
            (B3, TwistKind::ExtendedJordanian { n: 1 }, 1),
            (B4, TwistKind::Jordanian { n: 1 }, 1),
            (B4, TwistKind::Jordanian { n: 3 }, 3),
            (B4, TwistKind::ExtendedJordanian { n: 1 }, 1),
            (B4, TwistKind::ExtendedJordanian { n: 3 }, 3),
        ];
        for (alg, kind, n) in cases {
            let d = coboundary_of(alg, kind.clone(), 2);
            let rep = minkowski_closure(&d, alg, n).unwrap();
            let mut want: BTreeMap<(&str, &str), (Vec<(&str, Scalar)>, DualElement)> =
                BTreeMap::new();
            let m = (1 - n) / 2;
            match (alg, &kind) {
                (B3, TwistKind::Abelian { .. }) => {
                    want.insert(("x+", "x2"), (vec![("x+", c_ab(n))], DualElement::zero()));
                    want.insert(("x-", "x2"), (vec![("x-", c_ab(-n))], DualElement::zero()));
                }
                (B3, TwistKind::Jordanian { .. }) => {
                    want.insert(("x+", "x-"), (vec![("x-", c_j3.clone())], DualElement::zero()));
                }
                (B3, TwistKind::ExtendedJordanian { .. }) => {
                    want.insert(("x+", "x-"), (vec![("x-", c_j3.clone())], DualElement::zero()));
                    want.insert(("x+", "x2"), (vec![("x2", c_j3.clone())], DualElement::zero()));
                    want.insert(
                        ("x-", "x2"),
                        (
                            vec![],
                            DualElement::term(chi(-2 * n), c_x3.mul_int(3)),
                        ),
                    );
                }
                (B4, TwistKind::Jordanian { .. }) => {
                    want.insert(("x+", "x-"), (vec![("x-", c_j4.clone())], DualElement::zero()));
                }
                (B4, TwistKind::ExtendedJordanian { .. }) => {
                    want.insert(("x+", "x-"), (vec![("x-", c_j4.clone())], DualElement::zero()));
                    want.insert(("x+", "x1"), (vec![("x1", c_j4.clone())], DualElement::zero()));
                    want.insert(("x+", "x2"), (vec![("x2", c_j4.clone())], DualElement::zero()));
                    want.insert(
                        ("x-", "x1"),
                        (
                            vec![],
                            DualElement::term(DualGenerator::ChiS(3 * m - 1, m), c_x3.clone()),
                        ),
                    );
                    want.insert(
                        ("x-", "x2"),
                        (
                            vec![],
                            DualElement::term(DualGenerator::ChiA(3 * m - 1, m), c_x3.clone()),
                        ),
                    );
                }
                _ => unreachable!(),
            }
            let should_close = want.values().all(|(_, extra)| extra.is_zero());
            assert_eq!(rep.closed, should_close, "{alg:?} {kind:?} n={n}");
            for e in &rep.entries {
                let (coords, extra) = want
                    .remove(&(e.left.as_str(), e.right.as_str()))
                    .unwrap_or((vec![], DualElement::zero()));
                let coords: BTreeMap<String, Scalar> =
                    coords.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
                assert_eq!(e.in_coordinates, coords, "{alg:?} {kind:?} [{}, {}]", e.left, e.right);
                assert_eq!(e.extra, extra, "{alg:?} {kind:?} [{}, {}] extra", e.left, e.right);
            }
            assert!(want.is_empty());
        }
    }

    #[test]
    fn physical_minkowski_tables_at_kappa() {
        // eta = i/(n kappa) and chi = -i/(sqrt2 kappa) reproduce the
        // kappa-Minkowski style tables with all structure constants +-1/kappa
        let inv_kappa = Scalar::param_pow("kappa", -1);
        let sub = |e: &DualElement, name: &str, v: &Scalar| {
            e.map_coeffs(|c| c.substitute(name, v).unwrap())
        };
        for n in [1i64, 2] {
            let d = coboundary_of(B3, TwistKind::abelian_default(B3).unwrap(), 2);
            let eta = Scalar::i().mul(&inv_kappa).mul(&Scalar::ratio(1, n));
            let rep = minkowski_closure(&d, B3, n).unwrap();
            for e in &rep.entries {
                let got: BTreeMap<String, Scalar> = e
                    .in_coordinates
                    .iter()
                    .map(|(k, v)| (k.clone(), v.substitute("eta", &eta).unwrap()))
                    .collect();
                match (e.left.as_str(), e.right.as_str()) {
                    ("x+", "x2") => {
                        assert_eq!(got, BTreeMap::from([("x+".to_string(), inv_kappa.clone())]))
                    }
                    ("x-", "x2") => assert_eq!(
                        got,
                        BTreeMap::from([("x-".to_string(), inv_kappa.neg())])
                    ),
                    _ => assert!(got.is_empty()),
                }
            }
        }
        let chi3 = Scalar::i()
            .mul(&Scalar::sqrt2().inv_monomial().unwrap())
            .mul(&inv_kappa)
            .neg();
        let d = coboundary_of(B3, TwistKind::Jordanian { n: 1 }, 2);
        let rep = minkowski_closure(&d, B3, 1).unwrap();
        let pm = &rep.entries[0];
        assert_eq!((pm.left.as_str(), pm.right.as_str()), ("x+", "x-"));
        assert_eq!(
            pm.in_coordinates["x-"].substitute("chi", &chi3).unwrap(),
            inv_kappa.neg()
        );
        let d = coboundary_of(B3, TwistKind::ExtendedJordanian { n: 1 }, 2);
        let rep = minkowski_closure(&d, B3, 1).unwrap();
        let m2 = rep.entries.iter().find(|e| e.left == "x-" && e.right == "x2").unwrap();
        assert_eq!(
            sub(&m2.extra, "chi", &chi3),
            DualElement::term(chi(-2), Scalar::i().mul(&inv_kappa).mul_int(-3))
        );
        // chi = i sqrt2 / kappa in 4D
        let chi4 = Scalar::i().mul(&Scalar::sqrt2()).mul(&inv_kappa);
        let d = coboundary_of(B4, TwistKind::Jordanian { n: 1 }, 2);
        let rep = minkowski_closure(&d, B4, 1).unwrap();
        let pm = rep.entries.iter().find(|e| e.left == "x+" && e.right == "x-").unwrap();
        assert_eq!(
            pm.in_coordinates["x-"].substitute("chi", &chi4).unwrap(),
            inv_kappa.neg()
        );
        let d = coboundary_of(B4, TwistKind::ExtendedJordanian { n: 1 }, 2);
        let rep = minkowski_closure(&d, B4, 1).unwrap();
        for (right, g) in [("x1", DualGenerator::ChiS(-1, 0)), ("x2", DualGenerator::ChiA(-1, 0))] {
            let e = rep.entries.iter().find(|e| e.left == "x-" && e.right == right).unwrap();
            assert_eq!(
                sub(&e.extra, "chi", &chi4),
                DualElement::term(g, Scalar::i().mul(&inv_kappa).mul_int(2))
            );
        }
    }

    #[test]
    fn jacobi_holds_on_closed_coordinate_tables() {
        let cases = [
            (B3, TwistKind::abelian_default(B3).unwrap(), 1i64),
            (B3, TwistKind::Jordanian { n: 1 }, 1),
            (B4, TwistKind::Jordanian { n: 1 }, 1),
        ];
        for (alg, kind, n) in cases {
            let d = coboundary_of(alg, kind, 2);
            let coords = embedding_coordinates(alg, n);
            for a in 0..coords.len() {
                for b in 0..coords.len() {
                    for c in 0..coords.len() {
                        let (x, y, z) = (&coords[a].1, &coords[b].1, &coords[c].1);
                        let mut sum = DualElement::zero();
                        for (u, v, w) in [(x, y, z), (y, z, x), (z, x, y)] {
                            let inner = dual_bracket_elem(&d, v, w).unwrap();
                            sum = sum.add(&dual_bracket_elem(&d, u, &inner).unwrap());
                        }
                        assert!(sum.is_zero(), "jacobi fails at ({a},{b},{c})");
                    }
                }
            }
        }
    }

    #[test]
    fn four_dimensional_jordanian_dual_rule() {
        // [chiS^{kj}, chiS^{k'j'}] =
        //   -(chi/n)((1-k-j) chiS^{kj} d^{k'j'}_u - (1-k'-j') chiS^{k'j'} d^{kj}_u)
        // with u = (1-m, 1-m), and the same diagonal tower on chiA legs
        for n in [1i64, 3] {
            let m = (1 - n) / 2;
            let u = (1 - m, 1 - m);
            let d = coboundary_of(B4, TwistKind::Jordanian { n }, 2);
            let c = p("chi").mul(&Scalar::ratio(-1, n));
            let pairs: Vec<DualGenerator> = {
                let mut v = Vec::new();
                for a in -1..=2i64 {
                    for b in a..=2i64 {
                        v.push(DualGenerator::ChiS(a, b));
                        if a < b {
                            v.push(DualGenerator::ChiA(a, b));
                        }
                    }
                }
                v
            };
            for x in &pairs {
                for y in &pairs {
                    let got = dual_bracket(&d, *x, *y).unwrap();
                    let mut want = DualElement::zero();
                    let weight = |g: &DualGenerator| match g {
                        DualGenerator::ChiS(a, b) | DualGenerator::ChiA(a, b) => 1 - a - b,
                        DualGenerator::Chi(_) => unreachable!(),
                    };
                    if *y == DualGenerator::ChiS(u.0, u.1) {
                        want.add_term(*x, c.mul_int(weight(x)));
                    }
                    if *x == DualGenerator::ChiS(u.0, u.1) {
                        want.add_term(*y, c.mul_int(-weight(y)));
                    }
                    assert_eq!(got, want, "n={n}, [{x}, {y}]");
                }
            }
        }
    }

    #[test]
    fn duality_commutes_with_automorphisms() {
        use crate::catalog::{apply_automorphism, Automorphism};
        // the inner so(2,1) rotation phi on the |m| <= 1 sector, and its
        // pairing adjoint on the dual side
        let l = |m: i64| AlgebraElement::gen(B3, Generator::one(Family::Ll, m));
        let t = |m: i64| AlgebraElement::gen(B3, Generator::one(Family::T, m));
        let r3 = TensorElement::wedge2(&l(1).add(&l(-1).neg()), &t(1).add(&t(-1).neg()));
        let d3 = Cobracket::Coboundary(r3.clone());

        let mut map = BTreeMap::new();
        let half = Scalar::ratio(1, 2);
        for fam in [Family::Ll, Family::T] {
            let e = |m: i64| AlgebraElement::gen(B3, Generator::one(fam, m));
            map.insert(
                Generator::one(fam, 1),
                e(1).scale(&half.neg()).add(&e(-1).scale(&half.neg())).add(&e(0)),
            );
            map.insert(
                Generator::one(fam, -1),
                e(1).scale(&half.neg()).add(&e(-1).scale(&half.neg())).add(&e(0).neg()),
            );
            map.insert(Generator::one(fam, 0), e(1).scale(&half).add(&e(-1).scale(&half).neg()));
        }
        let phi = Automorphism::FiniteLinear { algebra: B3, map };
        let fr = apply_automorphism(&phi, &r3).unwrap();
        assert_eq!(
            fr,
            TensorElement::wedge2(&l(0), &t(0)).scale(&Scalar::int(4)),
            "phi maps the reference r-matrix onto 4 l_0 ^ T_0"
        );
        let dphi = Cobracket::Coboundary(fr);

        // adjoint of phi on the dual span, an involution; duals of modes
        // outside the span pair to zero against the image of phi
        let dag_map: BTreeMap<DualGenerator, DualElement> = BTreeMap::from([
            (chi(1), {
                let mut e = DualElement::term(chi(1), half.neg());
                e.add_term(chi(-1), half.neg());
                e.add_term(chi(0), half.clone());
                e
            }),
            (chi(-1), {
                let mut e = DualElement::term(chi(1), half.neg());
                e.add_term(chi(-1), half.neg());
                e.add_term(chi(0), half.neg());
                e
            }),
            (chi(0), {
                let mut e = DualElement::term(chi(1), Scalar::one());
                e.add_term(chi(-1), Scalar::int(-1));
                e
            }),
        ]);
        let dag = |x: &DualElement| {
            let mut out = DualElement::zero();
            for (g, c) in &x.terms {
                if let Some(img) = dag_map.get(g) {
                    out = out.add(&img.scale(c));
                }
            }
            out
        };
        for k in -1..=1i64 {
            let twice = dag(&dag(&DualElement::gen(chi(k))));
            assert_eq!(twice, DualElement::gen(chi(k)), "adjoint is an involution");
        }
        for k in -1..=1i64 {
            for j in -1..=1i64 {
                let lhs = dual_bracket(&dphi, chi(k), chi(j)).unwrap();
                let inner = dual_bracket_elem(&d3, &dag(&DualElement::gen(chi(k))), &dag(&DualElement::gen(chi(j)))).unwrap();
                let rhs = dag(&inner);
                assert_eq!(lhs, rhs, "duality/automorphism compatibility at ({k},{j})");
            }
        }
    }

    #[test]
    fn reference_coboundary_dual_table() {
        // delta_r(T_m) for r = (l_1 - l_-1) ^ (T_1 - T_-1) induces
        // [chi^k, chi^j] = (k-2) chi^{k-1}(d^j_1 - d^j_-1)
        //                - (k+2) chi^{k+1}(d^j_1 - d^j_-1) - (k <-> j)
        let l = |m: i64| AlgebraElement::gen(B3, Generator::one(Family::Ll, m));
        let t = |m: i64| AlgebraElement::gen(B3, Generator::one(Family::T, m));
        let r3 = TensorElement::wedge2(&l(1).add(&l(-1).neg()), &t(1).add(&t(-1).neg()));
        let d3 = Cobracket::Coboundary(r3);
        let half_rule = |k: i64, j: i64| {
            let mut e = DualElement::zero();
            let s = (j == 1) as i64 - (j == -1) as i64;
            if s != 0 {
                e.add_term(chi(k - 1), Scalar::int(s * (k - 2)));
                e.add_term(chi(k + 1), Scalar::int(-s * (k + 2)));
            }
            e
        };
        for k in -3..=3i64 {
            for j in -3..=3i64 {
                let got = dual_bracket(&d3, chi(k), chi(j)).unwrap();
                let want = half_rule(k, j).sub(&half_rule(j, k));
                assert_eq!(got, want, "({k},{j})");
            }
        }
        // spot values, including the projection onto the |k| <= 1 sector
        let b = dual_bracket(&d3, chi(1), chi(-1)).unwrap();
        let mut w = DualElement::term(chi(0), Scalar::int(2));
        w.add_term(chi(2), Scalar::int(3));
        w.add_term(chi(-2), Scalar::int(3));
        assert_eq!(b, w);
        let b = dual_bracket(&d3, chi(1), chi(0)).unwrap();
        let mut w = DualElement::term(chi(1), Scalar::int(2));
        w.add_term(chi(-1), Scalar::int(2));
        assert_eq!(b, w);
    }

    #[test]
    fn canonical_nc_matches_first_order_star_commutator() {
        let t = |m: i64| AlgebraElement::gen(B3, Generator::one(Family::T, m));
        let r = TensorElement::wedge2(&t(0), &t(1))
            .scale(&p("theta"))
            .add(&TensorElement::wedge2(&t(1), &t(-1)).scale(&p("theta2")));
        for pp in -2..=2i64 {
            for q in -2..=2i64 {
                // mu((1 - r/2) |> chi^p (x) chi^q) antisymmetrized: the legs
                // act by pairing, so the commutator is -(r_pq - r_qp)/2
                let cpq = r
                    .terms
                    .get(&vec![tg(pp), tg(q)])
                    .cloned()
                    .unwrap_or_else(Scalar::zero);
                let cqp = r
                    .terms
                    .get(&vec![tg(q), tg(pp)])
                    .cloned()
                    .unwrap_or_else(Scalar::zero);
                let oracle = cpq.sub(&cqp).mul(&Scalar::ratio(-1, 2));
                assert_eq!(canonical_nc(&r, chi(pp), chi(q)), oracle, "({pp},{q})");
            }
        }
    }

    #[test]
    fn canonical_nc_embedded_coordinates() {
        let t = |m: i64| AlgebraElement::gen(B3, Generator::one(Family::T, m));
        let nc_coord = |r: &TensorElement, x: &DualElement, y: &DualElement| {
            let mut out = Scalar::zero();
            for (a, ca) in &x.terms {
                for (b, cb) in &y.terms {
                    out = out.add(&canonical_nc(r, *a, *b).mul(&ca.mul(cb)));
                }
            }
            out
        };
        let coords: BTreeMap<String, DualElement> =
            embedding_coordinates(B3, 1).into_iter().collect();
        // r = theta T_0 ^ T_1: the only constant commutator is [x2, x+]
        let r = TensorElement::wedge2(&t(0), &t(1)).scale(&p("theta"));
        assert_eq!(
            nc_coord(&r, &coords["x2"], &coords["x+"]),
            Scalar::sqrt2().mul(&p("theta")).neg()
        );
        assert!(nc_coord(&r, &coords["x2"], &coords["x-"]).is_zero());
        assert!(nc_coord(&r, &coords["x+"], &coords["x-"]).is_zero());
        // r = theta T_1 ^ T_-1: light-cone commutator [x+, x-] = 2 theta
        let r = TensorElement::wedge2(&t(1), &t(-1)).scale(&p("theta"));
        assert_eq!(
            nc_coord(&r, &coords["x+"], &coords["x-"]),
            p("theta").mul_int(2)
        );
        assert!(nc_coord(&r, &coords["x2"], &coords["x+"]).is_zero());
    }
}
