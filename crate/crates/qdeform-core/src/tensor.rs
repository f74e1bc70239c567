//! Tensor and wedge algebra over a registered Lie algebra: adjoint actions on
//! tensor powers, Schouten brackets, cobrackets, cocycle checks, reality
//! conditions and ad-invariance scans.

use crate::algebra::{
    basis_in_window, bracket, star_gen, AlgebraElement, AlgebraName, Family, Generator,
    Involution,
};
use crate::linalg;
use crate::scalar::{GaussianRational, Scalar};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum TensorError {
    #[error("cobracket table has no entry for {0}")]
    MissingTableEntry(String),
    #[error("reality equations are nonlinear in the parameters")]
    NonLinear,
    #[error("no star structure registered for this algebra/involution")]
    UnsupportedInvolution,
}

/// Sparse rank-k tensor over an algebra. Wedge elements are stored fully
/// expanded, a∧b = a⊗b − b⊗a (no 1/k! normalization), so that printed
/// coefficients of cobrackets match term-by-term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    pub algebra: AlgebraName,
    pub rank: usize,
    pub terms: BTreeMap<Vec<Generator>, Scalar>,
}

impl TensorElement {
    pub fn zero(algebra: AlgebraName, rank: usize) -> Self {
        Self { algebra, rank, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, legs: Vec<Generator>, c: Scalar) {
        debug_assert_eq!(legs.len(), self.rank);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(legs.clone()).or_insert_with(Scalar::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&legs);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.algebra, other.algebra);
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (legs, c) in &other.terms {
            out.add_term(legs.clone(), c.clone());
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
        for (legs, x) in &self.terms {
            out.add_term(legs.clone(), x.mul(c));
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let mut out = Self::zero(self.algebra, self.rank);
        for (legs, x) in &self.terms {
            out.add_term(legs.clone(), f(x));
        }
        out
    }

    /// Tensor product of elements, rank = number of factors.
    pub fn product(factors: &[&AlgebraElement]) -> Self {
        assert!(!factors.is_empty());
        let alg = factors[0].algebra;
        let mut out = Self::zero(alg, factors.len());
        let mut stack: Vec<(Vec<Generator>, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for f in factors {
            assert_eq!(f.algebra, alg);
            let mut next = Vec::new();
            for (legs, c) in &stack {
                for (g, cg) in &f.terms {
                    let mut l2 = legs.clone();
                    l2.push(*g);
                    next.push((l2, c.mul(cg)));
                }
            }
            stack = next;
        }
        for (legs, c) in stack {
            out.add_term(legs, c);
        }
        out
    }

    pub fn wedge2(x: &AlgebraElement, y: &AlgebraElement) -> Self {
        Self::product(&[x, y]).sub(&Self::product(&[y, x]))
    }

    pub fn wedge3(x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> Self {
        let mut out = Self::zero(x.algebra, 3);
        let perms: [(usize, usize, usize, i64); 6] = [
            (0, 1, 2, 1),
            (1, 2, 0, 1),
            (2, 0, 1, 1),
            (1, 0, 2, -1),
            (0, 2, 1, -1),
            (2, 1, 0, -1),
        ];
        let f = [x, y, z];
        for (a, b, c, sgn) in perms {
            out = out.add(&Self::product(&[f[a], f[b], f[c]]).scale(&Scalar::int(sgn)));
        }
        out
    }

    /// Applies a linear map on generators to every leg.
    pub fn apply_linear(
        &self,
        target: AlgebraName,
        f: impl Fn(&Generator) -> AlgebraElement,
    ) -> Self {
        let mut out = Self::zero(target, self.rank);
        for (legs, c) in &self.terms {
            let mut stack: Vec<(Vec<Generator>, Scalar)> = vec![(Vec::new(), c.clone())];
            for g in legs {
                let img = f(g);
                assert_eq!(img.algebra, target);
                let mut next = Vec::new();
                for (pl, pc) in &stack {
                    for (ig, ic) in &img.terms {
                        let mut l2 = pl.clone();
                        l2.push(*ig);
                        next.push((l2, pc.mul(ic)));
                    }
                }
                stack = next;
            }
            for (legs2, c2) in stack {
                out.add_term(legs2, c2);
            }
        }
        out
    }

    /// Largest absolute generator index appearing in any leg.
    pub fn max_abs_index(&self) -> i64 {
        self.terms
            .keys()
            .flat_map(|legs| legs.iter().flat_map(|g| g.indices()))
            .map(|i| i.abs())
            .max()
            .unwrap_or(0)
    }
}

/// Leibniz action of x on a tensor: x ▷ (a⊗b⊗…) = [x,a]⊗b⊗… + a⊗[x,b]⊗… + ….
pub fn ad_action(x: &AlgebraElement, t: &TensorElement) -> TensorElement {
    assert_eq!(x.algebra, t.algebra);
    let mut out = TensorElement::zero(t.algebra, t.rank);
    for (legs, c) in &t.terms {
        for (slot, g) in legs.iter().enumerate() {
            let br = bracket(x, &AlgebraElement::gen(t.algebra, *g))
                .expect("bracket closes on registered algebras");
            for (g2, c2) in &br.terms {
                let mut l2 = legs.clone();
                l2[slot] = *g2;
                out.add_term(l2, c.mul(c2));
            }
        }
    }
    out
}

/// Named closed-form cobrackets.
#[derive(Debug, Clone)]
pub enum CobracketRule {
    /// On B3C: T_m ↦ α c'_L ∧ T_m, superrotations and the center ↦ 0.
    DeltaAlpha { alpha: Scalar },
    /// On B4C: supertranslations X ↦ (α c_l + ᾱ c_l̄) ∧ X, rest ↦ 0.
    DeltaAlphaBar { alpha: Scalar, abar: Scalar },
}

#[derive(Debug, Clone)]
pub enum Cobracket {
    Coboundary(TensorElement),
    Table(AlgebraName, BTreeMap<Generator, TensorElement>),
    Rule(AlgebraName, CobracketRule),
}

impl Cobracket {
    pub fn algebra(&self) -> AlgebraName {
        match self {
            Cobracket::Coboundary(r) => r.algebra,
            Cobracket::Table(a, _) => *a,
            Cobracket::Rule(a, _) => *a,
        }
    }

    fn eval_gen(&self, g: &Generator) -> Result<TensorElement, TensorError> {
        let alg = self.algebra();
        match self {
            Cobracket::Coboundary(r) => {
                Ok(ad_action(&AlgebraElement::gen(alg, *g), r))
            }
            Cobracket::Table(_, map) => map
                .get(g)
                .cloned()
                .ok_or_else(|| TensorError::MissingTableEntry(g.to_string())),
            Cobracket::Rule(_, rule) => {
                let mut out = TensorElement::zero(alg, 2);
                match rule {
                    CobracketRule::DeltaAlpha { alpha } => {
                        if g.family == Family::T {
                            let c = AlgebraElement::gen(alg, Generator::central(Family::CPL));
                            let t = AlgebraElement::gen(alg, *g);
                            out = TensorElement::wedge2(&c, &t).scale(alpha);
                        }
                    }
                    CobracketRule::DeltaAlphaBar { alpha, abar } => {
                        if matches!(g.family, Family::T2 | Family::S | Family::A) {
                            let mut c = AlgebraElement::term(
                                alg,
                                Generator::central(Family::Cl),
                                alpha.clone(),
                            );
                            c.add_term(Generator::central(Family::Clb), abar.clone());
                            let t = AlgebraElement::gen(alg, *g);
                            out = TensorElement::wedge2(&c, &t);
                        }
                    }
                }
                Ok(out)
            }
        }
    }
}

pub fn cobracket_eval(d: &Cobracket, x: &AlgebraElement) -> Result<TensorElement, TensorError> {
    let alg = d.algebra();
    assert_eq!(x.algebra, alg);
    let mut out = TensorElement::zero(alg, 2);
    for (g, c) in &x.terms {
        out = out.add(&d.eval_gen(g)?.scale(c));
    }
    Ok(out)
}

/// The classical-Yang-Baxter combination [r₁₂,r₁₃] + [r₁₂,r₂₃] + [r₁₃,r₂₃]
/// on the expanded skew tensor.
pub fn cybe(r: &TensorElement) -> TensorElement {
    assert_eq!(r.rank, 2);
    let alg = r.algebra;
    let mut out = TensorElement::zero(alg, 3);
    let terms: Vec<(&Vec<Generator>, &Scalar)> = r.terms.iter().collect();
    for (la, ca) in &terms {
        for (lb, cb) in &terms {
            let c = ca.mul(cb);
            let (a1, b1) = (la[0], la[1]);
            let (a2, b2) = (lb[0], lb[1]);
            let br = |x: Generator, y: Generator| {
                bracket(&AlgebraElement::gen(alg, x), &AlgebraElement::gen(alg, y))
                    .expect("bracket closes on registered algebras")
            };
            // [r12, r13] = [a1,a2] ⊗ b1 ⊗ b2
            for (g, cg) in &br(a1, a2).terms {
                out.add_term(vec![*g, b1, b2], c.mul(cg));
            }
            // [r12, r23] = a1 ⊗ [b1,a2] ⊗ b2
            for (g, cg) in &br(b1, a2).terms {
                out.add_term(vec![a1, *g, b2], c.mul(cg));
            }
            // [r13, r23] = a1 ⊗ a2 ⊗ [b1,b2]
            for (g, cg) in &br(b1, b2).terms {
                out.add_term(vec![a1, a2, *g], c.mul(cg));
            }
        }
    }
    out
}

/// Schouten bracket [[r,r]], in the same normalization as the printed
/// nonzero obstruction values (twice the CYBE combination).
pub fn schouten(r: &TensorElement) -> TensorElement {
    cybe(r).scale(&Scalar::int(2))
}

/// Independent oracle: r given as a list of decomposable wedges c·x∧y;
/// [[x∧y, u∧v]] = [x,u]∧y∧v − [x,v]∧y∧u − [y,u]∧x∧v + [y,v]∧x∧u summed over
/// ordered pairs of wedge terms.
pub fn schouten_wedge_oracle(
    alg: AlgebraName,
    wedges: &[(Scalar, AlgebraElement, AlgebraElement)],
) -> TensorElement {
    let mut out = TensorElement::zero(alg, 3);
    for (ck, xk, yk) in wedges {
        for (cl, xl, yl) in wedges {
            let c = ck.mul(cl);
            let br = |u: &AlgebraElement, v: &AlgebraElement| {
                bracket(u, v).expect("bracket closes on registered algebras")
            };
            let pieces = [
                (br(xk, xl), yk, yl, 1),
                (br(xk, yl), yk, xl, -1),
                (br(yk, xl), xk, yl, -1),
                (br(yk, yl), xk, xl, 1),
            ];
            for (b, u, v, sgn) in pieces {
                out = out.add(
                    &TensorElement::wedge3(&b, u, v).scale(&c.mul_int(sgn)),
                );
            }
        }
    }
    out
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct LbaReport {
    pub pairs_checked: usize,
    pub pairs_skipped: usize,
    pub cojacobi_checked: usize,
    pub cojacobi_skipped: usize,
    pub violations: Vec<String>,
}

impl LbaReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn within_window(t: &TensorElement, m_max: i64) -> bool {
    t.max_abs_index() <= m_max
}

/// Verifies the 1-cocycle condition δ([x,y]) = x▷δ(y) − y▷δ(x) and co-Jacobi
/// Cycl((δ⊗id)δ(x)) = 0 over basis elements with |index| ≤ m_max. Pairs whose
/// bracket or δ-output leaves the window are skipped, not reported.
pub fn check_lba(d: &Cobracket, m_max: i64) -> LbaReport {
    let alg = d.algebra();
    let basis = basis_in_window(alg, m_max);
    let mut rep = LbaReport {
        pairs_checked: 0,
        pairs_skipped: 0,
        cojacobi_checked: 0,
        cojacobi_skipped: 0,
        violations: Vec::new(),
    };
    for (i, x) in basis.iter().enumerate() {
        let ex = AlgebraElement::gen(alg, *x);
        for y in basis.iter().skip(i + 1) {
            let ey = AlgebraElement::gen(alg, *y);
            let Ok(xy) = bracket(&ex, &ey) else {
                rep.pairs_skipped += 1;
                continue;
            };
            if xy.terms.keys().any(|g| g.indices().iter().any(|&k| k.abs() > m_max)) {
                rep.pairs_skipped += 1;
                continue;
            }
            let pieces = (
                cobracket_eval(d, &xy),
                cobracket_eval(d, &ey),
                cobracket_eval(d, &ex),
            );
            let (Ok(dxy), Ok(dy), Ok(dx)) = pieces else {
                rep.pairs_skipped += 1;
                continue;
            };
            if !within_window(&dxy, m_max + 2)
                || !within_window(&dy, m_max)
                || !within_window(&dx, m_max)
            {
                rep.pairs_skipped += 1;
                continue;
            }
            let rhs = ad_action(&ex, &dy).sub(&ad_action(&ey, &dx));
            rep.pairs_checked += 1;
            if dxy != rhs {
                rep.violations.push(format!("cocycle fails on [{x},{y}]"));
            }
        }
        // co-Jacobi on x
        let Ok(dx) = cobracket_eval(d, &ex) else {
            rep.cojacobi_skipped += 1;
            continue;
        };
        let mut total = TensorElement::zero(alg, 3);
        let mut skipped = false;
        let mut expanded = TensorElement::zero(alg, 3);
        for (legs, c) in &dx.terms {
            match d.eval_gen(&legs[0]) {
                Ok(d1) => {
                    for (l2, c2) in &d1.terms {
                        expanded.add_term(vec![l2[0], l2[1], legs[1]], c.mul(c2));
                    }
                }
                Err(_) => {
                    skipped = true;
                    break;
                }
            }
        }
        if skipped {
            rep.cojacobi_skipped += 1;
            continue;
        }
        // cyclic sum over the three slots
        for rot in 0..3 {
            for (legs, c) in &expanded.terms {
                let l2 = vec![legs[rot % 3], legs[(rot + 1) % 3], legs[(rot + 2) % 3]];
                total.add_term(l2, c.clone());
            }
        }
        rep.cojacobi_checked += 1;
        if !total.is_zero() {
            rep.violations.push(format!("co-Jacobi fails on {x}"));
        }
    }
    rep
}

/// Star map on both tensor legs, with parameters treated as complex unknowns
/// (p ↦ p_conj in the coefficients): r ↦ r^{*⊗*}.
pub fn star2_complex(r: &TensorElement, inv: Involution) -> TensorElement {
    let mut out = TensorElement::zero(r.algebra, r.rank);
    for (legs, c) in &r.terms {
        let mut sign = Scalar::one();
        let legs2: Vec<Generator> = legs
            .iter()
            .map(|g| {
                let (g2, s) = star_gen(inv, g);
                sign = sign.mul(&s);
                g2
            })
            .collect();
        out.add_term(legs2, c.conj_params("_conj").mul(&sign));
    }
    out
}

/// Parameter reality constraints, as printed in classification tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamConstraint {
    /// p ∈ ℝ
    Real(String),
    /// p ∈ iℝ
    Imaginary(String),
    /// p = 0
    Zero(String),
    /// p = q
    Equal(String, String),
    /// recorded verbatim, not machine-checked
    Literal(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealityResult {
    /// claimed constraints imply r^{*⊗*} = −r
    pub sufficient: bool,
    /// the reality equations imply the claimed constraints
    pub necessary: bool,
    /// the reality equations force r = 0 entirely
    pub excluded: bool,
    pub has_literal: bool,
}

/// Extracts the linear system over the realified parameters (x_p, y_p per
/// parameter p = x_p + i y_p) from a list of Scalar equations that are linear
/// in {p, p_conj}.
fn realified_system(
    eqs: &[Scalar],
    params: &[String],
) -> Result<Vec<Vec<GaussianRational>>, TensorError> {
    let idx = |p: &str| params.iter().position(|q| q == p);
    let ncols = 2 * params.len();
    let mut rows = Vec::new();
    for eq in eqs {
        // complex row over unknowns (x_p, y_p)
        let mut row = vec![GaussianRational::zero(); ncols];
        for (mono, coeff) in eq.terms() {
            let named: Vec<(&String, &i64)> = mono.iter().collect();
            if named.len() != 1 || *named[0].1 != 1 {
                return Err(TensorError::NonLinear);
            }
            let name = named[0].0.as_str();
            let (base, conj) = match name.strip_suffix("_conj") {
                Some(b) => (b, true),
                None => (name, false),
            };
            let Some(j) = idx(base) else { return Err(TensorError::NonLinear) };
            // c·p = c·x + c·i·y ; c·p* = c·x − c·i·y
            row[2 * j] = row[2 * j].add(coeff);
            let ic = coeff.mul(&GaussianRational::i());
            row[2 * j + 1] =
                if conj { row[2 * j + 1].add(&ic.neg()) } else { row[2 * j + 1].add(&ic) };
        }
        // split into real and imaginary parts (real rows)
        let mut re_row = Vec::with_capacity(ncols);
        let mut im_row = Vec::with_capacity(ncols);
        for c in row {
            re_row.push(GaussianRational::new(c.re.clone(), num::Zero::zero()));
            im_row.push(GaussianRational::new(c.im.clone(), num::Zero::zero()));
        }
        rows.push(re_row);
        rows.push(im_row);
    }
    Ok(rows)
}

fn constraint_rows(
    claimed: &[ParamConstraint],
    params: &[String],
) -> Vec<Vec<GaussianRational>> {
    let idx = |p: &str| params.iter().position(|q| q == p);
    let ncols = 2 * params.len();
    let mut rows = Vec::new();
    let unit = |j: usize| {
        let mut r = vec![GaussianRational::zero(); ncols];
        r[j] = GaussianRational::one();
        r
    };
    for c in claimed {
        match c {
            ParamConstraint::Real(p) => {
                if let Some(j) = idx(p) {
                    rows.push(unit(2 * j + 1));
                }
            }
            ParamConstraint::Imaginary(p) => {
                if let Some(j) = idx(p) {
                    rows.push(unit(2 * j));
                }
            }
            ParamConstraint::Zero(p) => {
                if let Some(j) = idx(p) {
                    rows.push(unit(2 * j));
                    rows.push(unit(2 * j + 1));
                }
            }
            ParamConstraint::Equal(p, q) => {
                if let (Some(jp), Some(jq)) = (idx(p), idx(q)) {
                    for off in 0..2 {
                        let mut r = vec![GaussianRational::zero(); ncols];
                        r[2 * jp + off] = GaussianRational::one();
                        r[2 * jq + off] = GaussianRational::from_int(-1);
                        rows.push(r);
                    }
                }
            }
            ParamConstraint::Literal(_) => {}
        }
    }
    rows
}

/// Checks r^{*⊗*} = −r against a claimed parameter-constraint set:
/// sufficiency, necessity (equality of solution spaces) and whether the
/// equations exclude any nonzero r.
pub fn reality_check(
    r: &TensorElement,
    inv: Involution,
    claimed: &[ParamConstraint],
) -> Result<RealityResult, TensorError> {
    let diff = star2_complex(r, inv).add(r);
    let eqs: Vec<Scalar> = diff.terms.values().cloned().collect();
    let mut params: Vec<String> = BTreeSet::from_iter(
        r.terms
            .values()
            .flat_map(|c| c.params())
            .filter(|p| p != crate::scalar::SQRT2),
    )
    .into_iter()
    .collect();
    params.retain(|p| !p.ends_with("_conj"));
    let e_rows = realified_system(&eqs, &params)?;
    let c_rows = constraint_rows(claimed, &params);
    let has_literal = claimed.iter().any(|c| matches!(c, ParamConstraint::Literal(_)));
    let rank_e = linalg::rank(e_rows.clone());
    let rank_c = linalg::rank(c_rows.clone());
    let mut both = e_rows.clone();
    both.extend(c_rows.clone());
    let rank_both = linalg::rank(both);
    Ok(RealityResult {
        sufficient: rank_both == rank_c,
        necessary: rank_both == rank_e,
        excluded: rank_e == 2 * params.len() && !params.is_empty(),
        has_literal,
    })
}

/// Substitution-based reality verification for entries whose constraints are
/// nonlinear: substitutes the given rules (names may carry the `_conj`
/// suffix) into r^{*⊗*} + r and tests for exact zero.
pub fn reality_check_by_substitution(
    r: &TensorElement,
    inv: Involution,
    subs: &[(String, Scalar)],
) -> bool {
    let mut diff = star2_complex(r, inv).add(r);
    for (name, value) in subs {
        diff = diff.map_coeffs(|c| {
            c.substitute(name, value).expect("substitution must be invertible")
        });
    }
    diff.is_zero()
}

/// Doubled weight of a generator under the grading Cartan elements (two
/// components: the two chiral copies where applicable).
fn weight2(g: &Generator) -> (i64, i64) {
    use crate::algebra::Idx;
    match (g.family, g.idx) {
        (Family::L, Idx::One(m)) | (Family::Ll, Idx::One(m)) => (2 * m, 0),
        (Family::Lb, Idx::One(m)) | (Family::Llb, Idx::One(m)) => (0, 2 * m),
        (Family::T, Idx::One(m)) => (2 * m, 0),
        (Family::T2, Idx::Two(p, q)) => (2 * p - 1, 2 * q - 1),
        _ => (0, 0),
    }
}

/// Dimension of the space of ad-invariant elements of ⋀^rank(𝔤) supported on
/// the window, estimated by exact rank computation on the zero-weight sector
/// (any invariant must be annihilated by the Cartan grading). Equations from
/// acting generators with |index| ≤ 2 are projected on components inside the
/// enlarged window.
pub fn invariant_dimension(alg: AlgebraName, rank: usize, m_max: i64) -> usize {
    let basis = basis_in_window(alg, m_max);
    let basis: Vec<Generator> =
        basis.into_iter().filter(|g| !g.family.is_central()).collect();
    // canonical wedge tuples of zero total weight
    let mut tuples: Vec<Vec<Generator>> = Vec::new();
    fn collect(
        basis: &[Generator],
        start: usize,
        cur: &mut Vec<Generator>,
        rank: usize,
        out: &mut Vec<Vec<Generator>>,
    ) {
        if cur.len() == rank {
            let w = cur.iter().fold((0, 0), |acc, g| {
                let w = weight2(g);
                (acc.0 + w.0, acc.1 + w.1)
            });
            if w == (0, 0) {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..basis.len() {
            cur.push(basis[i]);
            collect(basis, i + 1, cur, rank, out);
            cur.pop();
        }
    }
    collect(&basis, 0, &mut Vec::new(), rank, &mut tuples);
    if tuples.is_empty() {
        return 0;
    }
    // unknown j = coefficient of wedge(tuples[j]); rows indexed by
    // (acting generator, canonical output tuple)
    let actors: Vec<Generator> = basis_in_window(alg, 2)
        .into_iter()
        .filter(|g| !g.family.is_central())
        .collect();
    let mut rows: BTreeMap<(usize, Vec<Generator>), Vec<GaussianRational>> = BTreeMap::new();
    for (ai, a) in actors.iter().enumerate() {
        let ea = AlgebraElement::gen(alg, *a);
        for (j, t) in tuples.iter().enumerate() {
            let w = match rank {
                2 => TensorElement::wedge2(
                    &AlgebraElement::gen(alg, t[0]),
                    &AlgebraElement::gen(alg, t[1]),
                ),
                3 => TensorElement::wedge3(
                    &AlgebraElement::gen(alg, t[0]),
                    &AlgebraElement::gen(alg, t[1]),
                    &AlgebraElement::gen(alg, t[2]),
                ),
                _ => panic!("rank must be 2 or 3"),
            };
            let out = ad_action(&ea, &w);
            for (legs, c) in &out.terms {
                if legs.iter().any(|g| g.indices().iter().any(|&k| k.abs() > m_max + 2)) {
                    continue;
                }
                // canonicalize: sorted legs with sign; drop repeated legs
                let mut sorted: Vec<(usize, &Generator)> = legs.iter().enumerate().collect();
                sorted.sort_by_key(|(_, g)| **g);
                if sorted.windows(2).any(|w| w[0].1 == w[1].1) {
                    continue;
                }
                let perm: Vec<usize> = sorted.iter().map(|(i, _)| *i).collect();
                let sign = permutation_sign(&perm);
                let key_legs: Vec<Generator> = sorted.iter().map(|(_, g)| **g).collect();
                let row = rows
                    .entry((ai, key_legs))
                    .or_insert_with(|| vec![GaussianRational::zero(); tuples.len()]);
                // coefficient of the canonical representative
                let mut add = GaussianRational::zero();
                for (mono, gc) in c.terms() {
                    assert!(mono.is_empty(), "parameter-free structure constants expected");
                    add = add.add(gc);
                }
                let add = if sign < 0 { add.neg() } else { add };
                row[j] = row[j].add(&add);
            }
        }
    }
    let mat: Vec<Vec<GaussianRational>> = rows.into_values().collect();
    let rk = linalg::rank(mat);
    tuples.len() - rk
}

fn permutation_sign(perm: &[usize]) -> i64 {
    let mut sign = 1i64;
    let mut seen = vec![false; perm.len()];
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use AlgebraName::*;

    fn gen1(alg: AlgebraName, f: Family, m: i64) -> AlgebraElement {
        AlgebraElement::gen(alg, Generator::one(f, m))
    }

    #[test]
    fn sl2_schouten_fixture() {
        // r = E+ ∧ E- gives 4 E+ ∧ E- ∧ H
        let ep = AlgebraElement::gen(SL2, Generator::plain(Family::Ep));
        let em = AlgebraElement::gen(SL2, Generator::plain(Family::Em));
        let h = AlgebraElement::gen(SL2, Generator::plain(Family::H));
        let r = TensorElement::wedge2(&ep, &em);
        let s = schouten(&r);
        let expected = TensorElement::wedge3(&ep, &em, &h).scale(&Scalar::int(4));
        assert_eq!(s, expected);
        let oracle = schouten_wedge_oracle(SL2, &[(Scalar::one(), ep, em)]);
        assert_eq!(s, oracle);
    }

    #[test]
    fn cobracket_central_example() {
        // r = chi l0 ∧ T_n in B3C, evaluated on l_{-n}
        let n = 2i64;
        let chi = Scalar::param("chi");
        let l0 = gen1(B3C, Family::Ll, 0);
        let tn = gen1(B3C, Family::T, n);
        let r = TensorElement::wedge2(&l0, &tn).scale(&chi);
        let x = gen1(B3C, Family::Ll, -n);
        let d = cobracket_eval(&Cobracket::Coboundary(r), &x).unwrap();
        // expected: chi(−n l_{−n}∧T_n − 2n l₀∧T₀ − (n³−n) l₀∧c'_L)
        let lmn = gen1(B3C, Family::Ll, -n);
        let t0 = gen1(B3C, Family::T, 0);
        let c = AlgebraElement::gen(B3C, Generator::central(Family::CPL));
        let expected = TensorElement::wedge2(&lmn, &tn)
            .scale(&chi.mul_int(-n))
            .add(&TensorElement::wedge2(&l0, &t0).scale(&chi.mul_int(-2 * n)))
            .add(&TensorElement::wedge2(&l0, &c).scale(&chi.mul_int(-(n * n * n - n))));
        assert_eq!(d, expected);
    }

    #[test]
    fn ad_action_leibniz_bracket() {
        // ad_[x,y] = ad_x ad_y − ad_y ad_x on a sample tensor
        let x = gen1(W2, Family::L, 1);
        let y = gen1(W2, Family::L, -1);
        let t = TensorElement::wedge2(&gen1(W2, Family::L, 2), &gen1(W2, Family::Lb, 0));
        let xy = bracket(&x, &y).unwrap();
        let lhs = ad_action(&xy, &t);
        let rhs = ad_action(&x, &ad_action(&y, &t)).sub(&ad_action(&y, &ad_action(&x, &t)));
        assert_eq!(lhs, rhs);
    }
}
