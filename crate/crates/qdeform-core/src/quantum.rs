//! The quantum Lie algebra toolkit: the deformed-generator isomorphism
//! induced by a twist, deformed quadratic Casimir (wave) operators, and star
//! coproducts expressing deformed Leibniz rules.

use std::collections::BTreeMap;

use crate::algebra::{bracket, AlgebraElement, AlgebraName, Family, Generator};
use crate::envelope::{
    antipode_f_env, build_twist, delta_f_env, EnvelopeElement, HopfError, PbwMono, TensorEnvelope,
    Trunc, Twist, TwistKind,
};
use crate::scalar::Scalar;

/// Iterated adjoint action of a product word on a Lie algebra element:
/// (g1 g2 ... gk) acts as ad_{g1} ∘ ad_{g2} ∘ ... ∘ ad_{gk}.
pub fn ad_word_alg(
    alg: AlgebraName,
    word: &[Generator],
    a: &AlgebraElement,
) -> Result<AlgebraElement, HopfError> {
    let mut acc = a.clone();
    for g in word.iter().rev() {
        if acc.is_zero() {
            return Ok(acc);
        }
        acc = bracket(&AlgebraElement::gen(alg, *g), &acc)?;
    }
    Ok(acc)
}

/// Iterated adjoint action of a product word on an enveloping-algebra
/// element, each letter acting by u ↦ gu - ug.
pub fn ad_word_env(
    alg: AlgebraName,
    word: &[Generator],
    u: &EnvelopeElement,
    trunc: &Trunc,
) -> Result<EnvelopeElement, HopfError> {
    let mut acc = u.clone();
    for g in word.iter().rev() {
        if acc.is_zero() {
            return Ok(acc);
        }
        let ge = EnvelopeElement::gen(alg, *g);
        acc = ge.mul(&acc, trunc)?.sub(&acc.mul(&ge, trunc)?);
    }
    Ok(acc)
}

fn mono_elem(alg: AlgebraName, word: &PbwMono) -> EnvelopeElement {
    let mut e = EnvelopeElement::zero(alg);
    e.add_term(word.clone(), Scalar::one());
    e
}

fn local_trunc(tw: &Twist, order: usize) -> Trunc {
    Trunc { params: tw.trunc.params.clone(), order: order as i64 }
}

/// The deformed-generator image a ↦ a^F built from the inverse-twist legs
/// acting adjointly: a^F = (f̄^α ▷ a) f̄_α, truncated at `order`. This is the
/// unique choice for which the twisted coproduct takes the form
/// Δ_F(a^F) = a^F ⊗ 1 + R̄^α ⊗ (R̄_α ▷ a)^F.
pub fn d_map(tw: &Twist, a: &AlgebraElement, order: usize) -> Result<EnvelopeElement, HopfError> {
    assert_eq!(a.algebra, tw.algebra);
    let trunc = local_trunc(tw, order);
    let mut out = EnvelopeElement::zero(tw.algebra);
    for (legs, c) in &tw.f_inv.terms {
        let c = trunc.cut(c);
        if c.is_zero() {
            continue;
        }
        let b = ad_word_alg(tw.algebra, &legs[0], a)?;
        if b.is_zero() {
            continue;
        }
        let term = EnvelopeElement::from_element(&b).mul(&mono_elem(tw.algebra, &legs[1]), &trunc)?;
        out = out.add(&term.scale(&c));
    }
    Ok(out.canon(&trunc))
}

/// Extension of [`d_map`] to enveloping-algebra arguments, with the
/// inverse-twist legs acting by the iterated commutator action.
pub fn d_map_env(
    tw: &Twist,
    u: &EnvelopeElement,
    order: usize,
) -> Result<EnvelopeElement, HopfError> {
    assert_eq!(u.algebra, tw.algebra);
    let trunc = local_trunc(tw, order);
    let mut out = EnvelopeElement::zero(tw.algebra);
    for (legs, c) in &tw.f_inv.terms {
        let c = trunc.cut(c);
        if c.is_zero() {
            continue;
        }
        let b = ad_word_env(tw.algebra, &legs[0], u, &trunc)?;
        if b.is_zero() {
            continue;
        }
        let term = b.mul(&mono_elem(tw.algebra, &legs[1]), &trunc)?;
        out = out.add(&term.scale(&c));
    }
    Ok(out.canon(&trunc))
}

/// The twisted (star) product on the enveloping algebra:
/// u ⋆ v = (f̄^α ▷ u)(f̄_α ▷ v) with both legs acting adjointly.
pub fn star_product(
    tw: &Twist,
    u: &EnvelopeElement,
    v: &EnvelopeElement,
    order: usize,
) -> Result<EnvelopeElement, HopfError> {
    assert_eq!(u.algebra, tw.algebra);
    assert_eq!(v.algebra, tw.algebra);
    let trunc = local_trunc(tw, order);
    let mut out = EnvelopeElement::zero(tw.algebra);
    for (legs, c) in &tw.f_inv.terms {
        let c = trunc.cut(c);
        if c.is_zero() {
            continue;
        }
        let lu = ad_word_env(tw.algebra, &legs[0], u, &trunc)?;
        if lu.is_zero() {
            continue;
        }
        let rv = ad_word_env(tw.algebra, &legs[1], v, &trunc)?;
        if rv.is_zero() {
            continue;
        }
        out = out.add(&lu.mul(&rv, &trunc)?.scale(&c));
    }
    Ok(out.canon(&trunc))
}

/// The quadratic Casimir of the spacetime subalgebra labelled by the
/// embedding index `n`, written in supertranslation generators.
pub fn casimir_factors(
    alg: AlgebraName,
    n: i64,
) -> Result<Vec<(Scalar, Vec<Generator>)>, HopfError> {
    use Family as F;
    if n == 0 {
        return Err(HopfError::BadParameter("embedding index must be nonzero".into()));
    }
    match alg {
        AlgebraName::B3 | AlgebraName::B3Plus | AlgebraName::B3Minus | AlgebraName::B3C => {
            let tn = Generator::one(F::T, n);
            let tmn = Generator::one(F::T, -n);
            let t0 = Generator::one(F::T, 0);
            Ok(vec![(Scalar::one(), vec![tn, tmn]), (Scalar::int(-1), vec![t0, t0])])
        }
        AlgebraName::B4 | AlgebraName::B4Minus | AlgebraName::B4C => {
            if n.rem_euclid(2) != 1 {
                return Err(HopfError::BadParameter(format!(
                    "B4 embedding needs odd n, got {n}"
                )));
            }
            let m = (1 - n) / 2;
            let spp = Generator::two(F::S, 1 - m, 1 - m);
            let smm = Generator::two(F::S, m, m);
            let spm = Generator::two(F::S, m, 1 - m);
            let apm = Generator::two(F::A, m, 1 - m);
            Ok(vec![
                (Scalar::one(), vec![spp, smm]),
                (Scalar::int(-1), vec![spm, spm]),
                (Scalar::int(-1), vec![apm, apm]),
            ])
        }
        other => Err(HopfError::BadParameter(format!(
            "no quadratic spacetime Casimir registered on {}",
            other.as_str()
        ))),
    }
}

/// The undeformed quadratic Casimir as an enveloping-algebra element.
pub fn casimir_element(alg: AlgebraName, n: i64) -> Result<EnvelopeElement, HopfError> {
    let mut out = EnvelopeElement::zero(alg);
    for (c, word) in casimir_factors(alg, n)? {
        let mut w = word.clone();
        w.sort();
        out.add_term(w, c);
    }
    Ok(out)
}

/// The deformed wave operator: the deformed-generator image of the quadratic
/// Casimir of embedding `n`, with the image extended multiplicatively.
pub fn deformed_casimir(tw: &Twist, n: i64, order: usize) -> Result<EnvelopeElement, HopfError> {
    let trunc = local_trunc(tw, order);
    let mut out = EnvelopeElement::zero(tw.algebra);
    for (c, word) in casimir_factors(tw.algebra, n)? {
        let mut acc = EnvelopeElement::one(tw.algebra);
        for g in &word {
            let img = d_map(tw, &AlgebraElement::gen(tw.algebra, *g), order)?;
            acc = acc.mul(&img, &trunc)?;
        }
        out = out.add(&acc.scale(&c));
    }
    Ok(out.canon(&trunc))
}

/// A star coproduct Δ⋆(a^F) = a^F ⊗ 1 + Σ u_g ⊗ g^F: the tail's right legs
/// are linear in deformed generators by construction.
#[derive(Debug, Clone)]
pub struct StarCoproduct {
    pub algebra: AlgebraName,
    /// a^F, pairing with ⊗1.
    pub lead: EnvelopeElement,
    /// Map g ↦ u_g collecting the terms u_g ⊗ g^F.
    pub tail: BTreeMap<Generator, EnvelopeElement>,
}

impl StarCoproduct {
    /// Expands the deformed-generator form into the plain tensor square of
    /// the enveloping algebra.
    pub fn expanded(&self, tw: &Twist, order: usize) -> Result<TensorEnvelope, HopfError> {
        let trunc = local_trunc(tw, order);
        let one = EnvelopeElement::one(self.algebra);
        let mut out = TensorEnvelope::outer(&[&self.lead, &one]);
        for (g, u) in &self.tail {
            let img = d_map(tw, &AlgebraElement::gen(self.algebra, *g), order)?;
            out = out.add(&TensorEnvelope::outer(&[u, &img]));
        }
        Ok(out.canon(&trunc))
    }
}

/// The coproduct of a deformed generator, organised in the deformed basis:
/// Δ⋆(a^F) = a^F ⊗ 1 + R̄^α ⊗ (R̄_α ▷ a)^F with R⁻¹ = F F₂₁⁻¹.
pub fn star_coproduct(
    tw: &Twist,
    a: &AlgebraElement,
    order: usize,
) -> Result<StarCoproduct, HopfError> {
    assert_eq!(a.algebra, tw.algebra);
    let trunc = local_trunc(tw, order);
    let r_inv = tw.f.mul(&tw.f_inv.swap12(), &trunc)?;
    let mut tail: BTreeMap<Generator, EnvelopeElement> = BTreeMap::new();
    for (legs, c) in &r_inv.terms {
        let c = trunc.cut(c);
        if c.is_zero() {
            continue;
        }
        let b = ad_word_alg(tw.algebra, &legs[1], a)?;
        if b.is_zero() {
            continue;
        }
        let left = mono_elem(tw.algebra, &legs[0]);
        for (g, bc) in &b.terms {
            let entry = tail.entry(*g).or_insert_with(|| EnvelopeElement::zero(tw.algebra));
            *entry = entry.add(&left.scale(&c.mul(bc)));
        }
    }
    for u in tail.values_mut() {
        *u = u.canon(&trunc);
    }
    tail.retain(|_, u| !u.is_zero());
    Ok(StarCoproduct { algebra: tw.algebra, lead: d_map(tw, a, order)?, tail })
}

/// The deformed adjoint action of a generator on an enveloping element:
/// [a^F, u]⋆ = Σ a^F_(1) u S_F(a^F_(2)) with the twisted coproduct and
/// antipode. Vanishes exactly when u is star-central under a.
pub fn quantum_commutator(
    tw: &Twist,
    a: &AlgebraElement,
    u: &EnvelopeElement,
    order: usize,
) -> Result<EnvelopeElement, HopfError> {
    let trunc = local_trunc(tw, order);
    let af = d_map(tw, a, order)?;
    let delta = delta_f_env(tw, &af)?;
    let mut out = EnvelopeElement::zero(tw.algebra);
    for (legs, c) in &delta.terms {
        let c = trunc.cut(c);
        if c.is_zero() {
            continue;
        }
        let left = mono_elem(tw.algebra, &legs[0]);
        let s_right = antipode_f_env(tw, &mono_elem(tw.algebra, &legs[1]))?;
        out = out.add(&left.mul(u, &trunc)?.mul(&s_right, &trunc)?.scale(&c));
    }
    Ok(out.canon(&trunc))
}

/// The mixed-embedding abelian twist on B4 pairing the diagonal rotation
/// kbar_0 with supertranslations of two embeddings (labels m and m'):
/// F = exp(-kbar_0 (x) (chi S_{1-m,1-m} + chip S_{1-m',1-m'})).
pub fn mixed_twist(m: i64, mp: i64, order: usize) -> Result<Twist, HopfError> {
    use Family as F;
    let alg = AlgebraName::B4;
    let left = AlgebraElement::term(alg, Generator::one(F::Kb, 0), Scalar::int(-1));
    let mut right = AlgebraElement::term(
        alg,
        Generator::two(F::S, 1 - m, 1 - m),
        Scalar::param("chi"),
    );
    right.add_term(Generator::two(F::S, 1 - mp, 1 - mp), Scalar::param("chip"));
    let mut tw = build_twist(alg, TwistKind::Abelian { left, right }, order)?;
    tw.name = "mixed-embedding".into();
    Ok(tw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{binom_pow, exp_elem, qybe_holds};
    use crate::scalar::Scalar;

    fn tg(m: i64) -> Generator {
        Generator::one(Family::T, m)
    }

    fn lg(m: i64) -> Generator {
        Generator::one(Family::Ll, m)
    }

    fn elem(alg: AlgebraName, g: Generator) -> AlgebraElement {
        AlgebraElement::gen(alg, g)
    }

    fn env(alg: AlgebraName, g: Generator) -> EnvelopeElement {
        EnvelopeElement::gen(alg, g)
    }

    fn p(name: &str) -> Scalar {
        Scalar::param(name)
    }

    #[test]
    fn jordanian_d_map_is_a_binomial_tower() {
        let alg = AlgebraName::B3;
        for n in [1i64, 2] {
            let tw = build_twist(alg, TwistKind::Jordanian { n }, 4).unwrap();
            let trunc = Trunc::new(&["chi"], 4);
            for m in -3..=3i64 {
                let got = d_map(&tw, &elem(alg, tg(m)), 4).unwrap();
                let u = EnvelopeElement::from_element(&AlgebraElement::term(
                    alg,
                    tg(n),
                    p("chi"),
                ));
                let pi = binom_pow(&u, -m, n, &trunc).unwrap();
                let want = env(alg, tg(m)).mul(&pi, &trunc).unwrap().canon(&trunc);
                assert_eq!(got, want, "D_J(T_{m}) with n={n}");
            }
        }
    }

    #[test]
    fn four_dimensional_jordanian_d_map_is_a_binomial_tower() {
        let alg = AlgebraName::B4;
        let tw = build_twist(alg, TwistKind::Jordanian { n: 1 }, 3).unwrap();
        let trunc = Trunc::new(&["chi"], 3);
        for (pq, qq) in [(0i64, 0i64), (0, 1), (1, 1), (-1, 2)] {
            let s = Generator::two(Family::S, pq, qq);
            let got = d_map(&tw, &elem(alg, s), 3).unwrap();
            let u = EnvelopeElement::from_element(&AlgebraElement::term(
                alg,
                Generator::two(Family::S, 1, 1),
                p("chi"),
            ));
            let pi = binom_pow(&u, 1 - pq - qq, 1, &trunc).unwrap();
            let want = env(alg, s).mul(&pi, &trunc).unwrap().canon(&trunc);
            assert_eq!(got, want, "D_J(S_{pq}{qq})");
        }
    }

    #[test]
    fn d_map_at_order_zero_is_the_identity() {
        let alg = AlgebraName::B3;
        let tw = build_twist(alg, TwistKind::Jordanian { n: 1 }, 3).unwrap();
        for g in [tg(-2), tg(0), lg(1)] {
            let got = d_map(&tw, &elem(alg, g), 0).unwrap();
            assert_eq!(got, env(alg, g));
        }
    }

    #[test]
    fn abelian_d_map_is_an_exponential_of_the_center_of_mass_charge() {
        let alg = AlgebraName::B3;
        let tw = build_twist(alg, TwistKind::abelian_default(alg).unwrap(), 4).unwrap();
        let trunc = Trunc::new(&["eta"], 4);
        for m in -3..=3i64 {
            let got = d_map(&tw, &elem(alg, tg(m)), 4).unwrap();
            let arg = EnvelopeElement::from_element(&AlgebraElement::term(
                alg,
                tg(0),
                p("eta").mul_int(m),
            ));
            let want = env(alg, tg(m))
                .mul(&exp_elem(&arg, &trunc).unwrap(), &trunc)
                .unwrap()
                .canon(&trunc);
            assert_eq!(got, want, "D_A(T_{m})");
        }
    }

    #[test]
    fn extended_jordanian_d_map_first_order() {
        // First order of D_eJ on supertranslations:
        // D(T_m) = T_m - (chi/n')((n'-m) T_{n'+m} T_0 + m T_m T_{n'}).
        let alg = AlgebraName::B3;
        let np = 2i64;
        let tw = build_twist(alg, TwistKind::ExtendedJordanian { n: np }, 1).unwrap();
        let trunc = Trunc::new(&["chi"], 1);
        for m in -2..=2i64 {
            let got = d_map(&tw, &elem(alg, tg(m)), 1).unwrap();
            let mut want = env(alg, tg(m));
            let c = p("chi").mul(&Scalar::ratio(1, np));
            let mut w1 = vec![tg(0), tg(np + m)];
            w1.sort();
            want.add_term(w1, c.mul_int(m - np));
            let mut w2 = vec![tg(m), tg(np)];
            w2.sort();
            want.add_term(w2, c.mul_int(-m));
            assert_eq!(got, want.canon(&trunc), "D_eJ(T_{m}) at first order");
        }
    }

    #[test]
    fn d_map_intertwines_the_star_product_and_the_ordinary_product() {
        let alg = AlgebraName::B3;
        let order = 3;
        let tw = build_twist(alg, TwistKind::Jordanian { n: 1 }, order).unwrap();
        let trunc = Trunc::new(&["chi"], order);
        let gens = crate::algebra::basis_in_window(alg, 2);
        for a in &gens {
            for b in &gens {
                let u = env(alg, *a);
                let v = env(alg, *b);
                let lhs = d_map_env(&tw, &star_product(&tw, &u, &v, order).unwrap(), order)
                    .unwrap();
                let rhs = d_map_env(&tw, &u, order)
                    .unwrap()
                    .mul(&d_map_env(&tw, &v, order).unwrap(), &trunc)
                    .unwrap()
                    .canon(&trunc);
                assert_eq!(lhs, rhs, "D(u*v) = D(u)D(v) for {a}, {b}");
            }
        }
    }

    #[test]
    fn wave_operator_is_undeformed_for_abelian_and_jordanian_twists() {
        let alg = AlgebraName::B3;
        let order = 3;
        let ab = build_twist(alg, TwistKind::abelian_default(alg).unwrap(), order).unwrap();
        for n in [1i64, 2] {
            let got = deformed_casimir(&ab, n, order).unwrap();
            assert_eq!(got, casimir_element(alg, n).unwrap(), "abelian, n={n}");
        }
        for (np, n) in [(1i64, 1i64), (1, 2), (2, 1)] {
            let tw = build_twist(alg, TwistKind::Jordanian { n: np }, order).unwrap();
            let got = deformed_casimir(&tw, n, order).unwrap();
            assert_eq!(got, casimir_element(alg, n).unwrap(), "jordanian n'={np}, n={n}");
        }
        let b4 = build_twist(AlgebraName::B4, TwistKind::Jordanian { n: 1 }, 2).unwrap();
        for n in [1i64, 3] {
            let got = deformed_casimir(&b4, n, 2).unwrap();
            assert_eq!(got, casimir_element(AlgebraName::B4, n).unwrap(), "B4 jordanian, n={n}");
        }
    }

    #[test]
    fn extended_jordanian_deforms_the_wave_operator_at_first_order() {
        // First-order deformation of the wave operator under the extended
        // Jordanian twist with mismatched embeddings (n' != n):
        // box - (chi/n')((n'-n) T_{n+n'} T_0 T_{-n} + (n'+n) T_{n'-n} T_0 T_n)
        //     + 2 chi T_{n'} T_0^2.
        let alg = AlgebraName::B3;
        let (np, n) = (2i64, 1i64);
        let tw = build_twist(alg, TwistKind::ExtendedJordanian { n: np }, 1).unwrap();
        let trunc = Trunc::new(&["chi"], 1);
        let got = deformed_casimir(&tw, n, 1).unwrap();
        let mut want = casimir_element(alg, n).unwrap();
        let c = p("chi").mul(&Scalar::ratio(1, np));
        let mut w1 = vec![tg(n + np), tg(0), tg(-n)];
        w1.sort();
        want.add_term(w1, c.mul_int(n - np));
        let mut w2 = vec![tg(np - n), tg(0), tg(n)];
        w2.sort();
        want.add_term(w2, c.mul_int(-(np + n)));
        let mut w3 = vec![tg(np), tg(0), tg(0)];
        w3.sort();
        want.add_term(w3, c.mul_int(2 * np));
        assert_eq!(got, want.canon(&trunc));
        // sanity: matching embeddings leave the wave operator untouched
        let same = build_twist(alg, TwistKind::ExtendedJordanian { n: 1 }, 1).unwrap();
        assert_eq!(
            deformed_casimir(&same, 1, 1).unwrap(),
            casimir_element(alg, 1).unwrap()
        );
    }

    #[test]
    fn star_coproduct_agrees_with_the_twisted_coproduct_of_the_deformed_generator() {
        let order = 3;
        let cases: Vec<(AlgebraName, TwistKind)> = vec![
            (AlgebraName::B3, TwistKind::abelian_default(AlgebraName::B3).unwrap()),
            (AlgebraName::B3, TwistKind::Jordanian { n: 1 }),
            (AlgebraName::B3Minus, TwistKind::ExtendedJordanian { n: 1 }),
            (AlgebraName::B4, TwistKind::Jordanian { n: 1 }),
        ];
        for (alg, kind) in cases {
            let tw = build_twist(alg, kind, order).unwrap();
            let trunc = Trunc { params: tw.trunc.params.clone(), order: order as i64 };
            for g in crate::algebra::basis_in_window(alg, 1) {
                let a = elem(alg, g);
                let star = star_coproduct(&tw, &a, order).unwrap();
                let direct = delta_f_env(&tw, &d_map(&tw, &a, order).unwrap())
                    .unwrap()
                    .canon(&trunc);
                assert_eq!(
                    star.expanded(&tw, order).unwrap(),
                    direct,
                    "{}: {}",
                    tw.name,
                    g
                );
            }
        }
    }

    #[test]
    fn jordanian_star_coproduct_left_legs_are_binomial_towers() {
        // 3D: Delta*(T_m^F) = T_m^F (x) 1 + Pi^(-m/n) (x) T_m^F.
        let alg = AlgebraName::B3;
        let n = 2i64;
        let order = 4;
        let tw = build_twist(alg, TwistKind::Jordanian { n }, order).unwrap();
        let trunc = Trunc::new(&["chi"], order);
        let u = EnvelopeElement::from_element(&AlgebraElement::term(alg, tg(n), p("chi")));
        for m in -3..=3i64 {
            let star = star_coproduct(&tw, &elem(alg, tg(m)), order).unwrap();
            let pi = binom_pow(&u, -m, n, &trunc).unwrap().canon(&trunc);
            assert_eq!(star.tail.len(), 1);
            assert_eq!(star.tail.get(&tg(m)).unwrap(), &pi, "left leg of T_{m}");
        }
    }

    #[test]
    fn four_dimensional_momenta_star_coproducts() {
        // Jordanian n'=n=1 (m=0): the light-cone momentum legs come out as
        // Pi^{-1}, Pi, 1, 1 on S_11, S_00, S_01, A_01 respectively.
        let alg = AlgebraName::B4;
        let order = 4;
        let tw = build_twist(alg, TwistKind::Jordanian { n: 1 }, order).unwrap();
        let trunc = Trunc::new(&["chi"], order);
        let u = EnvelopeElement::from_element(&AlgebraElement::term(
            alg,
            Generator::two(Family::S, 1, 1),
            p("chi"),
        ));
        let cases = [
            (Generator::two(Family::S, 1, 1), -1i64),
            (Generator::two(Family::S, 0, 0), 1),
            (Generator::two(Family::S, 0, 1), 0),
            (Generator::two(Family::A, 0, 1), 0),
        ];
        for (g, e) in cases {
            let star = star_coproduct(&tw, &elem(alg, g), order).unwrap();
            let pi = binom_pow(&u, e, 1, &trunc).unwrap().canon(&trunc);
            assert_eq!(star.tail.len(), 1, "tail of {g}");
            assert_eq!(star.tail.get(&g).unwrap(), &pi, "left leg of {g}");
        }
    }

    #[test]
    fn mixed_embedding_twist_gives_trigonometric_star_coproducts() {
        let order = 4;
        let tw = mixed_twist(0, -1, order).unwrap();
        assert!(qybe_holds(&tw).unwrap());
        let alg = AlgebraName::B4;
        let trunc = Trunc::new(&["chi", "chip"], order);
        // u = chi S_11 + chip S_22
        let mut uel = AlgebraElement::term(alg, Generator::two(Family::S, 1, 1), p("chi"));
        uel.add_term(Generator::two(Family::S, 2, 2), p("chip"));
        let u = EnvelopeElement::from_element(&uel);
        let cos = |c: i64| -> EnvelopeElement {
            let mut acc = EnvelopeElement::one(alg);
            let mut sign = -1i64;
            for k in 1..=2usize {
                let pw = u.pow(2 * k, &trunc).unwrap();
                let mut coeff = Scalar::ratio(sign, 1);
                coeff = coeff.mul_int(c.pow(2 * k as u32));
                let fact: i64 = (1..=2 * k as i64).product();
                acc = acc.add(&pw.scale(&coeff.mul(&Scalar::ratio(1, fact))));
                sign = -sign;
            }
            acc.canon(&trunc)
        };
        let sin = |c: i64| -> EnvelopeElement {
            let mut acc = EnvelopeElement::zero(alg);
            let mut sign = 1i64;
            for k in 0..=1usize {
                let pw = u.pow(2 * k + 1, &trunc).unwrap();
                let mut coeff = Scalar::ratio(sign, 1);
                coeff = coeff.mul_int(c.pow(2 * k as u32 + 1));
                let fact: i64 = (1..=(2 * k as i64 + 1)).product();
                acc = acc.add(&pw.scale(&coeff.mul(&Scalar::ratio(1, fact))));
                sign = -sign;
            }
            acc.canon(&trunc)
        };
        // off-diagonal supertranslations rotate: for S_pq the left legs are
        // cos((q-p)u) on S_pq^F and sin((q-p)u) on A_pq^F
        let s01 = Generator::two(Family::S, 0, 1);
        let a01 = Generator::two(Family::A, 0, 1);
        let star = star_coproduct(&tw, &elem(alg, s01), order).unwrap();
        assert_eq!(star.tail.get(&s01).unwrap(), &cos(1));
        assert_eq!(star.tail.get(&a01).unwrap(), &sin(1));
        let star_a = star_coproduct(&tw, &elem(alg, a01), order).unwrap();
        assert_eq!(star_a.tail.get(&a01).unwrap(), &cos(1));
        assert_eq!(star_a.tail.get(&s01).unwrap(), &sin(1).neg());
        // light-cone momenta of either embedding stay primitive
        for g in [Generator::two(Family::S, 1, 1), Generator::two(Family::S, 0, 0)] {
            let star = star_coproduct(&tw, &elem(alg, g), order).unwrap();
            assert_eq!(star.tail.len(), 1);
            assert_eq!(star.tail.get(&g).unwrap(), &EnvelopeElement::one(alg));
        }
    }

    #[test]
    fn wave_operator_is_star_central_in_the_quantum_lie_algebra() {
        // Deep series manipulations recurse past the default test stack.
        std::thread::Builder::new()
            .stack_size(64 * 1024 * 1024)
            .spawn(|| {
                let alg = AlgebraName::B3;
                let order = 3;
                let tw = build_twist(alg, TwistKind::Jordanian { n: 1 }, order).unwrap();
                let boxf = deformed_casimir(&tw, 1, order).unwrap();
                let emb = crate::algebra::embedding(alg, 1).unwrap();
                for (fin, img) in &emb.map {
                    let comm = quantum_commutator(&tw, img, &boxf, order).unwrap();
                    assert!(comm.is_zero(), "[{fin}^F, box^F]* != 0: {comm:?}");
                }
            })
            .unwrap()
            .join()
            .unwrap();
    }

    #[test]
    fn four_dimensional_extended_jordanian_deforms_the_wave_operator() {
        // Independent check of the first-order 4D deformed wave operator for
        // mismatched embeddings: the composed machine result is compared with
        // the product of per-generator first-order closed forms
        //   D(S_pq) = S_pq (1 + chi (1-p-q)/n' S_{1-m',1-m'})
        //             + chi_t ((lam-p) S_{p+n',q} + (lam-q) S_{p,q+n'}) S_{1-m',m'}
        //             + chi_t ((lam-p) A_{p+n',q} - (lam-q) A_{p,q+n'}) A_{1-m',m'}
        //   D(A_pq) = A_pq (1 + chi (1-p-q)/n' S_{1-m',1-m'})
        //             + chi_t ((lam-p) A_{p+n',q} + (lam-q) A_{p,q+n'}) S_{1-m',m'}
        //             + chi_t (-(lam-p) S_{p+n',q} + (lam-q) S_{p,q+n'}) A_{1-m',m'}
        // with lam = (n'+1)/2 and chi_t = -chi/n'.
        let alg = AlgebraName::B4;
        let np = 3i64;
        let n = 1i64;
        let mp = (1 - np) / 2; // m' for the twist embedding
        let lam = (np + 1) / 2;
        let tw = build_twist(alg, TwistKind::ExtendedJordanian { n: np }, 1).unwrap();
        let trunc = Trunc::new(&["chi"], 1);
        // canonically ordered S/A monomial factors (A_qp = -A_pq, A_pp = 0)
        let s_at = |p: i64, q: i64| -> (Generator, i64) {
            (Generator::two(Family::S, p.min(q), p.max(q)), 1)
        };
        let a_at = |p: i64, q: i64| -> Option<(Generator, i64)> {
            use std::cmp::Ordering::*;
            match p.cmp(&q) {
                Less => Some((Generator::two(Family::A, p, q), 1)),
                Greater => Some((Generator::two(Family::A, q, p), -1)),
                Equal => None,
            }
        };
        let chi_t = p("chi").mul(&Scalar::ratio(-1, np));
        let d_transcribed = |g: Generator| -> EnvelopeElement {
            let (fam, pq, qq) = match g.idx {
                crate::algebra::Idx::Two(a, b) => (g.family, a, b),
                _ => unreachable!(),
            };
            let mut out = env(alg, g);
            // diagonal tower factor
            let diag = p("chi").mul(&Scalar::ratio(1 - pq - qq, np));
            let mut w = vec![g, Generator::two(Family::S, 1 - mp, 1 - mp)];
            w.sort();
            out.add_term(w, diag);
            let mut add = |factor: Option<(Generator, i64)>, leg: Option<(Generator, i64)>, k: i64| {
                if let (Some((gf, sf)), Some((gl, sl))) = (factor, leg) {
                    let mut w = vec![gf, gl];
                    w.sort();
                    out.add_term(w, chi_t.mul_int(k * sf * sl));
                }
            };
            let s_leg = Some(s_at(1 - mp, mp));
            let a_leg = a_at(1 - mp, mp);
            match fam {
                Family::S => {
                    add(Some(s_at(pq + np, qq)), s_leg, lam - pq);
                    add(Some(s_at(pq, qq + np)), s_leg, lam - qq);
                    add(a_at(pq + np, qq), a_leg, lam - pq);
                    add(a_at(pq, qq + np), a_leg, -(lam - qq));
                }
                Family::A => {
                    add(a_at(pq + np, qq), s_leg, lam - pq);
                    add(a_at(pq, qq + np), s_leg, lam - qq);
                    add(Some(s_at(pq + np, qq)), a_leg, -(lam - pq));
                    add(Some(s_at(pq, qq + np)), a_leg, lam - qq);
                }
                _ => unreachable!(),
            }
            out.canon(&trunc)
        };
        // per-generator agreement
        for (_, word) in casimir_factors(alg, n).unwrap() {
            for g in word {
                let got = d_map(&tw, &elem(alg, g), 1).unwrap();
                assert_eq!(got, d_transcribed(g), "first-order D({g})");
            }
        }
        // composed wave operator agreement
        let mut want = EnvelopeElement::zero(alg);
        for (c, word) in casimir_factors(alg, n).unwrap() {
            let mut acc = EnvelopeElement::one(alg);
            for g in &word {
                acc = acc.mul(&d_transcribed(*g), &trunc).unwrap();
            }
            want = want.add(&acc.scale(&c));
        }
        let got = deformed_casimir(&tw, n, 1).unwrap();
        assert_eq!(got, want.canon(&trunc));
        // matching embeddings are undeformed
        let same = build_twist(alg, TwistKind::ExtendedJordanian { n: 1 }, 1).unwrap();
        assert_eq!(
            deformed_casimir(&same, 1, 1).unwrap(),
            casimir_element(alg, 1).unwrap()
        );
    }
}
