//! Flat-space limit s → 0 of r-matrices over the Witt double: basis change
//! into the 3D BMS algebra, parameter rescaling plans and divergence
//! detection. Each named case in the table carries its own calibrated plan
//! since the limit is plan dependent.

use crate::algebra::{AlgebraElement, AlgebraName, Family, Generator, Idx};
use crate::catalog::{a1_wedges, a2_wedges, wedges_to_tensor, Wedges};
use crate::envelope::{EnvelopeElement, TensorEnvelope, Trunc};
use crate::scalar::Scalar;
use crate::tensor::TensorElement;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ContractionError {
    #[error("divergent limit: pole of degree {degree} in s survives")]
    DivergentLimit { degree: i64 },
    #[error(
        "divergent twist limit: pole of degree {degree} in s at deformation order {order}"
    )]
    TwistDivergentLimit { order: i64, degree: i64 },
    #[error("expected a tensor over W2, got {0}")]
    WrongAlgebra(String),
    #[error("substitution failed for parameter {0}")]
    BadSubstitution(String),
}

/// Parameter substitutions (old parameter name to an expression in the
/// hatted parameters and s) plus the optional index flip on the barred copy.
#[derive(Debug, Clone, Default)]
pub struct RescalingPlan {
    pub substitutions: Vec<(String, Scalar)>,
    /// Apply Lb_m -> -Lb_{-m} before the basis change.
    pub flip_bar: bool,
}

impl RescalingPlan {
    pub fn new(subs: &[(&str, Scalar)]) -> Self {
        RescalingPlan {
            substitutions: subs.iter().map(|(n, v)| (n.to_string(), v.clone())).collect(),
            flip_bar: false,
        }
    }
}

/// c * hat * s^k, the building block of every rescaling.
fn resc(c: i64, hat: &str, k: i64) -> Scalar {
    Scalar::param(hat).mul_int(c).mul(&Scalar::param_pow("s", k))
}

/// Basis change on a single Witt-double generator: L_m = (l_m + T_m/s)/2,
/// Lb_m = (l_m - T_m/s)/2, optionally after Lb_m -> -Lb_{-m}.
fn iso_gen(g: &Generator, flip_bar: bool) -> AlgebraElement {
    let b3 = AlgebraName::B3;
    let (bar, m) = match (g.family, g.idx) {
        (Family::L, Idx::One(m)) => (false, m),
        (Family::Lb, Idx::One(m)) => (true, m),
        _ => panic!("contraction source must live on the Witt double"),
    };
    let (sign, m) = if bar && flip_bar { (-1, -m) } else { (1, m) };
    let half = Scalar::ratio(sign, 2);
    let t_half = half.mul(&Scalar::param_pow("s", -1)).mul_int(if bar { -1 } else { 1 });
    let mut out = AlgebraElement::term(b3, Generator::one(Family::Ll, m), half);
    out.add_term(Generator::one(Family::T, m), t_half);
    out
}

/// Rewrites r in the l/T basis, applies the substitutions and takes s -> 0.
pub fn contract_r(
    r: &TensorElement,
    plan: &RescalingPlan,
) -> Result<TensorElement, ContractionError> {
    if r.algebra != AlgebraName::W2 {
        return Err(ContractionError::WrongAlgebra(r.algebra.as_str().to_string()));
    }
    let mapped = r.apply_linear(AlgebraName::B3, |g| iso_gen(g, plan.flip_bar));
    let mut worst_pole = 0i64;
    let mut out = TensorElement::zero(AlgebraName::B3, r.rank);
    for (legs, c) in &mapped.terms {
        let mut c2 = c.clone();
        for (name, val) in &plan.substitutions {
            c2 = c2
                .substitute(name, val)
                .map_err(|_| ContractionError::BadSubstitution(name.clone()))?;
        }
        for (&d, part) in &c2.by_powers_of("s") {
            if part.is_zero() {
                continue;
            }
            if d < 0 {
                worst_pole = worst_pole.max(-d);
            } else if d == 0 {
                out.add_term(legs.clone(), part.clone());
            }
        }
    }
    if worst_pole > 0 {
        return Err(ContractionError::DivergentLimit { degree: worst_pole });
    }
    Ok(out)
}

/// Basis change of a whole PBW leg word into the envelope of the curved
/// algebra, where the [T, T] = s^2-terms of the limit live.
fn map_leg(word: &[Generator], flip_bar: bool, trunc: &Trunc) -> EnvelopeElement {
    let ads = AlgebraName::AdS3;
    let mut e = EnvelopeElement::one(ads);
    for g in word {
        let mut x = iso_gen(g, flip_bar);
        x.algebra = ads;
        e = e
            .mul(&EnvelopeElement::from_element(&x), trunc)
            .expect("the curved algebra has no index window");
    }
    e
}

/// Contracts a materialized twist over the Witt double: rewrites every PBW
/// leg in the curved l/T basis, applies the plan and takes s -> 0. On
/// divergence the lowest offending deformation order and its worst pole
/// degree are reported.
pub fn contract_twist(
    f: &TensorEnvelope,
    plan: &RescalingPlan,
    trunc: &Trunc,
) -> Result<TensorEnvelope, ContractionError> {
    if f.algebra != AlgebraName::W2 {
        return Err(ContractionError::WrongAlgebra(f.algebra.as_str().to_string()));
    }
    assert_eq!(f.rank, 2);
    // Poles can cancel between distinct source terms that land on the same
    // curved monomial, so everything is accumulated per (monomial,
    // deformation order) before the s -> 0 limit is inspected. Substitutions
    // preserve the deformation degree, so pieces of different degree never
    // cancel against each other.
    type Key = (Vec<Vec<Generator>>, i64);
    let mut acc: BTreeMap<Key, Scalar> = BTreeMap::new();
    for (legs, c) in &f.terms {
        let left = map_leg(&legs[0], plan.flip_bar, trunc);
        let right = map_leg(&legs[1], plan.flip_bar, trunc);
        let mut by_deg: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (m, q) in c.terms() {
            let d = Scalar::mono_total_degree(m, &trunc.params);
            by_deg
                .entry(d)
                .or_insert_with(Scalar::zero)
                .add_term(m.clone(), q.clone());
        }
        for (ml, kl) in &left.terms {
            for (mr, kr) in &right.terms {
                let base = kl.mul(kr);
                for (deg, part) in &by_deg {
                    let mut c2 = part.mul(&base);
                    for (name, val) in &plan.substitutions {
                        c2 = c2
                            .substitute(name, val)
                            .map_err(|_| ContractionError::BadSubstitution(name.clone()))?;
                    }
                    if c2.is_zero() {
                        continue;
                    }
                    let entry = acc
                        .entry((vec![ml.clone(), mr.clone()], *deg))
                        .or_insert_with(Scalar::zero);
                    *entry = entry.add(&c2);
                }
            }
        }
    }
    let mut out = TensorEnvelope::zero(AlgebraName::B3, 2);
    // (deformation order, pole degree) of the worst divergence
    let mut worst: Option<(i64, i64)> = None;
    for ((legs, deg), c) in &acc {
        for (&d, piece) in &c.by_powers_of("s") {
            if piece.is_zero() {
                continue;
            }
            if d < 0 {
                worst = Some(match worst {
                    None => (*deg, -d),
                    Some((o, _)) if *deg < o => (*deg, -d),
                    Some((o, p)) if *deg == o => (o, p.max(-d)),
                    Some(w) => w,
                });
            } else if d == 0 {
                out.add_term(legs.clone(), piece.clone());
            }
        }
    }
    if let Some((order, degree)) = worst {
        return Err(ContractionError::TwistDivergentLimit { order, degree });
    }
    Ok(out)
}

/// One row of the contraction table: a source r-matrix over the Witt double,
/// the plan that makes its limit finite and the resulting flat r-matrix.
#[derive(Debug, Clone)]
pub struct ContractionCase {
    pub id: String,
    pub source: Wedges,
    pub plan: RescalingPlan,
    pub expected: Wedges,
    pub note: Option<String>,
}

impl ContractionCase {
    pub fn source_tensor(&self) -> TensorElement {
        wedges_to_tensor(AlgebraName::W2, &self.source)
    }

    pub fn expected_tensor(&self) -> TensorElement {
        wedges_to_tensor(AlgebraName::B3, &self.expected)
    }
}

fn p(name: &str) -> Scalar {
    Scalar::param(name)
}

fn one() -> Scalar {
    Scalar::one()
}

fn wel(parts: &[(Family, i64, Scalar)]) -> AlgebraElement {
    let mut e = AlgebraElement::zero(AlgebraName::W2);
    for (f, m, c) in parts {
        e.add_term(Generator::one(*f, *m), c.clone());
    }
    e
}

fn bel(parts: &[(Family, i64, Scalar)]) -> AlgebraElement {
    let mut e = AlgebraElement::zero(AlgebraName::B3);
    for (f, m, c) in parts {
        e.add_term(Generator::one(*f, *m), c.clone());
    }
    e
}

/// The full table of named contraction limits of the Witt-double classes.
pub fn contraction_table() -> Vec<ContractionCase> {
    use Family::{L, Lb, Ll, T};
    let w2 = AlgebraName::W2;
    let g = |m| wel(&[(L, m, one())]);
    let gb = |m| wel(&[(Lb, m, one())]);
    let l = |m| bel(&[(Ll, m, one())]);
    let t = |m| bel(&[(T, m, one())]);
    // recurring combinations
    let sum_l = wel(&[(L, 1, one()), (L, -1, one()), (L, 0, Scalar::int(2))]);
    let sum_lb = wel(&[(Lb, 1, one()), (Lb, -1, one()), (Lb, 0, Scalar::int(2))]);
    let lam = bel(&[(Ll, 1, one()), (Ll, -1, one()), (Ll, 0, Scalar::int(2))]);
    let tau = bel(&[(T, 1, one()), (T, -1, one()), (T, 0, Scalar::int(2))]);
    // translation triple with the a1 sign pattern
    let tt_pattern = |c: &Scalar| -> Wedges {
        vec![(c.clone(), t(1), t(0)), (c.clone(), t(1), t(-1)), (c.neg(), t(-1), t(0))]
    };
    let mut out = Vec::new();

    // r1', plan a: the alpha sector lands on translations, beta survives as
    // the product of the index sums
    let mut src = vec![(p("beta"), sum_l.clone(), sum_lb.clone())];
    src.extend(a1_wedges(w2, L, 1, &p("alpha")));
    src.extend(a1_wedges(w2, Lb, 1, &p("alphabar")));
    let mut exp = tt_pattern(&p("alphahat").add(&p("alphabarhat")));
    exp.push((p("betahat"), lam.clone(), tau.clone()));
    out.push(ContractionCase {
        id: "r1pa".into(),
        source: src.clone(),
        plan: RescalingPlan::new(&[
            ("alpha", resc(4, "alphahat", 2)),
            ("alphabar", resc(4, "alphabarhat", 2)),
            ("beta", resc(-2, "betahat", 1)),
        ]),
        expected: exp,
        note: None,
    });

    // r1', plan b: alphabar = -alpha at order s keeps the rotation sector
    out.push(ContractionCase {
        id: "r1pb".into(),
        source: src,
        plan: RescalingPlan::new(&[
            ("alpha", resc(2, "alphahat", 1)),
            ("alphabar", resc(-2, "alphahat", 1)),
            ("beta", resc(-2, "betahat", 1)),
        ]),
        expected: vec![
            (p("betahat"), lam.clone(), tau.clone()),
            (p("alphahat"), l(1), t(0)),
            (p("alphahat").neg(), l(0), t(1)),
            (p("alphahat"), l(1), t(-1)),
            (p("alphahat").neg(), l(-1), t(1)),
            (p("alphahat").neg(), l(-1), t(0)),
            (p("alphahat"), l(0), t(-1)),
        ],
        note: None,
    });

    // r2'
    let mut src = vec![(p("beta"), g(1), gb(0))];
    src.extend(a2_wedges(w2, L, 1, &p("alpha")));
    out.push(ContractionCase {
        id: "r2pa".into(),
        source: src.clone(),
        plan: RescalingPlan::new(&[
            ("alpha", resc(4, "alphahat", 2)),
            ("beta", resc(4, "betahat", 2)),
        ]),
        expected: vec![(p("alphahat").sub(&p("betahat")), t(1), t(0))],
        note: None,
    });
    out.push(ContractionCase {
        id: "r2pb".into(),
        source: src,
        plan: RescalingPlan::new(&[
            ("alpha", resc(4, "alphahat", 1)),
            ("beta", resc(4, "alphahat", 1)),
        ]),
        expected: vec![(Scalar::int(-2).mul(&p("alphahat")), l(0), t(1))],
        note: Some("requires alpha = beta".into()),
    });

    // r3', plan a, for each (e, e')
    for e in 0..=1i64 {
        for ep in 0..=1i64 {
            let left = wel(&[(L, 1, one()), (L, 0, Scalar::int(e)), (L, -1, Scalar::int(ep))]);
            let mut src = vec![(p("beta"), left, sum_lb.clone())];
            src.extend(a1_wedges(w2, Lb, 1, &p("alphabar")));
            if e == 0 && ep == 0 {
                src.extend(a2_wedges(w2, L, 1, &p("alpha")));
            }
            let ab = p("alphabarhat");
            let bh = p("betahat");
            let mut c10 = ab.sub(&bh.mul_int(2 - e));
            if e == 0 && ep == 0 {
                c10 = c10.add(&p("alphahat"));
            }
            out.push(ContractionCase {
                id: format!("r3pa:e{e}e{ep}"),
                source: src,
                plan: RescalingPlan::new(&[
                    ("alpha", resc(4, "alphahat", 2)),
                    ("alphabar", resc(4, "alphabarhat", 2)),
                    ("beta", resc(4, "betahat", 2)),
                ]),
                expected: vec![
                    (c10, t(1), t(0)),
                    (ab.sub(&bh.mul_int(1 - ep)), t(1), t(-1)),
                    (ab.neg().add(&bh.mul_int(e - 2 * ep)), t(-1), t(0)),
                ],
                note: None,
            });
        }
    }

    // r3', plan b: finite only at e = 1, e' = 0 with alphabar tied to beta
    let left = wel(&[(L, 1, one()), (L, 0, one())]);
    let mut src = vec![(p("beta"), left, sum_lb.clone())];
    src.extend(a1_wedges(w2, Lb, 1, &p("alphabar")));
    out.push(ContractionCase {
        id: "r3pb".into(),
        source: src,
        plan: RescalingPlan::new(&[
            ("alphabar", resc(-2, "betahat", 1)),
            ("beta", resc(-2, "betahat", 1)),
        ]),
        expected: vec![(p("betahat"), bel(&[(Ll, 1, one()), (Ll, 0, one())]), tau.clone())],
        note: Some("requires e = 1, e' = 0 and alphabar = beta".into()),
    });

    // r4'
    out.push(ContractionCase {
        id: "r4pa".into(),
        source: vec![
            (p("beta1"), g(1), gb(1)),
            (
                p("beta2"),
                wel(&[(L, 1, one()), (Lb, 1, one())]),
                wel(&[(L, 0, one()), (Lb, 0, one())]),
            ),
        ],
        plan: RescalingPlan::new(&[
            ("beta1", resc(-2, "beta1hat", 1)),
            ("beta2", p("beta2hat")),
        ]),
        expected: vec![(p("beta1hat"), l(1), t(1)), (p("beta2hat"), l(1), l(0))],
        note: None,
    });

    // r5'
    let mut src = vec![(
        p("beta"),
        wel(&[(L, 1, one()), (L, -1, one())]),
        wel(&[(Lb, 1, one()), (Lb, 0, one())]),
    )];
    src.extend(a1_wedges(w2, L, 1, &p("alpha")));
    out.push(ContractionCase {
        id: "r5pa".into(),
        source: src,
        plan: RescalingPlan::new(&[
            ("alpha", resc(4, "alphahat", 2)),
            ("beta", resc(4, "betahat", 2)),
        ]),
        expected: vec![
            (p("alphahat").sub(&p("betahat")), t(1), t(0)),
            (p("alphahat").add(&p("betahat")), t(1), t(-1)),
            (p("alphahat").add(&p("betahat")).neg(), t(-1), t(0)),
        ],
        note: Some("source uses the two-term left factor".into()),
    });
    // same limit applied to the triangular form of the class
    let mut src = vec![(
        p("beta"),
        sum_l.clone(),
        wel(&[(Lb, 1, one()), (Lb, 0, one())]),
    )];
    src.extend(a1_wedges(w2, L, 1, &p("alpha")));
    out.push(ContractionCase {
        id: "r5pa:app".into(),
        source: src,
        plan: RescalingPlan::new(&[
            ("alpha", resc(4, "alphahat", 2)),
            ("beta", resc(4, "betahat", 2)),
        ]),
        expected: tt_pattern(&p("alphahat").add(&p("betahat"))),
        note: None,
    });

    // r6', plan a, for each (e, ebar)
    for e in 0..=1i64 {
        for eb in 0..=1i64 {
            let left = wel(&[
                (L, 1, p("beta")),
                (L, 0, p("beta0")),
                (L, -1, p("beta").mul_int(e)),
            ]);
            let right = wel(&[
                (Lb, 1, p("betabar")),
                (Lb, 0, p("betabar0")),
                (Lb, -1, p("betabar").mul_int(eb)),
            ]);
            out.push(ContractionCase {
                id: format!("r6pa:e{e}e{eb}"),
                source: vec![(one(), left, right)],
                plan: RescalingPlan::new(&[
                    ("beta", resc(2, "betahat", 1)),
                    ("beta0", resc(2, "beta0hat", 1)),
                    ("betabar", resc(-2, "betabarhat", 1)),
                    ("betabar0", resc(-2, "betabar0hat", 1)),
                ]),
                expected: vec![(
                    one(),
                    bel(&[
                        (T, 1, p("betahat")),
                        (T, 0, p("beta0hat")),
                        (T, -1, p("betahat").mul_int(e)),
                    ]),
                    bel(&[
                        (T, 1, p("betabarhat")),
                        (T, 0, p("betabar0hat")),
                        (T, -1, p("betabarhat").mul_int(eb)),
                    ]),
                )],
                note: None,
            });
        }
    }

    // r6', plan b: barred parameters tied to the unbarred ones
    for e in 0..=1i64 {
        let left = wel(&[
            (L, 1, p("beta")),
            (L, 0, p("beta0")),
            (L, -1, p("beta").mul_int(e)),
        ]);
        let right = wel(&[
            (Lb, 1, p("betabar")),
            (Lb, 0, p("betabar0")),
            (Lb, -1, p("betabar").mul_int(e)),
        ]);
        out.push(ContractionCase {
            id: format!("r6pb:e{e}"),
            source: vec![(one(), left, right)],
            plan: RescalingPlan::new(&[
                ("beta", p("betahat")),
                ("beta0", p("beta0hat")),
                ("betabar", resc(-2, "betahat", 1)),
                ("betabar0", resc(-2, "beta0hat", 1)),
            ]),
            expected: vec![(
                one(),
                bel(&[
                    (Ll, 1, p("betahat")),
                    (Ll, 0, p("beta0hat")),
                    (Ll, -1, p("betahat").mul_int(e)),
                ]),
                bel(&[
                    (T, 1, p("betahat")),
                    (T, 0, p("beta0hat")),
                    (T, -1, p("betahat").mul_int(e)),
                ]),
            )],
            note: Some("requires beta = betabar, beta0 = betabar0, e = ebar".into()),
        });
    }

    // r7', plan a, for each e
    for e in 0..=1i64 {
        let right = wel(&[
            (Lb, 1, p("betabar")),
            (Lb, 0, p("betabar")),
            (Lb, -1, p("betabar").mul_int(e)),
        ]);
        let mut src = vec![(one(), g(1), right)];
        src.extend(a2_wedges(w2, L, 1, &p("alpha")));
        out.push(ContractionCase {
            id: format!("r7pa:e{e}"),
            source: src,
            plan: RescalingPlan::new(&[
                ("alpha", resc(4, "alphahat", 2)),
                ("betabar", resc(-4, "betahat", 2)),
            ]),
            expected: vec![
                (p("betahat").add(&p("alphahat")), t(1), t(0)),
                (p("betahat").mul_int(e), t(1), t(-1)),
            ],
            note: None,
        });
    }

    // r7', plan b: e = 0 and betabar tied to alpha
    let right = wel(&[(Lb, 1, p("betabar")), (Lb, 0, p("betabar"))]);
    let mut src = vec![(one(), g(1), right)];
    src.extend(a2_wedges(w2, L, 1, &p("alpha")));
    out.push(ContractionCase {
        id: "r7pb".into(),
        source: src,
        plan: RescalingPlan::new(&[
            ("alpha", resc(2, "alphahat", 1)),
            ("betabar", resc(2, "alphahat", 1)),
        ]),
        expected: vec![(
            p("alphahat"),
            t(1),
            bel(&[(Ll, 1, one()), (Ll, 0, one())]),
        )],
        note: Some("requires e = 0 and betabar = alpha".into()),
    });

    // r8'
    let mut src = vec![(p("beta"), g(1), gb(1))];
    src.extend(a2_wedges(w2, L, 1, &p("alpha")));
    src.extend(a2_wedges(w2, Lb, 1, &p("alphabar")));
    out.push(ContractionCase {
        id: "r8pa".into(),
        source: src.clone(),
        plan: RescalingPlan::new(&[
            ("alpha", resc(4, "alphahat", 2)),
            ("alphabar", resc(4, "alphabarhat", 2)),
            ("beta", resc(4, "betahat", 1)),
        ]),
        expected: vec![
            (p("alphahat").add(&p("alphabarhat")), t(1), t(0)),
            (Scalar::int(-2).mul(&p("betahat")), l(1), t(1)),
        ],
        note: None,
    });
    out.push(ContractionCase {
        id: "r8pb".into(),
        source: src,
        plan: RescalingPlan::new(&[
            ("alpha", resc(2, "alphahat", 1)),
            ("alphabar", resc(-2, "alphahat", 1)),
            ("beta", resc(2, "betahat", 1)),
        ]),
        expected: vec![
            (p("betahat").neg(), l(1), t(1)),
            (p("alphahat"), l(1), t(0)),
            (p("alphahat").neg(), l(0), t(1)),
        ],
        note: Some("requires alpha = -alphabar".into()),
    });

    out
}

pub fn contraction_case(id: &str) -> Option<ContractionCase> {
    contraction_table().into_iter().find(|c| c.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::schouten;

    #[test]
    fn table_limits_match() {
        for case in contraction_table() {
            let got = contract_r(&case.source_tensor(), &case.plan)
                .unwrap_or_else(|e| panic!("{}: {e}", case.id));
            assert_eq!(got, case.expected_tensor(), "{}", case.id);
        }
    }

    #[test]
    fn triangularity_survives_the_limit() {
        for case in contraction_table() {
            if schouten(&case.source_tensor()).is_zero() {
                assert!(
                    schouten(&case.expected_tensor()).is_zero(),
                    "{}",
                    case.id
                );
            }
        }
    }

    #[test]
    fn insufficient_plan_diverges() {
        // r2' at order s in both parameters leaves a first order pole unless
        // the two hatted parameters coincide
        let case = contraction_case("r2pa").unwrap();
        let bad = RescalingPlan::new(&[
            ("alpha", resc(4, "alphahat", 1)),
            ("beta", resc(4, "betahat", 1)),
        ]);
        let err = contract_r(&case.source_tensor(), &bad).unwrap_err();
        assert_eq!(err, ContractionError::DivergentLimit { degree: 1 });
    }

    #[test]
    fn light_cone_twist_contracts_to_the_b3_closed_form() {
        use crate::envelope::{build_twist, TwistKind};
        let order = 3;
        let w2 = build_twist(AlgebraName::W2, TwistKind::LightCone { n: 1 }, order).unwrap();
        let plan = RescalingPlan::new(&[("a", resc(2, "ahat", 1))]);
        let got = contract_twist(&w2.f, &plan, &w2.trunc).unwrap();
        let b3 =
            build_twist(AlgebraName::B3, TwistKind::LightConeContracted { n: 1 }, order).unwrap();
        let mut expect = TensorEnvelope::zero(AlgebraName::B3, 2);
        for (legs, c) in &b3.f.terms {
            expect.add_term(legs.clone(), c.substitute("a", &p("ahat")).unwrap());
        }
        assert_eq!(got, expect);
    }

    #[test]
    fn r2_prime_twist_contraction_diverges_at_first_order() {
        let tw = crate::envelope::r2_prime_twist(2).unwrap();
        let plan = RescalingPlan::new(&[
            ("alpha", resc(4, "alphahat", 1)),
            ("beta", resc(4, "betahat", 1)),
        ]);
        let err = contract_twist(&tw.f, &plan, &tw.trunc).unwrap_err();
        assert_eq!(err, ContractionError::TwistDivergentLimit { order: 1, degree: 1 });
    }

    #[test]
    fn zero_contracts_to_zero() {
        let z = TensorElement::zero(AlgebraName::W2, 2);
        let got = contract_r(&z, &RescalingPlan::default()).unwrap();
        assert!(got.is_zero());
    }
}
