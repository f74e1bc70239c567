//! Finite-window Chevalley–Eilenberg H¹(𝔤, ⋀²𝔤) probes by exact linear
//! algebra. Cochains are graded by generator weight and evaluated on an
//! interior window so that index shifts never fall off the edge of the
//! truncation; quotients are measured on interior coordinates only.

use std::collections::BTreeMap;

use crate::algebra::{
    bracket, AlgError, AlgebraElement, AlgebraName, Family, Generator, Idx,
};
use crate::linalg::{SparseEliminator, SparseRow};
use crate::scalar::GaussianRational as Gr;
use crate::scalar::Scalar;
use crate::tensor::{cobracket_eval, Cobracket, TensorElement};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("window {0} leaves no interior generators")]
    WindowTooSmall(i64),
    #[error(transparent)]
    Algebra(#[from] AlgError),
    #[error("coefficient is not a rational multiple of a parameter monomial: {0}")]
    NonRationalCoefficient(String),
}

/// Ordered wedge monomial g1 ∧ g2 with g1 < g2.
type Mono = (Generator, Generator);

/// Bi-weight of a generator under the two rotation gradings.
fn bigrade(g: &Generator) -> (i64, i64) {
    match (g.family, g.idx) {
        (_, Idx::None) => (0, 0),
        (Family::Lb | Family::Llb | Family::Kb, Idx::One(m)) => (0, m),
        (_, Idx::One(m)) => (m, 0),
        (_, Idx::Two(p, q)) => (p, q),
    }
}

fn grade_add(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0 + b.0, a.1 + b.1)
}

fn grade_sub(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0 - b.0, a.1 - b.1)
}

/// Canonical cochain families: the rotation/supertranslation/central basis,
/// without the change-of-basis families.
fn cochain_families(alg: AlgebraName) -> Vec<Family> {
    alg.families()
        .into_iter()
        .filter(|f| !matches!(f, Family::K | Family::Kb | Family::S | Family::A))
        .collect()
}

fn max_abs_index(g: &Generator) -> i64 {
    match g.idx {
        Idx::None => 0,
        Idx::One(m) => m.abs(),
        Idx::Two(p, q) => p.abs().max(q.abs()),
    }
}

/// All canonical generators with every index within ±bound (and the
/// algebra's own one-sided limits).
fn gens_within(alg: AlgebraName, bound: i64) -> Vec<Generator> {
    let (wlo, whi) = alg.window();
    let lo = wlo.unwrap_or(-bound).max(-bound);
    let hi = whi.unwrap_or(bound).min(bound);
    let mut out = Vec::new();
    for f in cochain_families(alg) {
        match f.arity() {
            0 => out.push(Generator::central(f)),
            1 => out.extend((lo..=hi).map(|m| Generator::one(f, m))),
            2 => {
                for p in lo..=hi {
                    for q in lo..=hi {
                        out.push(Generator::two(f, p, q));
                    }
                }
            }
            _ => unreachable!(),
        }
    }
    out
}

/// Numeric value of a structure-constant scalar.
fn rat_scalar(c: Gr) -> Scalar {
    let mut s = Scalar::zero();
    s.add_term(crate::scalar::Monomial::new(), c);
    s
}

fn as_rat(s: &Scalar) -> Result<Gr, CohomologyError> {
    let mut out = Gr::zero();
    for (mono, c) in s.terms() {
        if !mono.is_empty() {
            return Err(CohomologyError::NonRationalCoefficient(s.render()));
        }
        out = out.add(c);
    }
    Ok(out)
}

/// x ▷ (g1 ∧ g2) decomposed into ordered wedge monomials.
fn ad_mono(
    alg: AlgebraName,
    x: &Generator,
    w: &Mono,
) -> Result<Vec<(Mono, Gr)>, CohomologyError> {
    let xe = AlgebraElement::gen(alg, *x);
    let mut out: BTreeMap<Mono, Gr> = BTreeMap::new();
    for (slot, leg) in [w.0, w.1].into_iter().enumerate() {
        let br = bracket(&xe, &AlgebraElement::gen(alg, leg))?;
        for (g2, c) in &br.terms {
            let other = if slot == 0 { w.1 } else { w.0 };
            if *g2 == other {
                continue;
            }
            let (m, sign) = if *g2 < other { ((*g2, other), 1) } else { ((other, *g2), -1) };
            // slot swap does not change the sign: a∧b with b replaced keeps
            // orientation, with a replaced the pair is reread in order
            let sgn = if slot == 0 { sign } else { -sign };
            let c = as_rat(c)?.mul(&Gr::from_ratio(sgn, 1));
            let e = out.entry(m).or_insert_with(Gr::zero);
            *e = e.add(&c);
        }
    }
    Ok(out.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

struct Sector {
    alg: AlgebraName,
    window: i64,
    leg_cap: i64,
    dmax: i64,
    one_sided: bool,
    args: Vec<Generator>,
    /// variable list: (argument generator, value wedge monomial)
    vars: Vec<(Generator, Mono)>,
    index: BTreeMap<(Generator, Mono), usize>,
    vars_by_arg: BTreeMap<Generator, Vec<usize>>,
    /// interior variables: value legs within the interior bound
    interior: Vec<bool>,
    /// 0-cochain monomials of the sector's bigrade
    chains0: Vec<Mono>,
}

fn interior_bound(m: i64) -> i64 {
    m / 2
}

fn build_sector(
    alg: AlgebraName,
    d: (i64, i64),
    m: i64,
) -> Result<Sector, CohomologyError> {
    let a = interior_bound(m);
    let dmax = d.0.abs().max(d.1.abs());
    // On a one-sided window every wedge monomial of a fixed bi-weight has both
    // legs bounded by the total weight plus the floor offset, so extending the
    // argument range keeps the computation exact while adding the equations
    // that obstruct non-extendable interior classes.
    let one_sided = alg.window() != (None, None);
    let (arg_bound, leg_cap) = if one_sided { (m, m + dmax + 1) } else { (a, m) };
    let args = gens_within(alg, arg_bound);
    if args.is_empty() {
        return Err(CohomologyError::WindowTooSmall(m));
    }
    let window_gens = gens_within(alg, leg_cap);
    let mut by_grade: BTreeMap<(i64, i64), Vec<Generator>> = BTreeMap::new();
    for g in &window_gens {
        by_grade.entry(bigrade(g)).or_default().push(*g);
    }
    let mut vars = Vec::new();
    let mut index = BTreeMap::new();
    let mut interior = Vec::new();
    let mut vars_by_arg: BTreeMap<Generator, Vec<usize>> = BTreeMap::new();
    for z in &args {
        let target = grade_add(bigrade(z), d);
        for g1 in &window_gens {
            if let Some(partners) = by_grade.get(&grade_sub(target, bigrade(g1))) {
                for g2 in partners {
                    if g2 <= g1 {
                        continue;
                    }
                    let key = (*z, (*g1, *g2));
                    index.insert(key, vars.len());
                    vars_by_arg.entry(*z).or_default().push(vars.len());
                    vars.push(key);
                    interior.push(
                        max_abs_index(z) <= a
                            && max_abs_index(g1) <= a
                            && max_abs_index(g2) <= a,
                    );
                }
            }
        }
    }
    let mut chains0 = Vec::new();
    for g1 in &window_gens {
        if let Some(partners) = by_grade.get(&grade_sub(d, bigrade(g1))) {
            for g2 in partners {
                if *g2 > *g1 {
                    chains0.push((*g1, *g2));
                }
            }
        }
    }
    Ok(Sector { alg, window: m, leg_cap, dmax, one_sided, args, vars, index, interior, vars_by_arg, chains0 })
}

impl Sector {
    /// Safe cocycle-equation rows: for each interior pair (x, y) with an
    /// interior bracket, the components of δ([x,y]) − x▷δ(y) + y▷δ(x) on
    /// monomials far enough from the window edge that every contribution is
    /// tracked.
    fn d1_rows(&self) -> Result<Vec<SparseRow>, CohomologyError> {
        let argset: std::collections::BTreeSet<Generator> = self.args.iter().cloned().collect();
        let mut rows = Vec::new();
        for (i, x) in self.args.iter().enumerate() {
            for y in self.args.iter().skip(i + 1) {
                let br = bracket(
                    &AlgebraElement::gen(self.alg, *x),
                    &AlgebraElement::gen(self.alg, *y),
                )?;
                if !br.terms.keys().all(|z| argset.contains(z)) {
                    continue;
                }
                let shift = max_abs_index(x).max(max_abs_index(y));
                // On a one-sided window the values of every argument touched
                // by this pair are fully supported inside the tracked range,
                // so each component equation is exact.
                let top = br
                    .terms
                    .keys()
                    .map(max_abs_index)
                    .fold(shift, i64::max);
                let safe = if self.one_sided && top + self.dmax + 1 <= self.leg_cap {
                    i64::MAX
                } else {
                    self.window - shift
                };
                let mut eq: BTreeMap<Mono, SparseRow> = BTreeMap::new();
                let mut acc = |w: Mono, var: usize, c: Gr| {
                    let e = eq.entry(w).or_default().entry(var).or_insert_with(Gr::zero);
                    *e = e.add(&c);
                };
                for (z, c) in &br.terms {
                    let c = as_rat(c)?;
                    for &var in self.vars_by_arg.get(z).map(|v| v.as_slice()).unwrap_or(&[]) {
                        let (_, w) = self.vars[var];
                        acc(w, var, c.clone());
                    }
                }
                for (adx, z, sgn) in [(x, y, -1i64), (y, x, 1)] {
                    for &var in self.vars_by_arg.get(z).map(|v| v.as_slice()).unwrap_or(&[]) {
                        let (_, w) = self.vars[var];
                        for (w2, c2) in ad_mono(self.alg, adx, &w)? {
                            acc(w2, var, c2.mul(&Gr::from_ratio(sgn, 1)));
                        }
                    }
                }
                for (w, row) in eq {
                    if max_abs_index(&w.0) <= safe && max_abs_index(&w.1) <= safe {
                        let row: SparseRow =
                            row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                        if !row.is_empty() {
                            rows.push(row);
                        }
                    }
                }
            }
        }
        Ok(rows)
    }

    /// ∂₀ columns: each 0-cochain r mapped to the 1-cochain z ↦ z ▷ r,
    /// expressed on the tracked variables.
    fn d0_columns(&self) -> Result<Vec<SparseRow>, CohomologyError> {
        let mut cols = Vec::new();
        for r in &self.chains0 {
            let mut col = SparseRow::new();
            for z in &self.args {
                for (w, c) in ad_mono(self.alg, z, r)? {
                    if let Some(&var) = self.index.get(&(*z, w)) {
                        col.insert(var, c);
                    }
                }
            }
            cols.push(col);
        }
        Ok(cols)
    }

    fn project_interior(&self, v: &SparseRow) -> SparseRow {
        v.iter()
            .filter(|(&c, _)| self.interior[c])
            .map(|(&c, x)| (c, x.clone()))
            .collect()
    }
}

/// One graded component of the probe.
#[derive(Debug, Clone)]
pub struct H1Report {
    pub algebra: AlgebraName,
    pub degree: i64,
    pub window: i64,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub quotient: usize,
    /// Interior-supported representatives of the quotient classes.
    pub basis: Vec<Cobracket>,
}

/// Interior H¹ of the degree-d sector: exact kernel/image dimensions of the
/// truncated Chevalley–Eilenberg differentials, measured on interior
/// coordinates, summed over the bi-weight refinements of the degree.
pub fn h1_component(
    alg: AlgebraName,
    degree: i64,
    m: i64,
) -> Result<H1Report, CohomologyError> {
    let a = interior_bound(m);
    if a < 1 {
        return Err(CohomologyError::WindowTooSmall(m));
    }
    let mut rep = H1Report {
        algebra: alg,
        degree,
        window: m,
        dim_cocycles: 0,
        dim_coboundaries: 0,
        quotient: 0,
        basis: Vec::new(),
    };
    // bi-weight components of the total degree; beyond 3a the interior is empty
    let spread = 3 * a;
    for d1 in -spread..=spread {
        let d2 = degree - d1;
        if d2.abs() > spread {
            continue;
        }
        let sector = build_sector(alg, (d1, d2), m)?;
        if sector.vars.is_empty() || !sector.interior.iter().any(|&b| b) {
            continue;
        }
        let trace = std::env::var("QDEFORM_COH_TRACE").is_ok();
        let t0 = std::time::Instant::now();
        let nvars = sector.vars.len();
        let n_int = sector.interior.iter().filter(|&&b| b).count();
        let n_edge = nvars - n_int;

        let rows = sector.d1_rows()?;
        if trace {
            eprintln!(
                "sector ({d1},{d2}): {} vars ({} interior), {} rows, built in {:.2}s",
                nvars,
                n_int,
                rows.len(),
                t0.elapsed().as_secs_f64()
            );
        }
        // Column permutation placing edge variables first: one fraction-free
        // elimination then gives both the full rank and — as the pivot count
        // inside the edge block — the rank of the edge-restricted system.
        let mut perm = vec![0u32; nvars];
        let (mut e_next, mut i_next) = (0u32, n_edge as u32);
        for (v, p) in perm.iter_mut().enumerate() {
            if sector.interior[v] {
                *p = i_next;
                i_next += 1;
            } else {
                *p = e_next;
                e_next += 1;
            }
        }
        let mut int_rows: std::collections::BTreeSet<crate::linalg::IntRow> =
            std::collections::BTreeSet::new();
        for r in &rows {
            int_rows.insert(integer_row(r, &perm)?);
        }
        let mut int_rows: Vec<_> = int_rows.into_iter().collect();
        int_rows.sort_by_key(|r| r.len());
        let mut elim = crate::linalg::IntEliminator::new();
        for r in int_rows {
            elim.insert(r);
        }
        // interior projection of ker ∂₁: (nvars − rank) − (edge kernel)
        let ker_full = nvars - elim.rank();
        let ker_edge = n_edge - elim.rank_below(n_edge as u32);

        let cols = sector.d0_columns()?;
        let mut img = SparseEliminator::new();
        for c in &cols {
            img.insert(sector.project_interior(c));
        }
        let im_proj = img.rank();
        if trace {
            eprintln!(
                "sector ({d1},{d2}): eliminated in {:.2}s total",
                t0.elapsed().as_secs_f64()
            );
        }
        let quotient = (ker_full - ker_edge).saturating_sub(im_proj);
        rep.dim_cocycles += ker_full - ker_edge;
        rep.dim_coboundaries += im_proj;
        rep.quotient += quotient;

        if quotient > 0 {
            rep.basis.extend(extract_basis(&sector, &full, &img, quotient)?);
        }
    }
    Ok(rep)
}

/// Kernel representatives of ∂₁ whose interior projections extend the image
/// of ∂₀, returned as cobracket tables on the interior arguments.
fn extract_basis(
    sector: &Sector,
    full: &SparseEliminator,
    img: &SparseEliminator,
    want: usize,
) -> Result<Vec<Cobracket>, CohomologyError> {
    let mut found = Vec::new();
    let mut span = SparseEliminator::new();
    let pivot_set: std::collections::BTreeSet<usize> = full.pivot_cols().into_iter().collect();
    for free in (0..sector.vars.len()).filter(|c| !pivot_set.contains(c)) {
        if found.len() == want {
            break;
        }
        let v = full.kernel_vector(free);
        let p = sector.project_interior(&v);
        let reduced = img.reduce(p);
        let reduced = span.reduce(reduced);
        if reduced.is_empty() {
            continue;
        }
        span.insert(reduced.clone());
        let mut table: BTreeMap<Generator, TensorElement> = BTreeMap::new();
        for z in &sector.args {
            table.insert(*z, TensorElement::zero(sector.alg, 2));
        }
        for (&ci, coeff) in &reduced {
            let (z, w) = sector.vars[ci];
            let c = rat_scalar(coeff.clone());
            let t = table.get_mut(&z).unwrap();
            t.add_term(vec![w.0, w.1], c.clone());
            t.add_term(vec![w.1, w.0], c.neg());
        }
        found.push(Cobracket::Table(sector.alg, table));
    }
    Ok(found)
}

/// Verdict of the coboundary test for a cobracket on a finite window.
#[derive(Debug, Clone)]
pub enum CoboundaryVerdict {
    Coboundary(TensorElement),
    NotCoboundary(String),
}

/// Solves δ = ∂₀ r over window 0-cochains of the matching bi-weights;
/// parameter monomials in the coefficients of δ are solved independently.
pub fn verify_noncoboundary(
    d: &Cobracket,
    alg: AlgebraName,
    m: i64,
) -> Result<CoboundaryVerdict, CohomologyError> {
    let a = interior_bound(m);
    if a < 1 {
        return Err(CohomologyError::WindowTooSmall(m));
    }
    let args = gens_within(alg, a);
    // targets: ordered-monomial coefficients of δ(z), split by parameter monomial
    type PMono = Vec<(String, i64)>;
    let mut targets: BTreeMap<Generator, BTreeMap<Mono, BTreeMap<PMono, Gr>>> = BTreeMap::new();
    let mut offsets: std::collections::BTreeSet<(i64, i64)> = std::collections::BTreeSet::new();
    let mut pmonos: std::collections::BTreeSet<PMono> = std::collections::BTreeSet::new();
    for z in &args {
        let t = cobracket_eval(d, &AlgebraElement::gen(alg, *z))
            .map_err(|e| CohomologyError::NonRationalCoefficient(e.to_string()))?;
        let entry = targets.entry(*z).or_default();
        for (legs, c) in &t.terms {
            if legs[0] >= legs[1] {
                continue;
            }
            let w = (legs[0], legs[1]);
            offsets.insert(grade_sub(
                grade_add(bigrade(&w.0), bigrade(&w.1)),
                bigrade(z),
            ));
            let slot = entry.entry(w).or_default();
            for (mono, coeff) in c.terms() {
                let pm: PMono = mono.iter().map(|(k, v)| (k.clone(), *v)).collect();
                pmonos.insert(pm.clone());
                let e = slot.entry(pm).or_insert_with(Gr::zero);
                *e = e.add(coeff);
            }
        }
    }
    if pmonos.is_empty() {
        // δ vanishes on the window: the zero 0-cochain works
        return Ok(CoboundaryVerdict::Coboundary(TensorElement::zero(alg, 2)));
    }
    // 0-cochain basis over all bi-weights seen in δ
    let window_gens = gens_within(alg, m);
    let mut by_grade: BTreeMap<(i64, i64), Vec<Generator>> = BTreeMap::new();
    for g in &window_gens {
        by_grade.entry(bigrade(g)).or_default().push(*g);
    }
    let mut chains0: Vec<Mono> = Vec::new();
    for off in &offsets {
        for g1 in &window_gens {
            if let Some(ps) = by_grade.get(&grade_sub(*off, bigrade(g1))) {
                for g2 in ps {
                    if *g2 > *g1 {
                        chains0.push((*g1, *g2));
                    }
                }
            }
        }
    }
    // rows: (z, w) with w far enough inside that ∂₀ components are complete
    struct Row {
        entries: SparseRow,
        rhs: BTreeMap<PMono, Gr>,
        label: String,
    }
    let mut rows: Vec<Row> = Vec::new();
    let mut row_index: BTreeMap<(Generator, Mono), usize> = BTreeMap::new();
    for z in &args {
        let safe = m - max_abs_index(z);
        let zero = BTreeMap::new();
        let tz = targets.get(z).unwrap_or(&zero);
        // rows seeded by the target support
        for (w, slot) in tz {
            if max_abs_index(&w.0) <= safe && max_abs_index(&w.1) <= safe {
                row_index.insert((*z, *w), rows.len());
                rows.push(Row {
                    entries: SparseRow::new(),
                    rhs: slot.clone(),
                    label: format!("{} |> r at {} ^ {}", z, w.0, w.1),
                });
            }
        }
        let _ = safe;
    }
    for (ci, r) in chains0.iter().enumerate() {
        for z in &args {
            let safe = m - max_abs_index(z);
            for (w, c) in ad_mono(alg, z, r)? {
                if max_abs_index(&w.0) > safe || max_abs_index(&w.1) > safe {
                    continue;
                }
                let ri = *row_index.entry((*z, w)).or_insert_with(|| {
                    rows.push(Row {
                        entries: SparseRow::new(),
                        rhs: BTreeMap::new(),
                        label: format!("{} |> r at {} ^ {}", z, w.0, w.1),
                    });
                    rows.len() - 1
                });
                let e = rows[ri].entries.entry(ci).or_insert_with(Gr::zero);
                *e = e.add(&c);
            }
        }
    }
    // one augmented elimination per parameter monomial
    let ncols = chains0.len();
    let mut solution = TensorElement::zero(alg, 2);
    for pm in &pmonos {
        let mut elim = SparseEliminator::new();
        let mut labels: BTreeMap<usize, String> = BTreeMap::new();
        for row in &rows {
            let mut r = row.entries.clone();
            let rhs = row.rhs.get(pm).cloned().unwrap_or_else(Gr::zero);
            if !rhs.is_zero() {
                r.insert(ncols, rhs);
            }
            let red = elim.reduce(r);
            if let Some((&lead, _)) = red.iter().next() {
                if lead == ncols {
                    return Ok(CoboundaryVerdict::NotCoboundary(format!(
                        "unsatisfiable equation from {}",
                        row.label
                    )));
                }
                labels.insert(lead, row.label.clone());
                elim.insert(red);
            }
            let _ = &labels;
        }
        // back-substitute a particular solution: free variables at zero
        let mut x: BTreeMap<usize, Gr> = BTreeMap::new();
        let mut pmono_scal = Scalar::one();
        for (name, e) in pm {
            pmono_scal = pmono_scal.mul(&Scalar::param_pow(name, *e));
        }
        solve_back(&elim, ncols, &mut x);
        for (&ci, v) in &x {
            if v.is_zero() {
                continue;
            }
            let (g1, g2) = chains0[ci];
            let c = rat_scalar(v.clone()).mul(&pmono_scal);
            solution.add_term(vec![g1, g2], c.clone());
            solution.add_term(vec![g2, g1], c.neg());
        }
    }
    Ok(CoboundaryVerdict::Coboundary(solution))
}

/// Particular solution of the eliminated augmented system: free variables
/// zero, pivots by back-substitution (the augmented column is `ncols`).
fn solve_back(elim: &SparseEliminator, ncols: usize, x: &mut BTreeMap<usize, Gr>) {
    let v = if elim.pivot_cols().contains(&ncols) {
        // cannot happen: inconsistency is detected during insertion
        SparseRow::new()
    } else {
        elim.kernel_vector(ncols)
    };
    // kernel_vector gives x with x[ncols] = 1 solving A x = 0 on the augmented
    // matrix, i.e. A x' = -b for the plain part; negate to get A x'' = b
    for (&c, val) in &v {
        if c == ncols {
            continue;
        }
        let nv = val.neg();
        if !nv.is_zero() {
            x.insert(c, nv);
        }
    }
}
