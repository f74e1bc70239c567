//! Exact dense linear algebra over the Gaussian rationals: row reduction,
//! rank, null spaces and linear solves. Matrices are small (cochain windows),
//! so dense Gaussian elimination is enough.

use crate::scalar::GaussianRational;

pub type Matrix = Vec<Vec<GaussianRational>>;

/// In-place reduced row echelon form; returns the pivot column of each
/// nonzero row, in order.
pub fn rref(mat: &mut Matrix) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&p| !mat[p][c].is_zero()) else { continue };
        mat.swap(r, p);
        let inv = mat[r][c].inv();
        for x in mat[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for q in 0..rows {
            if q != r && !mat[q][c].is_zero() {
                let f = mat[q][c].clone();
                for c2 in 0..cols {
                    let sub = mat[r][c2].mul(&f);
                    mat[q][c2] = mat[q][c2].add(&sub.neg());
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(mut mat: Matrix) -> usize {
    rref(&mut mat).len()
}

/// Basis of the right null space of an (m x n) matrix.
pub fn nullspace(mat: &Matrix, ncols: usize) -> Vec<Vec<GaussianRational>> {
    let mut m = mat.clone();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![GaussianRational::zero(); ncols];
        v[free] = GaussianRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = m[row][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Any exact solution of A x = b, or None if inconsistent.
pub fn solve(a: &Matrix, b: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None; // pivot in the augmented column
    }
    let mut x = vec![GaussianRational::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}


/// A sparse row: column index -> nonzero coefficient.
pub type SparseRow = std::collections::BTreeMap<usize, GaussianRational>;

/// Incremental sparse Gaussian eliminator. Pivot rows are normalized to a
/// leading coefficient of one and keyed by their leading column; entries of a
/// pivot row all sit at or after the pivot column, so reduction of the leading
/// entry strictly advances and terminates.
#[derive(Default)]
pub struct SparseEliminator {
    pivots: std::collections::BTreeMap<usize, SparseRow>,
}

impl SparseEliminator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.pivots.keys().cloned().collect()
    }

    /// Fully reduces the leading entries of `row` against the pivots; the
    /// remainder is zero iff the row lies in the current row span.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        loop {
            let Some((&c, coeff)) = row.iter().next() else { return row };
            let Some(p) = self.pivots.get(&c) else { return row };
            let f = coeff.clone();
            row.remove(&c);
            for (&c2, v) in p.iter() {
                if c2 == c {
                    continue;
                }
                let delta = v.mul(&f).neg();
                let e = row.entry(c2).or_insert_with(GaussianRational::zero);
                *e = e.add(&delta);
                if e.is_zero() {
                    row.remove(&c2);
                }
            }
        }
    }

    /// Inserts a row; returns true if it increased the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let r = self.reduce(row);
        let Some((&lead, coeff)) = r.iter().next() else { return false };
        let inv = coeff.inv();
        let norm: SparseRow = r.iter().map(|(&c, v)| (c, v.mul(&inv))).collect();
        self.pivots.insert(lead, norm);
        true
    }

    /// Kernel vector assigning one to the given non-pivot column and
    /// back-substituting through the pivot rows.
    pub fn kernel_vector(&self, free: usize) -> SparseRow {
        debug_assert!(!self.pivots.contains_key(&free));
        let mut x: SparseRow = SparseRow::new();
        x.insert(free, GaussianRational::one());
        for (&p, row) in self.pivots.iter().rev() {
            let mut s = GaussianRational::zero();
            for (&c, v) in row.iter() {
                if c == p {
                    continue;
                }
                if let Some(xc) = x.get(&c) {
                    s = s.add(&v.mul(xc));
                }
            }
            if !s.is_zero() {
                x.insert(p, s.neg());
            }
        }
        x
    }
}

/// Rank of an iterator of sparse rows.
pub fn sparse_rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut e = SparseEliminator::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Sorted sparse integer row: (column, coefficient) pairs in column order.
pub type IntRow = Vec<(u32, num::BigInt)>;

/// Fraction-free sparse Gaussian eliminator over the integers. Rows are kept
/// primitive (content divided out); elimination uses cross-multiplication so
/// no rational arithmetic is needed. Pivot columns are tracked in order, so
/// the rank of any column-prefix submatrix can be read off directly.
pub struct IntEliminator {
    pivots: std::collections::BTreeMap<u32, IntRow>,
}

fn strip_content(row: &mut IntRow) {
    use num::Integer;
    let mut g = num::BigInt::from(0);
    for (_, c) in row.iter() {
        g = g.gcd(c);
        if g == num::BigInt::from(1) {
            break;
        }
    }
    if g > num::BigInt::from(1) {
        for (_, c) in row.iter_mut() {
            *c /= &g;
        }
    }
}

impl IntEliminator {
    pub fn new() -> Self {
        IntEliminator { pivots: std::collections::BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Number of pivot columns strictly below `col` — the rank of the
    /// submatrix formed by the first `col` columns.
    pub fn rank_below(&self, col: u32) -> usize {
        self.pivots.range(..col).count()
    }

    /// Reduce `row` against the current pivots; install it as a new pivot if
    /// anything survives. Returns true when the rank grew.
    pub fn insert(&mut self, mut row: IntRow) -> bool {
        use num::Zero;
        loop {
            row.retain(|(_, c)| !c.is_zero());
            if row.is_empty() {
                return false;
            }
            strip_content(&mut row);
            let lead = row[0].0;
            match self.pivots.get(&lead) {
                None => {
                    self.pivots.insert(lead, row);
                    return true;
                }
                Some(piv) => {
                    // row ← p_lead·row − r_lead·piv, dropping the lead column
                    let a = piv[0].1.clone();
                    let b = row[0].1.clone();
                    let mut merged: IntRow = Vec::with_capacity(row.len() + piv.len());
                    let (mut i, mut j) = (1usize, 1usize);
                    while i < row.len() || j < piv.len() {
                        match (row.get(i), piv.get(j)) {
                            (Some((ci, vi)), Some((cj, vj))) => {
                                use std::cmp::Ordering::*;
                                match ci.cmp(cj) {
                                    Less => {
                                        merged.push((*ci, &a * vi));
                                        i += 1;
                                    }
                                    Greater => {
                                        merged.push((*cj, -(&b * vj)));
                                        j += 1;
                                    }
                                    Equal => {
                                        let v = &a * vi - &b * vj;
                                        if !v.is_zero() {
                                            merged.push((*ci, v));
                                        }
                                        i += 1;
                                        j += 1;
                                    }
                                }
                            }
                            (Some((ci, vi)), None) => {
                                merged.push((*ci, &a * vi));
                                i += 1;
                            }
                            (None, Some((cj, vj))) => {
                                merged.push((*cj, -(&b * vj)));
                                j += 1;
                            }
                            (None, None) => unreachable!(),
                        }
                    }
                    row = merged;
                }
            }
        }
    }
}
