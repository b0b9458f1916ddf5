//! Sparse exact Gauss–Jordan elimination over ℚ(√2): ranks, kernel bases
//! and reusable factorizations of uniquely solvable systems.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::{Coefficient, Scalar};

/// Sparse vector: `(index, value)` sorted by index, no zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `a + s·b` for sorted sparse vectors.
pub fn axpy(a: &SparseVec, s: &Scalar, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = s * &b[j].1;
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = &a[i].1 + &(s * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn lookup(v: &SparseVec, idx: usize) -> Option<&Scalar> {
    v.binary_search_by_key(&idx, |(k, _)| *k).ok().map(|p| &v[p].1)
}

/// Canonicalizes arbitrary `(index, value)` pairs: sorts, sums duplicates,
/// drops zeros.
pub fn sparse_from(entries: impl IntoIterator<Item = (usize, Scalar)>) -> SparseVec {
    let mut m: std::collections::BTreeMap<usize, Scalar> = std::collections::BTreeMap::new();
    for (k, v) in entries {
        *m.entry(k).or_insert_with(Scalar::zero) += &v;
    }
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// A row-major sparse matrix.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    ncols: usize,
    rows: Vec<SparseVec>,
}

/// Incremental Gauss–Jordan state: fully reduced rows with unit pivots.
struct Reducer {
    limit: usize,
    rows: Vec<SparseVec>,
    pivot_of_row: Vec<usize>,
    row_of_pivot: HashMap<usize, usize>,
}

impl Reducer {
    fn new(limit: usize) -> Self {
        Reducer { limit, rows: Vec::new(), pivot_of_row: Vec::new(), row_of_pivot: HashMap::new() }
    }

    /// Reduces `r` against the current rows; if a pivot below `limit`
    /// survives, inserts it and returns `None`, otherwise returns the
    /// remainder (whose entries are all at indices ≥ `limit`).
    fn insert(&mut self, mut r: SparseVec) -> Option<SparseVec> {
        let hits: Vec<(usize, Scalar)> = r
            .iter()
            .filter_map(|(c, v)| self.row_of_pivot.get(c).map(|&ri| (ri, v.clone())))
            .collect();
        for (ri, v) in hits {
            r = axpy(&r, &-v, &self.rows[ri]);
        }
        let Some(&(p, ref pv)) = r.first().filter(|(c, _)| *c < self.limit) else {
            return Some(r);
        };
        let inv = pv.inv().expect("nonzero pivot");
        let r: SparseVec = r.iter().map(|(c, v)| (*c, v * &inv)).collect();
        for row in self.rows.iter_mut() {
            if let Some(v) = lookup(row, p).cloned() {
                *row = axpy(row, &-v, &r);
            }
        }
        self.row_of_pivot.insert(p, self.rows.len());
        self.pivot_of_row.push(p);
        self.rows.push(r);
        None
    }
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    /// Builds an `nrows × columns.len()` matrix from sparse columns; row
    /// numbering is kept, including rows that are entirely zero.
    pub fn from_columns(nrows: usize, columns: &[SparseVec]) -> Self {
        let mut rows = vec![Vec::new(); nrows];
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col {
                rows[*r].push((c, v.clone()));
            }
        }
        SparseMatrix { ncols: columns.len(), rows }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, Scalar)>) {
        let row = sparse_from(entries);
        assert!(row.last().map_or(true, |(c, _)| *c < self.ncols), "column out of range");
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    fn reduce(&self) -> Reducer {
        let mut red = Reducer::new(self.ncols);
        for r in &self.rows {
            red.insert(r.clone());
        }
        red
    }

    pub fn rank(&self) -> usize {
        self.reduce().rows.len()
    }

    /// A basis of `{x : Mx = 0}`, one vector per free column, in the
    /// standard RREF normalization (free coordinate 1).
    pub fn kernel(&self) -> Vec<SparseVec> {
        let red = self.reduce();
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if red.row_of_pivot.contains_key(&f) {
                continue;
            }
            let mut v = vec![(f, Scalar::one())];
            for (ri, row) in red.rows.iter().enumerate() {
                if let Some(x) = lookup(row, f) {
                    v.push((red.pivot_of_row[ri], -x));
                }
            }
            v.sort_by_key(|(k, _)| *k);
            out.push(v);
        }
        out
    }

    /// `M·x` for a sparse `x`.
    pub fn apply(&self, x: &SparseVec) -> Vec<Scalar> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc = Scalar::zero();
                for (c, v) in row {
                    if let Some(xv) = lookup(x, *c) {
                        acc += &(v * xv);
                    }
                }
                acc
            })
            .collect()
    }
}

/// A factorization of a system with full column rank, reusable for any
/// right-hand side over any coefficient space.
#[derive(Clone, Debug)]
pub struct Factorization {
    nrows: usize,
    ncols: usize,
    /// `x_j = Σ_r solution[j][r]·b_r`.
    solution: Vec<SparseVec>,
    /// Each combination must vanish on a consistent right-hand side.
    consistency: Vec<SparseVec>,
}

impl Factorization {
    pub fn new(m: &SparseMatrix) -> Result<Self> {
        let nc = m.ncols;
        let mut red = Reducer::new(nc);
        let mut consistency = Vec::new();
        for (ri, row) in m.rows.iter().enumerate() {
            let mut aug = row.clone();
            aug.push((nc + ri, Scalar::one()));
            if let Some(rest) = red.insert(aug) {
                consistency.push(rest.into_iter().map(|(c, v)| (c - nc, v)).collect());
            }
        }
        if red.rows.len() != nc {
            return Err(Error::Internal(format!(
                "linear system is not uniquely solvable: rank {} < {} unknowns",
                red.rows.len(),
                nc
            )));
        }
        let mut solution = vec![Vec::new(); nc];
        for (ri, row) in red.rows.into_iter().enumerate() {
            let p = red.pivot_of_row[ri];
            debug_assert!(row.iter().all(|(c, _)| *c == p || *c >= nc));
            solution[p] = row.into_iter().filter(|(c, _)| *c >= nc).map(|(c, v)| (c - nc, v)).collect();
        }
        Ok(Factorization { nrows: m.rows.len(), ncols: nc, solution, consistency })
    }

    pub fn nunknowns(&self) -> usize {
        self.ncols
    }

    pub fn nequations(&self) -> usize {
        self.nrows
    }

    fn combine<C: Coefficient>(combo: &SparseVec, rhs: &[C]) -> C {
        let mut acc = C::zero();
        for (r, v) in combo {
            acc.add_scaled(&rhs[*r], v);
        }
        acc
    }

    /// Solves `M x = b`; fails if `b` is not in the column space.
    pub fn solve<C: Coefficient>(&self, rhs: &[C]) -> Result<Vec<C>> {
        if rhs.len() != self.nrows {
            return Err(Error::InvalidArgument("right-hand side has the wrong length".into()));
        }
        for (n, combo) in self.consistency.iter().enumerate() {
            let r = Self::combine(combo, rhs);
            if !r.is_zero() {
                return Err(Error::Internal(format!("inconsistent linear system (condition {n} gives {r:?})")));
            }
        }
        Ok(self.solution.iter().map(|c| Self::combine(c, rhs)).collect())
    }
}
