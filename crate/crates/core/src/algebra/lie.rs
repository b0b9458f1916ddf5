use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::linalg::{sparse_from, SparseVec};
use crate::scalar::Scalar;

/// Which of the two algebras an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraKind {
    /// `g = so(l, l+1)`, |2|-graded, matrices of size `2l+1`.
    G,
    /// `g̃ = so(l+1, l+1)`, |1|-graded, matrices of size `2l+2`.
    GTilde,
}

/// Names of basis elements.
///
/// For `g` the indices are 0-based positions `0..l` (displayed 1-based).
/// For `g̃` they run over `0..=l`, where `0` is the extra index and `i ≥ 1`
/// corresponds to the `g` index `i − 1`; they are displayed unchanged.
/// Pairs always satisfy `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisIndex {
    /// `E_i` (grade −1 in `g`).
    Lower(usize),
    /// `E_[ij]` (grade −2 in `g`, −1 in `g̃`).
    LowerPair(usize, usize),
    /// `E^i_j` (grade 0).
    Mixed(usize, usize),
    /// `E^i` (grade 1 in `g`).
    Upper(usize),
    /// `E^[ij]` (grade 2 in `g`, 1 in `g̃`).
    UpperPair(usize, usize),
}

impl BasisIndex {
    pub fn label(&self, kind: AlgebraKind) -> String {
        let (o, head) = match kind {
            AlgebraKind::G => (1, "E"),
            AlgebraKind::GTilde => (0, "Et"),
        };
        match *self {
            BasisIndex::Lower(i) => format!("{head}_{}", i + o),
            BasisIndex::LowerPair(i, j) => format!("{head}_[{}{}]", i + o, j + o),
            BasisIndex::Mixed(i, j) => format!("{head}^{}_{}", i + o, j + o),
            BasisIndex::Upper(i) => format!("{head}^{}", i + o),
            BasisIndex::UpperPair(i, j) => format!("{head}^[{}{}]", i + o, j + o),
        }
    }
}

/// An element of `g` or `g̃` as a matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    kind: AlgebraKind,
    l: usize,
    matrix: Matrix,
}

impl AlgebraElement {
    pub fn new(kind: AlgebraKind, l: usize, matrix: Matrix) -> Self {
        AlgebraElement { kind, l, matrix }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    fn same(&self, other: &AlgebraElement) -> Result<()> {
        if self.kind != other.kind || self.l != other.l {
            return Err(Error::InvalidArgument("elements of different algebras".into()));
        }
        Ok(())
    }

    pub fn bracket(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.same(other)?;
        Ok(AlgebraElement::new(self.kind, self.l, self.matrix.commutator(&other.matrix)))
    }

    /// The normalized trace pairing `−½ tr(xy)`.
    pub fn pairing(&self, other: &AlgebraElement) -> Result<Scalar> {
        self.same(other)?;
        Ok(&self.matrix.trace_product(&other.matrix) * &Scalar::from_ratio(-1, 2))
    }

    /// The raw trace form `tr(xy)`.
    pub fn trace_form(&self, other: &AlgebraElement) -> Result<Scalar> {
        self.same(other)?;
        Ok(self.matrix.trace_product(&other.matrix))
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.same(other)?;
        let mut m = self.matrix.clone();
        m.add_scaled(&other.matrix, &Scalar::one());
        Ok(AlgebraElement::new(self.kind, self.l, m))
    }

    pub fn scale(&self, s: &Scalar) -> AlgebraElement {
        AlgebraElement::new(self.kind, self.l, self.matrix.scale(s))
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}(l={}) {:?}", self.kind, self.l, self.matrix)
    }
}

/// A graded matrix Lie algebra with a fixed basis, its structure constants
/// and the trace pairing.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    kind: AlgebraKind,
    l: usize,
    size: usize,
    basis: Vec<BasisIndex>,
    matrices: Vec<Matrix>,
    grades: Vec<i32>,
    lookup: HashMap<BasisIndex, usize>,
    /// For each basis element, an entry that no other basis matrix touches,
    /// with the element's value there.
    probes: Vec<(usize, usize, Scalar)>,
    brackets: Vec<SparseVec>,
    pairings: Vec<SparseVec>,
    /// `dual[a]`: the basis element pairing to 1 with `a` (defined for
    /// nonzero grades).
    dual: Vec<Option<usize>>,
    form: Matrix,
}

fn e(n: usize, r: usize, c: usize) -> Matrix {
    Matrix::unit(n, r, c)
}

fn diff(a: Matrix, b: Matrix) -> Matrix {
    let mut m = a;
    m.add_scaled(&b, &Scalar::from_int(-1));
    m
}

fn g_basis(l: usize) -> (usize, Vec<(BasisIndex, i32, Matrix)>, Matrix) {
    let n = 2 * l + 1;
    let t = |i: usize| i;
    let m = l;
    let b = |i: usize| l + 1 + i;
    let mut out = Vec::new();
    for i in 0..l {
        for j in i + 1..l {
            out.push((BasisIndex::LowerPair(i, j), -2, diff(e(n, t(j), b(i)), e(n, t(i), b(j)))));
        }
    }
    for i in 0..l {
        out.push((BasisIndex::Lower(i), -1, diff(e(n, t(i), m), e(n, m, b(i)))));
    }
    for i in 0..l {
        for j in 0..l {
            out.push((BasisIndex::Mixed(i, j), 0, diff(e(n, t(i), t(j)), e(n, b(j), b(i)))));
        }
    }
    for i in 0..l {
        out.push((BasisIndex::Upper(i), 1, diff(e(n, b(i), m), e(n, m, t(i)))));
    }
    for i in 0..l {
        for j in i + 1..l {
            out.push((BasisIndex::UpperPair(i, j), 2, diff(e(n, b(j), t(i)), e(n, b(i), t(j)))));
        }
    }
    let mut form = Matrix::zero(n);
    for i in 0..l {
        form.add_entry(t(i), b(i), &Scalar::one());
        form.add_entry(b(i), t(i), &Scalar::one());
    }
    form.add_entry(m, m, &Scalar::one());
    (n, out, form)
}

fn gt_basis(l: usize) -> (usize, Vec<(BasisIndex, i32, Matrix)>, Matrix) {
    let n = 2 * l + 2;
    let ev = |a: usize| a;
    let fv = |a: usize| l + 1 + a;
    let mut out = Vec::new();
    for a in 0..=l {
        for c in a + 1..=l {
            out.push((BasisIndex::LowerPair(a, c), -1, diff(e(n, ev(c), fv(a)), e(n, ev(a), fv(c)))));
        }
    }
    for a in 0..=l {
        for c in 0..=l {
            out.push((BasisIndex::Mixed(a, c), 0, diff(e(n, ev(a), ev(c)), e(n, fv(c), fv(a)))));
        }
    }
    for a in 0..=l {
        for c in a + 1..=l {
            out.push((BasisIndex::UpperPair(a, c), 1, diff(e(n, fv(c), ev(a)), e(n, fv(a), ev(c)))));
        }
    }
    let mut form = Matrix::zero(n);
    for a in 0..=l {
        form.add_entry(ev(a), fv(a), &Scalar::one());
        form.add_entry(fv(a), ev(a), &Scalar::one());
    }
    (n, out, form)
}

impl GradedAlgebra {
    /// Builds the algebra, its structure constants and pairing table, and
    /// checks that every basis matrix preserves the defining form.
    pub fn new(kind: AlgebraKind, l: usize) -> Result<Self> {
        if l < 3 {
            return Err(Error::InvalidArgument(format!("algebras are built for l ≥ 3, got {l}")));
        }
        let (size, list, form) = match kind {
            AlgebraKind::G => g_basis(l),
            AlgebraKind::GTilde => gt_basis(l),
        };
        let mut basis = Vec::new();
        let mut grades = Vec::new();
        let mut matrices = Vec::new();
        for (idx, gr, m) in list {
            basis.push(idx);
            grades.push(gr);
            matrices.push(m);
        }
        let lookup = basis.iter().enumerate().map(|(k, b)| (*b, k)).collect();
        let mut owners: HashMap<(usize, usize), usize> = HashMap::new();
        for (k, m) in matrices.iter().enumerate() {
            for (r, c, _) in m.entries() {
                if owners.insert((r, c), k).is_some() {
                    return Err(Error::Internal("basis matrices share an entry".into()));
                }
            }
        }
        let probes = matrices
            .iter()
            .map(|m| {
                let (r, c, v) = m.entries().next().expect("nonzero basis matrix");
                (r, c, v.clone())
            })
            .collect();
        let mut alg = GradedAlgebra {
            kind,
            l,
            size,
            basis,
            matrices,
            grades,
            lookup,
            probes,
            brackets: Vec::new(),
            pairings: Vec::new(),
            dual: Vec::new(),
            form,
        };
        for m in &alg.matrices {
            if !alg.preserves_form(m) {
                return Err(Error::Internal("basis matrix does not preserve the form".into()));
            }
        }
        let d = alg.dim();
        let mut brackets = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                brackets.push(alg.decompose(&alg.matrices[a].commutator(&alg.matrices[b]))?);
            }
        }
        alg.brackets = brackets;
        let half = Scalar::from_ratio(-1, 2);
        alg.pairings = (0..d)
            .map(|a| {
                sparse_from((0..d).map(|b| (b, &alg.matrices[a].trace_product(&alg.matrices[b]) * &half)))
            })
            .collect();
        let mut dual = vec![None; d];
        for a in 0..d {
            if alg.grades[a] == 0 {
                continue;
            }
            let row = &alg.pairings[a];
            if row.len() != 1 || !row[0].1.is_one() {
                return Err(Error::Internal(format!("{} has no unit dual", alg.label(a))));
            }
            dual[a] = Some(row[0].0);
        }
        alg.dual = dual;
        Ok(alg)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Matrix size.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisIndex] {
        &self.basis
    }

    pub fn basis_index(&self, k: usize) -> BasisIndex {
        self.basis[k]
    }

    /// Position of a named basis element; an unnormalized pair `[ji]`
    /// resolves to `[ij]` with sign −1.
    pub fn index(&self, b: BasisIndex) -> Option<(usize, i64)> {
        let (b, s) = match b {
            BasisIndex::LowerPair(i, j) if i > j => (BasisIndex::LowerPair(j, i), -1),
            BasisIndex::UpperPair(i, j) if i > j => (BasisIndex::UpperPair(j, i), -1),
            other => (other, 1),
        };
        self.lookup.get(&b).map(|&k| (k, s))
    }

    /// Position of a normalized basis element; panics on unknown names.
    pub fn idx(&self, b: BasisIndex) -> usize {
        match self.index(b) {
            Some((k, 1)) => k,
            _ => panic!("{b:?} is not a normalized basis element"),
        }
    }

    pub fn label(&self, k: usize) -> String {
        self.basis[k].label(self.kind)
    }

    pub fn grade(&self, k: usize) -> i32 {
        self.grades[k]
    }

    pub fn max_grade(&self) -> i32 {
        match self.kind {
            AlgebraKind::G => 2,
            AlgebraKind::GTilde => 1,
        }
    }

    pub fn indices_of_grade(&self, g: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.grades[k] == g).collect()
    }

    /// Basis positions of `p₊`.
    pub fn positive(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.grades[k] > 0).collect()
    }

    /// Basis positions of `g_−`.
    pub fn negative(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.grades[k] < 0).collect()
    }

    pub fn matrix(&self, k: usize) -> &Matrix {
        &self.matrices[k]
    }

    pub fn element(&self, k: usize) -> AlgebraElement {
        AlgebraElement::new(self.kind, self.l, self.matrices[k].clone())
    }

    pub fn named(&self, b: BasisIndex) -> AlgebraElement {
        let (k, s) = self.index(b).unwrap_or_else(|| panic!("unknown basis element {b:?}"));
        self.element(k).scale(&Scalar::from_int(s))
    }

    pub fn from_coords(&self, v: &SparseVec) -> AlgebraElement {
        let mut m = Matrix::zero(self.size);
        for (k, s) in v {
            m.add_scaled(&self.matrices[*k], s);
        }
        AlgebraElement::new(self.kind, self.l, m)
    }

    pub fn preserves_form(&self, m: &Matrix) -> bool {
        let mut lhs = m.transpose().mul(&self.form);
        lhs.add_scaled(&self.form.mul(m), &Scalar::one());
        lhs.is_zero()
    }

    /// The defining symmetric form.
    pub fn form(&self) -> &Matrix {
        &self.form
    }

    /// Basis coordinates of a matrix; fails if the matrix is not in the
    /// algebra.
    pub fn decompose(&self, m: &Matrix) -> Result<SparseVec> {
        if m.size() != self.size {
            return Err(Error::InvalidArgument("matrix of the wrong size".into()));
        }
        let mut coords = Vec::new();
        let mut rebuilt = Matrix::zero(self.size);
        for (k, (r, c, v)) in self.probes.iter().enumerate() {
            let x = m.get(*r, *c);
            if !x.is_zero() {
                let coef = x.checked_div(v)?;
                rebuilt.add_scaled(&self.matrices[k], &coef);
                coords.push((k, coef));
            }
        }
        if rebuilt != *m {
            return Err(Error::InvalidArgument(format!("matrix is not in {:?}(l={})", self.kind, self.l)));
        }
        Ok(coords)
    }

    pub fn coords(&self, x: &AlgebraElement) -> Result<SparseVec> {
        if x.kind != self.kind || x.l != self.l {
            return Err(Error::InvalidArgument("element of a different algebra".into()));
        }
        self.decompose(&x.matrix)
    }

    /// Coordinates of `[E_a, E_b]`.
    pub fn bracket_basis(&self, a: usize, b: usize) -> &SparseVec {
        &self.brackets[a * self.dim() + b]
    }

    /// Coordinates of `[E_a, v]`.
    pub fn bracket_with(&self, a: usize, v: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for (b, s) in v {
            for (c, t) in self.bracket_basis(a, *b) {
                out.push((*c, s * t));
            }
        }
        sparse_from(out)
    }

    pub fn bracket_coords(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for (a, s) in u {
            for (c, t) in self.bracket_with(*a, v) {
                out.push((c, s * &t));
            }
        }
        sparse_from(out)
    }

    /// `−½ tr(E_a E_b)`.
    pub fn pairing_basis(&self, a: usize, b: usize) -> Scalar {
        let row = &self.pairings[a];
        row.binary_search_by_key(&b, |(k, _)| *k).map(|p| row[p].1.clone()).unwrap_or_else(|_| Scalar::zero())
    }

    /// The basis element dual to `a` under the pairing (nonzero grades only).
    pub fn dual(&self, a: usize) -> Option<usize> {
        self.dual[a]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use BasisIndex::*;

    #[test]
    fn g_normalizations() {
        let g = GradedAlgebra::new(AlgebraKind::G, 4).unwrap();
        assert_eq!(g.dim(), 36);
        let tr = |a, b| g.named(a).trace_form(&g.named(b)).unwrap();
        assert_eq!(tr(LowerPair(0, 1), UpperPair(0, 1)), Scalar::from_int(-2));
        assert_eq!(tr(Lower(2), Upper(2)), Scalar::from_int(-2));
        assert_eq!(tr(Mixed(0, 1), Mixed(1, 0)), Scalar::from_int(2));
        let e1 = g.named(Lower(0));
        assert!(e1.bracket(&e1).unwrap().is_zero());
        assert_eq!(e1.bracket(&g.named(Lower(1))).unwrap(), g.named(LowerPair(0, 1)));
        assert_eq!(g.named(Mixed(0, 1)).bracket(&g.named(Lower(1))).unwrap(), g.named(Lower(0)));
        assert_eq!(g.named(Upper(0)).pairing(&g.named(Lower(1))).unwrap(), Scalar::zero());
        assert_eq!(g.named(Mixed(0, 1)).pairing(&g.named(Mixed(1, 0))).unwrap(), Scalar::from_int(-1));
        assert_eq!(g.named(LowerPair(1, 0)), g.named(LowerPair(0, 1)).scale(&Scalar::from_int(-1)));
    }

    #[test]
    fn grades_add_under_brackets() {
        for kind in [AlgebraKind::G, AlgebraKind::GTilde] {
            for l in 3..=5 {
                let g = GradedAlgebra::new(kind, l).unwrap();
                for a in 0..g.dim() {
                    for b in 0..g.dim() {
                        for (c, _) in g.bracket_basis(a, b) {
                            assert_eq!(g.grade(*c), g.grade(a) + g.grade(b));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn top_grade_is_abelian() {
        let g = GradedAlgebra::new(AlgebraKind::G, 4).unwrap();
        let x = g.named(UpperPair(0, 1)).bracket(&g.named(UpperPair(2, 3))).unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn decompose_rejects_foreign_matrices() {
        let g = GradedAlgebra::new(AlgebraKind::G, 3).unwrap();
        assert!(g.decompose(&Matrix::unit(7, 0, 0)).is_err());
        let v = g.decompose(g.matrix(5)).unwrap();
        assert_eq!(v, vec![(5, Scalar::one())]);
    }

    #[test]
    fn gtilde_dimension_and_duals() {
        let g = GradedAlgebra::new(AlgebraKind::GTilde, 4).unwrap();
        assert_eq!(g.dim(), 45);
        for a in g.positive() {
            let d = g.dual(a).unwrap();
            assert_eq!(g.grade(d), -1);
            assert_eq!(g.dual(d), Some(a));
        }
    }
}
