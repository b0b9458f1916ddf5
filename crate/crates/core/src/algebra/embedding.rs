use super::chain::Chain;
use super::lie::{AlgebraElement, AlgebraKind, BasisIndex, GradedAlgebra};
use super::matrix::Matrix;
use super::ops::codifferential;
use crate::error::{Error, Result};
use crate::linalg::{sparse_from, SparseVec};
use crate::scalar::{Coefficient, Scalar};

/// Block embedding `so(l,l+1) → so(l+1,l+1)`.
///
/// Rows and columns of a `g` matrix (top block, middle, bottom block) go to
/// `g̃` positions (`e_1..e_l`, both `e_0` and `f_0`, `f_1..f_l`); an entry in
/// the middle row or column is copied to both middle positions with factor
/// `1/√2`.
pub fn alpha_matrix(l: usize, m: &Matrix) -> Result<Matrix> {
    if m.size() != 2 * l + 1 {
        return Err(Error::InvalidArgument("not a g matrix".into()));
    }
    let mid = l;
    let place = |r: usize| -> Vec<usize> {
        if r < l {
            vec![r + 1]
        } else if r == mid {
            vec![0, l + 1]
        } else {
            vec![r + 1]
        }
    };
    let mut out = Matrix::zero(2 * l + 2);
    for (r, c, v) in m.entries() {
        if r == mid && c == mid {
            return Err(Error::InvalidArgument("matrix has a middle diagonal entry".into()));
        }
        let v = if r == mid || c == mid { v * &Scalar::inv_sqrt2() } else { v.clone() };
        for &rr in &place(r) {
            for &cc in &place(c) {
                out.add_entry(rr, cc, &v);
            }
        }
    }
    Ok(out)
}

/// The map `φ: p₊ → p̃₊` on matrices. Only the `p₊` blocks of a `g` matrix
/// (bottom-middle, middle-top and bottom-top) may be occupied.
pub fn phi_matrix(l: usize, m: &Matrix) -> Result<Matrix> {
    if m.size() != 2 * l + 1 {
        return Err(Error::InvalidArgument("not a g matrix".into()));
    }
    let mid = l;
    let s2 = Scalar::sqrt2();
    let mut out = Matrix::zero(2 * l + 2);
    for (r, c, v) in m.entries() {
        let bottom = r > mid;
        if bottom && c == mid {
            out.add_entry(r + 1, 0, &(v * &s2));
        } else if r == mid && c < l {
            out.add_entry(l + 1, c + 1, &(v * &s2));
        } else if bottom && c < l {
            out.add_entry(r + 1, c + 1, v);
        } else {
            return Err(Error::InvalidArgument("φ is only defined on p₊".into()));
        }
    }
    Ok(out)
}

/// `g`, `g̃` and the maps between them, with basis images precomputed.
#[derive(Clone, Debug)]
pub struct Embedding {
    g: GradedAlgebra,
    gt: GradedAlgebra,
    alpha: Vec<SparseVec>,
    phi: Vec<Option<SparseVec>>,
    delta_upper: Vec<SparseVec>,
    delta_lower: Vec<SparseVec>,
}

impl Embedding {
    pub fn new(l: usize) -> Result<Self> {
        let g = GradedAlgebra::new(AlgebraKind::G, l)?;
        let gt = GradedAlgebra::new(AlgebraKind::GTilde, l)?;
        let mut alpha = Vec::with_capacity(g.dim());
        let mut phi = Vec::with_capacity(g.dim());
        for k in 0..g.dim() {
            alpha.push(gt.decompose(&alpha_matrix(l, g.matrix(k))?)?);
            phi.push(if g.grade(k) > 0 { Some(gt.decompose(&phi_matrix(l, g.matrix(k))?)?) } else { None });
        }
        let s2 = Scalar::sqrt2();
        let two = Scalar::from_int(2);
        let combine = |tilde: usize, a: &SparseVec| -> SparseVec {
            let mut v = vec![(tilde, two.clone())];
            v.extend(a.iter().map(|(k, x)| (*k, -&(x * &s2))));
            sparse_from(v)
        };
        let mut delta_upper = Vec::new();
        let mut delta_lower = Vec::new();
        for i in 0..l {
            let up = gt.idx(BasisIndex::UpperPair(0, i + 1));
            let lo = gt.idx(BasisIndex::LowerPair(0, i + 1));
            delta_upper.push(combine(up, &alpha[g.idx(BasisIndex::Upper(i))]));
            delta_lower.push(combine(lo, &alpha[g.idx(BasisIndex::Lower(i))]));
        }
        Ok(Embedding { g, gt, alpha, phi, delta_upper, delta_lower })
    }

    pub fn l(&self) -> usize {
        self.g.l()
    }

    pub fn g(&self) -> &GradedAlgebra {
        &self.g
    }

    pub fn gt(&self) -> &GradedAlgebra {
        &self.gt
    }

    pub fn alpha(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if x.kind() != AlgebraKind::G || x.l() != self.l() {
            return Err(Error::InvalidArgument("α is defined on g".into()));
        }
        Ok(AlgebraElement::new(AlgebraKind::GTilde, self.l(), alpha_matrix(self.l(), x.matrix())?))
    }

    pub fn phi(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if x.kind() != AlgebraKind::G || x.l() != self.l() {
            return Err(Error::InvalidArgument("φ is defined on p₊ ⊂ g".into()));
        }
        Ok(AlgebraElement::new(AlgebraKind::GTilde, self.l(), phi_matrix(self.l(), x.matrix())?))
    }

    /// `g̃` coordinates of `α(E_k)`.
    pub fn alpha_basis(&self, k: usize) -> &SparseVec {
        &self.alpha[k]
    }

    pub fn alpha_coords(&self, v: &SparseVec) -> SparseVec {
        sparse_from(v.iter().flat_map(|(k, s)| self.alpha[*k].iter().map(move |(t, x)| (*t, s * x))))
    }

    /// `g̃` coordinates of `φ(E_k)` for `E_k ∈ p₊`.
    pub fn phi_basis(&self, k: usize) -> Option<&SparseVec> {
        self.phi[k].as_ref()
    }

    /// `ΔẼ^i = 2Ẽ^[0i] − √2 α(E^i)` for the 0-based `g` index `i`.
    pub fn delta_upper(&self, i: usize) -> &SparseVec {
        &self.delta_upper[i]
    }

    /// `ΔẼ_i = 2Ẽ_[0i] − √2 α(E_i)`.
    pub fn delta_lower(&self, i: usize) -> &SparseVec {
        &self.delta_lower[i]
    }

    /// `φ` on chains: `φ` on every slot and `α` on the target.
    pub fn phi_chain<C: Coefficient>(&self, c: &Chain<C>) -> Result<Chain<C>> {
        c.check_positive(&self.g)?;
        let mut out = Chain::new(c.degree());
        for (slots, target, coef) in c.terms() {
            let mut partial: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), Scalar::one())];
            for &s in slots {
                let img = self.phi[s].as_ref().expect("slot in p₊");
                let mut next = Vec::new();
                for (pre, x) in &partial {
                    for (t, y) in img {
                        let mut p = pre.clone();
                        p.push(*t);
                        next.push((p, x * y));
                    }
                }
                partial = next;
            }
            for (sl, x) in partial {
                for (t, y) in &self.alpha[target] {
                    out.add_term(sl.clone(), *t, coef, &(&x * y));
                }
            }
        }
        Ok(out)
    }

    /// `[∂*, φ] = ∂̃*∘φ − φ∘∂*` on 2-chains, computed from the definitions.
    /// The result is a 1-chain over `g̃`.
    pub fn commutator_operator(&self, c: &Chain<Scalar>) -> Result<Chain<Scalar>> {
        if c.degree() != 2 {
            return Err(Error::InvalidArgument("[∂*, φ] is evaluated on 2-chains".into()));
        }
        let mut out = codifferential(&self.gt, &self.phi_chain(c)?)?;
        let rhs = self.phi_chain(&codifferential(&self.g, c)?)?;
        out.add_chain(&rhs, &Scalar::from_int(-1));
        Ok(out)
    }

    /// The three closed forms of `[∂*, φ]` by slot type:
    /// `E^[ij]∧E^[kl]⊗X ↦ 0`,
    /// `E^i∧E^[jk]⊗X ↦ −(1/√2) Ẽ^[jk]⊗[ΔẼ^i, αX]`,
    /// `E^i∧E^j⊗X ↦ Ẽ^[ij]⊗αX + Ẽ^[0i]⊗[ΔẼ^j, αX] − Ẽ^[0j]⊗[ΔẼ^i, αX]`.
    pub fn closed_form(&self, c: &Chain<Scalar>) -> Result<Chain<Scalar>> {
        if c.degree() != 2 {
            return Err(Error::InvalidArgument("closed forms are stated for 2-chains".into()));
        }
        c.check_positive(&self.g)?;
        let gt = &self.gt;
        let mut out = Chain::new(1);
        for (slots, target, coef) in c.terms() {
            let ax = &self.alpha[target];
            let with_delta = |i: usize| gt.bracket_coords(&self.delta_upper[i], ax);
            match (self.g.basis_index(slots[0]), self.g.basis_index(slots[1])) {
                (BasisIndex::UpperPair(..), BasisIndex::UpperPair(..)) => {}
                (BasisIndex::Upper(i), BasisIndex::UpperPair(j, k)) => {
                    let slot = gt.idx(BasisIndex::UpperPair(j + 1, k + 1));
                    let f = -Scalar::inv_sqrt2();
                    for (t, v) in with_delta(i) {
                        out.add_term(vec![slot], t, coef, &(&f * &v));
                    }
                }
                (BasisIndex::Upper(i), BasisIndex::Upper(j)) => {
                    let sij = gt.idx(BasisIndex::UpperPair(i + 1, j + 1));
                    for (t, v) in ax {
                        out.add_term(vec![sij], *t, coef, v);
                    }
                    let s0i = gt.idx(BasisIndex::UpperPair(0, i + 1));
                    let s0j = gt.idx(BasisIndex::UpperPair(0, j + 1));
                    for (t, v) in with_delta(j) {
                        out.add_term(vec![s0i], t, coef, &v);
                    }
                    for (t, v) in with_delta(i) {
                        out.add_term(vec![s0j], t, coef, &-v);
                    }
                }
                _ => return Err(Error::Internal("unexpected slot pair in a 2-chain".into())),
            }
        }
        Ok(out)
    }

    /// True iff `[∂*, φ]` annihilates the chain, i.e. the chain induces a
    /// normal curvature on the extended geometry.
    pub fn kappa11_normality_test(&self, c: &Chain<Scalar>) -> Result<bool> {
        Ok(self.commutator_operator(c)?.is_zero())
    }
}
