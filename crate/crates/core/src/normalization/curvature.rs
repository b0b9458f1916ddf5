//! Curvature of a connection given by its data `(A, C, E, F)` on an adapted
//! frame, computed pointwise from
//! `Ω(Ξ_a, Ξ_b) = Ξ_a ω(Ξ_b) − Ξ_b ω(Ξ_a) − ω([Ξ_a, Ξ_b]) + [ω(Ξ_a), ω(Ξ_b)]`.
//!
//! The connection form is
//! `ω = Σ ω^i E_i − Σ_{i<j} ω^[ij] E_[ij] + Σ ω^i_j E^i_j + Σ ω_i E^i`
//! with `ω^[ij] = θ^[ij]`, `ω^i = θ^i + C^i_P θ^P`, `ω^i_j = A^i_{kj} ω^k +
//! E^i_{jP} ω^P` and `ω_i = F_{ki} ω^k`. Pair indices `P` run over `j < k`.
//! `Ξ` is the frame dual to `{ω^i, ω^P}`: `Ξ_i = X_i`, `Ξ_P = X_P − C^m_P X_m`.

use std::collections::BTreeMap;

use crate::algebra::{BasisIndex, Chain, GradedAlgebra};
use crate::chart::{npairs, pairs};
use crate::geometry::{Frame, StructureFunctions, VectorField};
use crate::poly::Polynomial;
use crate::scalar::{Coefficient, Scalar};

use super::tensor::{Slot, Tensor};

/// The connection data; `A` is indexed `[i, k, j]` for `A^i_{kj}` (upper,
/// form index, column), `C` as `[i, P]`, `E` as `[i, j, P]`, `F` as `[k, i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionData {
    pub a: Tensor,
    pub c: Tensor,
    pub e: Tensor,
    pub f: Tensor,
}

impl ConnectionData {
    pub fn zero(l: usize) -> Self {
        use Slot::*;
        ConnectionData {
            a: Tensor::new("A", l, &[UpperSingle, LowerSingle, LowerSingle]),
            c: Tensor::new("C", l, &[UpperSingle, LowerPair]),
            e: Tensor::new("E", l, &[UpperSingle, LowerSingle, LowerPair]),
            f: Tensor::new("F", l, &[LowerSingle, LowerSingle]),
        }
    }
}

type PolyVec = Vec<(usize, Polynomial)>;

/// Brackets and derivatives of the underlying frame `X`.
pub(crate) struct Calculus<'a> {
    l: usize,
    n: usize,
    fields: Option<&'a [VectorField]>,
    /// `[X_a, X_b]` in frame coordinates, at `a * n + b`.
    brackets: Vec<PolyVec>,
}

impl<'a> Calculus<'a> {
    pub(crate) fn new(frame: &'a Frame, sf: &StructureFunctions) -> Self {
        let n = frame.chart().dim();
        let mut brackets = vec![Vec::new(); n * n];
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                for e in 0..n {
                    let v = sf.full(e, a, b);
                    if !v.is_zero() {
                        brackets[a * n + b].push((e, -&v));
                    }
                }
            }
        }
        Calculus { l: frame.l(), n, fields: Some(frame.fields()), brackets }
    }

    /// The flat model with constant data only: `[X_i, X_j] = −X_[ij]`,
    /// all other brackets and all derivatives vanish.
    pub(crate) fn flat(l: usize) -> Self {
        let n = l + npairs(l);
        let mut brackets = vec![Vec::new(); n * n];
        for (p, (i, j)) in pairs(l).into_iter().enumerate() {
            brackets[i * n + j].push((l + p, Polynomial::from_int(-1)));
            brackets[j * n + i].push((l + p, Polynomial::from_int(1)));
        }
        Calculus { l, n, fields: None, brackets }
    }

    fn derive(&self, e: usize, p: &Polynomial) -> Polynomial {
        match self.fields {
            Some(f) => f[e].apply(p),
            None => {
                debug_assert!(p.is_constant(), "the flat calculus only takes constant data");
                Polynomial::zero()
            }
        }
    }
}

fn push(acc: &mut [Polynomial], i: usize, p: &Polynomial, s: i64) {
    if !p.is_zero() {
        acc[i].add_scaled(p, &Scalar::from_int(s));
    }
}

fn sparse(acc: Vec<Polynomial>) -> PolyVec {
    acc.into_iter().enumerate().filter(|(_, p)| !p.is_zero()).collect()
}

/// `Ω(Ξ_a, Ξ_b)` for frame positions `a < b`, as sparse `g` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Curvature {
    l: usize,
    values: BTreeMap<(usize, usize), PolyVec>,
}

/// Which frame-position pairs to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Pairs {
    All,
    /// Pairs with at least one single slot (enough for homogeneity 1).
    NotPairPair,
}

pub(crate) fn curvature(calc: &Calculus, g: &GradedAlgebra, data: &ConnectionData, which: Pairs) -> Curvature {
    let (l, n) = (calc.l, calc.n);
    let ps = pairs(l);
    let dim = g.dim();

    // Ξ_a = Σ_e M_ae X_e
    let mut m: Vec<PolyVec> = (0..n).map(|a| vec![(a, Polynomial::from_int(1))]).collect();
    for p in 0..ps.len() {
        for i in 0..l {
            let c = data.c.get(&[i, p]);
            if !c.is_zero() {
                m[l + p].push((i, -&c));
            }
        }
    }

    // ω(Ξ_a)
    let mut omega: Vec<PolyVec> = Vec::with_capacity(n);
    for r in 0..l {
        let mut v = vec![(g.idx(BasisIndex::Lower(r)), Polynomial::from_int(1))];
        for i in 0..l {
            for j in 0..l {
                v.push((g.idx(BasisIndex::Mixed(i, j)), data.a.get(&[i, r, j])));
            }
            v.push((g.idx(BasisIndex::Upper(i)), data.f.get(&[r, i])));
        }
        omega.push(v.into_iter().filter(|(_, p)| !p.is_zero()).collect());
    }
    for (p, &(s, t)) in ps.iter().enumerate() {
        let mut v = vec![(g.idx(BasisIndex::LowerPair(s, t)), Polynomial::from_int(-1))];
        for i in 0..l {
            for j in 0..l {
                v.push((g.idx(BasisIndex::Mixed(i, j)), data.e.get(&[i, j, p])));
            }
        }
        omega.push(v.into_iter().filter(|(_, p)| !p.is_zero()).collect());
    }

    let xi_apply = |a: usize, p: &Polynomial| -> Polynomial {
        let mut acc = Polynomial::zero();
        if p.is_constant() {
            return acc;
        }
        for (e, mae) in &m[a] {
            let d = calc.derive(*e, p);
            if !d.is_zero() {
                acc.add_scaled(&(mae * &d), &Scalar::one());
            }
        }
        acc
    };

    let mut values = BTreeMap::new();
    for a in 0..n {
        for b in a + 1..n {
            if which == Pairs::NotPairPair && a >= l {
                continue;
            }
            // [Ξ_a, Ξ_b] in X coordinates
            let mut br = vec![Polynomial::zero(); n];
            for (e, mae) in &m[a] {
                for (f, mbf) in &m[b] {
                    let coef = mae * mbf;
                    for (h, c) in &calc.brackets[e * n + f] {
                        push(&mut br, *h, &(&coef * c), 1);
                    }
                }
            }
            for (f, mbf) in &m[b] {
                push(&mut br, *f, &xi_apply(a, mbf), 1);
            }
            for (e, mae) in &m[a] {
                push(&mut br, *e, &xi_apply(b, mae), -1);
            }
            // convert to Ξ coordinates: X_P = Ξ_P + C^m_P Ξ_m
            let mut xi = br.clone();
            for p in 0..ps.len() {
                if br[l + p].is_zero() {
                    continue;
                }
                for i in 0..l {
                    let c = data.c.get(&[i, p]);
                    if !c.is_zero() {
                        push(&mut xi, i, &(&br[l + p] * &c), 1);
                    }
                }
            }

            let mut acc = vec![Polynomial::zero(); dim];
            for (t, p) in &omega[b] {
                push(&mut acc, *t, &xi_apply(a, p), 1);
            }
            for (t, p) in &omega[a] {
                push(&mut acc, *t, &xi_apply(b, p), -1);
            }
            for (h, w) in xi.iter().enumerate() {
                if w.is_zero() {
                    continue;
                }
                for (t, p) in &omega[h] {
                    push(&mut acc, *t, &(w * p), -1);
                }
            }
            for (u, pu) in &omega[a] {
                for (v, pv) in &omega[b] {
                    let br = g.bracket_basis(*u, *v);
                    if br.is_empty() {
                        continue;
                    }
                    let prod = pu * pv;
                    for (t, s) in br {
                        acc[*t].add_scaled(&prod, s);
                    }
                }
            }
            let v = sparse(acc);
            if !v.is_empty() {
                values.insert((a, b), v);
            }
        }
    }
    Curvature { l, values }
}

/// The tensors read off from the curvature, through homogeneity 2.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensors {
    pub p: Tensor,
    pub q: Tensor,
    pub r: Tensor,
    pub s: Tensor,
    pub t: Tensor,
}

impl Curvature {
    pub fn l(&self) -> usize {
        self.l
    }

    /// `Ω(Ξ_a, Ξ_b)` coordinate along the `g` basis element `t`, for any
    /// order of `a` and `b`.
    pub fn component(&self, a: usize, b: usize, t: usize) -> Polynomial {
        let (lo, hi, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
        let v = self
            .values
            .get(&(lo, hi))
            .and_then(|v| v.iter().find(|(k, _)| *k == t))
            .map(|(_, p)| p.clone())
            .unwrap_or_default();
        if s < 0 {
            -&v
        } else {
            v
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Reads `P^{[ij]}_{r[st]} = Ω^[ij](Ξ_r, Ξ_[st])`, `Q^i_{jk} = Ω^i(Ξ_j, Ξ_k)`,
    /// `R^{[ij]}_{PQ} = Ω^[ij](Ξ_P, Ξ_Q)`, `S^i_{jP} = Ω^i(Ξ_j, Ξ_P)` and
    /// `T^i_{j[kl]} = Ω^i_j(Ξ_k, Ξ_l)`, where `Ω^[ij]` is minus the `E_[ij]`
    /// coordinate. `R` is stored for `P < Q` only.
    pub fn tensors(&self, g: &GradedAlgebra) -> CurvatureTensors {
        use Slot::*;
        let l = self.l;
        let ps = pairs(l);
        let np = ps.len();
        let mut out = CurvatureTensors {
            p: Tensor::new("P", l, &[UpperPair, LowerSingle, LowerPair]),
            q: Tensor::new("Q", l, &[UpperSingle, LowerPair]),
            r: Tensor::new("R", l, &[UpperPair, LowerPair, LowerPair]),
            s: Tensor::new("S", l, &[UpperSingle, LowerSingle, LowerPair]),
            t: Tensor::new("T", l, &[UpperSingle, LowerSingle, LowerPair]),
        };
        let lower_pair: Vec<usize> = ps.iter().map(|&(i, j)| g.idx(BasisIndex::LowerPair(i, j))).collect();
        for ij in 0..np {
            for r in 0..l {
                for st in 0..np {
                    out.p.set(vec![ij, r, st], -&self.component(r, l + st, lower_pair[ij]));
                }
            }
            for pp in 0..np {
                for qq in pp + 1..np {
                    out.r.set(vec![ij, pp, qq], -&self.component(l + pp, l + qq, lower_pair[ij]));
                }
            }
        }
        for i in 0..l {
            let ei = g.idx(BasisIndex::Lower(i));
            for (jk, &(j, k)) in ps.iter().enumerate() {
                out.q.set(vec![i, jk], self.component(j, k, ei));
            }
            for j in 0..l {
                let eij = g.idx(BasisIndex::Mixed(i, j));
                for (kl, &(k, ll)) in ps.iter().enumerate() {
                    out.s.set(vec![i, j, kl], self.component(j, l + kl, ei));
                    out.t.set(vec![i, j, kl], self.component(k, ll, eij));
                }
            }
        }
        out
    }

    /// The full curvature function as a 2-chain in `Λ²p₊ ⊗ g`. Under `ω`,
    /// `Ξ_r` corresponds to `E_r` and `Ξ_P` to `−E_P`.
    pub fn chain(&self, g: &GradedAlgebra) -> Chain<Polynomial> {
        let l = self.l;
        let ps = pairs(l);
        let slot = |a: usize| -> (usize, i64) {
            if a < l {
                (g.idx(BasisIndex::Upper(a)), 1)
            } else {
                let (s, t) = ps[a - l];
                (g.idx(BasisIndex::UpperPair(s, t)), -1)
            }
        };
        let mut c = Chain::new(2);
        for (&(a, b), v) in &self.values {
            let (za, sa) = slot(a);
            let (zb, sb) = slot(b);
            let s = Scalar::from_int(sa * sb);
            for (t, p) in v {
                c.add_term(vec![za, zb], *t, p, &s);
            }
        }
        c
    }
}

/// Assembles the degree-≤2 curvature chain from the tensors alone:
/// `P·E^r∧E^Q⊗E_[ij] + Q·E^j∧E^k⊗E_i − R·E^P∧E^Q⊗E_[ij] − S·E^j∧E^P⊗E_i
/// + T·E^k∧E^l⊗E^i_j`.
pub fn chain_from_tensors(g: &GradedAlgebra, t: &CurvatureTensors) -> Chain<Polynomial> {
    use BasisIndex::*;
    let l = g.l();
    let ps = pairs(l);
    let up = |i: usize| g.idx(Upper(i));
    let upp = |p: usize| g.idx(UpperPair(ps[p].0, ps[p].1));
    let lowp = |p: usize| g.idx(LowerPair(ps[p].0, ps[p].1));
    let one = Scalar::one();
    let minus = Scalar::from_int(-1);
    let mut c = Chain::new(2);
    for (idx, v) in t.p.nonzero() {
        c.add_term(vec![up(idx[1]), upp(idx[2])], lowp(idx[0]), v, &one);
    }
    for (idx, v) in t.q.nonzero() {
        let (j, k) = ps[idx[1]];
        c.add_term(vec![up(j), up(k)], g.idx(Lower(idx[0])), v, &one);
    }
    for (idx, v) in t.r.nonzero() {
        c.add_term(vec![upp(idx[1]), upp(idx[2])], lowp(idx[0]), v, &minus);
    }
    for (idx, v) in t.s.nonzero() {
        c.add_term(vec![up(idx[1]), upp(idx[2])], g.idx(Lower(idx[0])), v, &minus);
    }
    for (idx, v) in t.t.nonzero() {
        let (k, ll) = ps[idx[2]];
        c.add_term(vec![up(k), up(ll)], g.idx(Mixed(idx[0], idx[1])), v, &one);
    }
    c
}
