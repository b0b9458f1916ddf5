//! Exact verification battery for the algebra layer. Each check recomputes
//! its claim from matrices, so the battery doubles as an oracle for the
//! structure-constant tables.

use std::collections::HashMap;

use super::chain::{basis_terms, Chain, TermKey};
use super::embedding::Embedding;
use super::lie::{AlgebraKind, BasisIndex, GradedAlgebra};
use super::ops::{codifferential, differential};
use crate::error::Result;
use crate::linalg::{sparse_from, SparseMatrix, SparseVec};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, failures: Vec<String>) -> Check {
    Check {
        name: name.to_string(),
        passed: failures.is_empty(),
        detail: failures.into_iter().take(3).collect::<Vec<_>>().join("; "),
    }
}

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

/// Assigns consecutive row numbers to chain terms.
#[derive(Default)]
pub struct TermIndex {
    map: HashMap<TermKey, usize>,
}

impl TermIndex {
    pub fn get(&mut self, key: &TermKey) -> usize {
        let n = self.map.len();
        *self.map.entry(key.clone()).or_insert(n)
    }

    pub fn vector(&mut self, c: &Chain<Scalar>) -> SparseVec {
        sparse_from(c.terms().map(|(sl, t, v)| (self.get(&(sl.clone(), t)), v.clone())).collect::<Vec<_>>())
    }
}

/// The matrix whose columns are the given vectors.
pub fn from_columns(columns: &[SparseVec]) -> SparseMatrix {
    let mut rows: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col {
            rows.entry(*r).or_default().push((c, v.clone()));
        }
    }
    let mut m = SparseMatrix::new(columns.len());
    let mut keys: Vec<usize> = rows.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        m.push_row(rows.remove(&k).unwrap());
    }
    m
}

fn rank_of(vectors: &[SparseVec], ncols: usize) -> usize {
    let mut m = SparseMatrix::new(ncols);
    for v in vectors {
        m.push_row(v.iter().cloned());
    }
    m.rank()
}

/// Whether two families of vectors span the same subspace.
pub fn same_span(a: &[SparseVec], b: &[SparseVec], ncols: usize) -> bool {
    let ra = rank_of(a, ncols);
    let rb = rank_of(b, ncols);
    let both: Vec<SparseVec> = a.iter().chain(b).cloned().collect();
    ra == rb && rank_of(&both, ncols) == ra
}

fn unit(k: usize) -> SparseVec {
    vec![(k, Scalar::one())]
}

pub fn forms_preserved(alg: &GradedAlgebra) -> Check {
    let bad = (0..alg.dim()).filter(|&k| !alg.preserves_form(alg.matrix(k))).map(|k| alg.label(k)).collect();
    check(&format!("{:?} basis preserves the defining form", alg.kind()), bad)
}

pub fn bracket_normalization(g: &GradedAlgebra) -> Check {
    let mut bad = Vec::new();
    for i in 0..g.l() {
        for j in i + 1..g.l() {
            let x = g.named(BasisIndex::Lower(i)).bracket(&g.named(BasisIndex::Lower(j))).unwrap();
            if x != g.named(BasisIndex::LowerPair(i, j)) {
                bad.push(format!("[E_{},E_{}]", i + 1, j + 1));
            }
        }
    }
    check("[E_i, E_j] = E_[ij]", bad)
}

pub fn trace_form_values(g: &GradedAlgebra) -> Check {
    use BasisIndex::*;
    let l = g.l();
    let mut bad = Vec::new();
    let tr = |a, b| g.named(a).trace_form(&g.named(b)).unwrap();
    for i in 0..l {
        if tr(Lower(i), Upper(i)) != s(-2) {
            bad.push(format!("B(E_{0},E^{0})", i + 1));
        }
        for j in 0..l {
            if i != j && tr(Mixed(i, j), Mixed(j, i)) != s(2) {
                bad.push(format!("B(E^{}_{},E^{}_{})", i + 1, j + 1, j + 1, i + 1));
            }
            if i < j && tr(LowerPair(i, j), UpperPair(i, j)) != s(-2) {
                bad.push(format!("B(E_[{0}{1}],E^[{0}{1}])", i + 1, j + 1));
            }
        }
    }
    // after rescaling by −1/2 the negative and positive parts are dual bases
    for a in g.negative() {
        for b in g.positive() {
            let want = if g.dual(b) == Some(a) { s(1) } else { s(0) };
            if g.pairing_basis(a, b) != want {
                bad.push(format!("pairing({}, {})", g.label(a), g.label(b)));
            }
        }
    }
    check("trace form values and dual bases", bad)
}

pub fn grade_additivity(alg: &GradedAlgebra) -> Check {
    let mut bad = Vec::new();
    for a in 0..alg.dim() {
        for b in 0..alg.dim() {
            for (c, _) in alg.bracket_basis(a, b) {
                if alg.grade(*c) != alg.grade(a) + alg.grade(b) {
                    bad.push(format!("[{}, {}]", alg.label(a), alg.label(b)));
                }
            }
        }
    }
    check(&format!("{:?} grading is additive", alg.kind()), bad)
}

pub fn alpha_homomorphism(e: &Embedding) -> Check {
    let g = e.g();
    let mut bad = Vec::new();
    for a in 0..g.dim() {
        for b in 0..g.dim() {
            let lhs = e.alpha(&g.element(a).bracket(&g.element(b)).unwrap()).unwrap();
            let rhs = e.alpha(&g.element(a)).unwrap().bracket(&e.alpha(&g.element(b)).unwrap()).unwrap();
            if lhs != rhs {
                bad.push(format!("({}, {})", g.label(a), g.label(b)));
            }
        }
    }
    check("α is a Lie algebra homomorphism", bad)
}

pub fn alpha_phi_values(e: &Embedding) -> Check {
    use BasisIndex::*;
    let (g, gt) = (e.g(), e.gt());
    let mut bad = Vec::new();
    let h = Scalar::inv_sqrt2();
    for i in 0..g.l() {
        let want = gt.named(Mixed(i + 1, 0)).add(&gt.named(LowerPair(0, i + 1))).unwrap().scale(&h);
        if e.alpha(&g.named(Lower(i))).unwrap() != want {
            bad.push(format!("α(E_{})", i + 1));
        }
        if e.phi(&g.named(Upper(i))).unwrap() != gt.named(UpperPair(0, i + 1)).scale(&Scalar::sqrt2()) {
            bad.push(format!("φ(E^{})", i + 1));
        }
        for j in 0..g.l() {
            if e.alpha(&g.named(Mixed(i, j))).unwrap() != gt.named(Mixed(i + 1, j + 1)) {
                bad.push(format!("α(E^{}_{})", i + 1, j + 1));
            }
            if i < j {
                if e.alpha(&g.named(LowerPair(i, j))).unwrap() != gt.named(LowerPair(i + 1, j + 1)) {
                    bad.push(format!("α(E_[{}{}])", i + 1, j + 1));
                }
                if e.phi(&g.named(UpperPair(i, j))).unwrap() != gt.named(UpperPair(i + 1, j + 1)) {
                    bad.push(format!("φ(E^[{}{}])", i + 1, j + 1));
                }
            }
        }
    }
    check("values of α and φ on the basis", bad)
}

/// `pairing̃(φ(ξ), ᾱ(X̄)) = pairing(ξ, X̄)`, where `ᾱ(X̄)` is `α(X)`
/// projected to `g̃_−` and `X̄` is `X` projected to `g_−`.
pub fn phi_duality(e: &Embedding) -> Check {
    let (g, gt) = (e.g(), e.gt());
    let mut bad = Vec::new();
    for xi in g.positive() {
        let phi = gt.from_coords(e.phi_basis(xi).unwrap());
        for x in 0..g.dim() {
            let xbar: SparseVec = if g.grade(x) < 0 { unit(x) } else { Vec::new() };
            let abar: SparseVec = e.alpha_basis(x).iter().filter(|(k, _)| gt.grade(*k) < 0).cloned().collect();
            let lhs = phi.pairing(&gt.from_coords(&abar)).unwrap();
            let rhs = g.element(xi).pairing(&g.from_coords(&xbar)).unwrap();
            if lhs != rhs {
                bad.push(format!("(ξ = {}, X = {})", g.label(xi), g.label(x)));
            }
        }
    }
    check("φ is dual to the map induced by α on g/p", bad)
}

/// The five commutation relations of `ΔẼ^i` with the image of `α`, in the
/// form they take with this basis:
/// `[ΔẼ^i, α(E^r_s)] = δ^i_r ΔẼ^s`, `[ΔẼ^i, α(E_s)] = δ^i_s √2 Ẽ^0_0`,
/// `[ΔẼ^i, α(E_[rs])] = δ^i_r ΔẼ_s − δ^i_s ΔẼ_r`, `[ΔẼ^i, α(E^r)] = 0`,
/// `[ΔẼ^i, α(E^[rs])] = 0`.
pub fn delta_relations(e: &Embedding) -> Vec<Check> {
    use BasisIndex::*;
    let (g, gt) = (e.g(), e.gt());
    let l = g.l();
    let br = |i: usize, x: usize| gt.bracket_coords(e.delta_upper(i), e.alpha_basis(x));
    let scaled = |v: &SparseVec, c: i64| -> SparseVec { v.iter().map(|(k, x)| (*k, x * &s(c))).collect() };
    let mut out = Vec::new();
    let (mut b1, mut b2, mut b3, mut b4, mut b5) = (vec![], vec![], vec![], vec![], vec![]);
    let e00 = gt.idx(Mixed(0, 0));
    for i in 0..l {
        for r in 0..l {
            if br(i, g.idx(Upper(r))) != vec![] {
                b4.push(format!("i={},r={}", i + 1, r + 1));
            }
            let want = if i == r { vec![(e00, Scalar::sqrt2())] } else { vec![] };
            if br(i, g.idx(Lower(r))) != want {
                b2.push(format!("i={},s={}", i + 1, r + 1));
            }
            for t in 0..l {
                let want = if i == r { e.delta_upper(t).clone() } else { vec![] };
                if br(i, g.idx(Mixed(r, t))) != want {
                    b1.push(format!("i={},r={},s={}", i + 1, r + 1, t + 1));
                }
                if r < t {
                    if br(i, g.idx(UpperPair(r, t))) != vec![] {
                        b5.push(format!("i={},[{}{}]", i + 1, r + 1, t + 1));
                    }
                    let mut want = Vec::new();
                    if i == r {
                        want.extend(e.delta_lower(t).iter().cloned());
                    }
                    if i == t {
                        want.extend(scaled(e.delta_lower(r), -1));
                    }
                    if br(i, g.idx(LowerPair(r, t))) != sparse_from(want) {
                        b3.push(format!("i={},[{}{}]", i + 1, r + 1, t + 1));
                    }
                }
            }
        }
    }
    out.push(check("[ΔẼ^i, α(E^r_s)] = δ^i_r ΔẼ^s", b1));
    out.push(check("[ΔẼ^i, α(E_s)] = δ^i_s √2 Ẽ^0_0", b2));
    out.push(check("[ΔẼ^i, α(E_[rs])] = δ^i_r ΔẼ_s − δ^i_s ΔẼ_r", b3));
    out.push(check("[ΔẼ^i, α(E^r)] = 0", b4));
    out.push(check("[ΔẼ^i, α(E^[rs])] = 0", b5));
    out
}

fn basis_chain(key: &TermKey) -> Chain<Scalar> {
    let mut c = Chain::new(key.0.len());
    c.add_term(key.0.clone(), key.1, &Scalar::one(), &Scalar::one());
    c
}

pub fn closed_forms_agree(e: &Embedding) -> Check {
    let mut bad = Vec::new();
    for key in basis_terms(e.g(), 2, None) {
        let c = basis_chain(&key);
        if e.commutator_operator(&c).unwrap() != e.closed_form(&c).unwrap() {
            bad.push(format!("{:?}", c.labelled(e.g())));
        }
    }
    check("[∂*, φ] equals its closed forms on every basis 2-chain", bad)
}

pub fn top_grade_in_kernel(e: &Embedding) -> Check {
    let g = e.g();
    let mut bad = Vec::new();
    for key in basis_terms(g, 2, None) {
        if key.0.iter().all(|&a| g.grade(a) == 2) && !e.commutator_operator(&basis_chain(&key)).unwrap().is_zero() {
            bad.push(format!("{:?}", basis_chain(&key).labelled(g)));
        }
    }
    check("Λ²g₂ ⊗ g lies in the kernel of [∂*, φ]", bad)
}

/// Basis of `h_i = {X ∈ g : [ΔẼ^i, α(X)] = 0}`.
pub fn h_subalgebra(e: &Embedding, i: usize) -> Vec<SparseVec> {
    let cols: Vec<SparseVec> = (0..e.g().dim()).map(|x| e.gt().bracket_coords(e.delta_upper(i), e.alpha_basis(x))).collect();
    from_columns(&cols).kernel()
}

pub fn h_intersection(e: &Embedding) -> Check {
    let (g, gt) = (e.g(), e.gt());
    let cols: Vec<SparseVec> = (0..g.dim())
        .map(|x| {
            let mut v = Vec::new();
            for i in 0..g.l() {
                let b = gt.bracket_coords(e.delta_upper(i), e.alpha_basis(x));
                v.extend(b.into_iter().map(|(k, s)| (i * gt.dim() + k, s)));
            }
            v
        })
        .collect();
    let inter = from_columns(&cols).kernel();
    let p_plus: Vec<SparseVec> = g.positive().into_iter().map(unit).collect();
    let ok = same_span(&inter, &p_plus, g.dim());
    check(
        "∩ h_i = g₁ + g₂",
        if ok { vec![] } else { vec![format!("intersection has dimension {}", inter.len())] },
    )
}

pub fn item_b_in_kernel(e: &Embedding) -> Check {
    use BasisIndex::*;
    let g = e.g();
    let l = g.l();
    let mut bad = Vec::new();
    for i in 0..l {
        let h = h_subalgebra(e, i);
        for j in 0..l {
            for k in j + 1..l {
                for x in &h {
                    let mut c = Chain::new(2);
                    for (t, v) in x {
                        c.add_term(vec![g.idx(Upper(i)), g.idx(UpperPair(j, k))], *t, v, &Scalar::one());
                    }
                    if !e.commutator_operator(&c).unwrap().is_zero() {
                        bad.push(format!("i={}, [{}{}]", i + 1, j + 1, k + 1));
                    }
                }
            }
        }
    }
    check("E^i ∧ E^[jk] ⊗ h_i lies in the kernel", bad)
}

pub fn one_two_positive_in_kernel(e: &Embedding) -> Check {
    let g = e.g();
    let mut bad = Vec::new();
    for key in basis_terms(g, 2, None) {
        let types: Vec<i32> = key.0.iter().map(|&a| g.grade(a)).collect();
        if types == [1, 2] && g.grade(key.1) > 0 && !e.commutator_operator(&basis_chain(&key)).unwrap().is_zero() {
            bad.push(format!("{:?}", basis_chain(&key).labelled(g)));
        }
    }
    check("g₁ ⊗ g₂ ⊗ (g₁ + g₂) lies in the kernel", bad)
}

pub fn one_one_injective(e: &Embedding) -> Check {
    let g = e.g();
    let mut idx = TermIndex::default();
    let keys: Vec<TermKey> =
        basis_terms(g, 2, None).into_iter().filter(|k| k.0.iter().all(|&a| g.grade(a) == 1)).collect();
    let cols: Vec<SparseVec> = keys.iter().map(|k| idx.vector(&e.commutator_operator(&basis_chain(k)).unwrap())).collect();
    let rank = from_columns(&cols).rank();
    check(
        "ker [∂*, φ] ∩ Λ²g₁ ⊗ g = 0",
        if rank == keys.len() { vec![] } else { vec![format!("rank {rank} < {}", keys.len())] },
    )
}

pub fn squares_vanish(alg: &GradedAlgebra) -> Vec<Check> {
    let mut dd = Vec::new();
    for k in 0..=1 {
        for key in basis_terms(alg, k, None) {
            let c = basis_chain(&key);
            if !differential(alg, &differential(alg, &c).unwrap()).unwrap().is_zero() {
                dd.push(format!("{:?}", c.labelled(alg)));
            }
        }
    }
    let mut cc = Vec::new();
    for k in 2..=3 {
        for key in basis_terms(alg, k, None) {
            let c = basis_chain(&key);
            if !codifferential(alg, &codifferential(alg, &c).unwrap()).unwrap().is_zero() {
                cc.push(format!("{:?}", c.labelled(alg)));
            }
        }
    }
    vec![check("∂∘∂ = 0 on chain bases", dd), check("∂*∘∂* = 0 on chain bases", cc)]
}

/// The full battery for one `l`.
pub fn battery(l: usize) -> Result<Vec<Check>> {
    let e = Embedding::new(l)?;
    let g = e.g();
    let mut out = vec![
        forms_preserved(g),
        forms_preserved(e.gt()),
        bracket_normalization(g),
        trace_form_values(g),
        grade_additivity(g),
        grade_additivity(e.gt()),
        alpha_homomorphism(&e),
        alpha_phi_values(&e),
        phi_duality(&e),
    ];
    out.extend(delta_relations(&e));
    out.push(closed_forms_agree(&e));
    out.push(top_grade_in_kernel(&e));
    out.push(h_intersection(&e));
    out.push(item_b_in_kernel(&e));
    out.push(one_two_positive_in_kernel(&e));
    out.push(one_one_injective(&e));
    out.extend(squares_vanish(g));
    debug_assert_eq!(g.kind(), AlgebraKind::G);
    Ok(out)
}
