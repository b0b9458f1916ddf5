//! The Lie algebra differential `∂` and the codifferential `∂*` on chains.
//!
//! Chains in `Λ^k p₊ ⊗ g` double as alternating maps on `g_−` through the
//! pairing, under which `E^i` is dual to `E_i` and `E^[ij]` to `E_[ij]`.
//!
//! `∂*` is the alternating extension
//! `∂*(Z_0∧…∧Z_{k−1}⊗A) = Σ_i (−1)^{i+1} Z_0∧…Ẑ_i…⊗[Z_i,A]
//!   + Σ_{i<j} (−1)^{i+j} [Z_i,Z_j]∧Z_0∧…Ẑ_i…Ẑ_j…⊗A`,
//! which for `k = 2` reads `Z_0⊗[Z_1,A] − Z_1⊗[Z_0,A] − [Z_0,Z_1]⊗A`.
//!
//! `∂` is the negative of the Chevalley–Eilenberg differential of `g_−` with
//! values in `g`, so that on three elements of `g_{−1}`
//! `∂κ(X,Y,Z) = Σ_cyc κ([X,Y],Z) − Σ_cyc [X,κ(Y,Z)]`.

use super::chain::Chain;
use super::lie::GradedAlgebra;
use crate::error::{Error, Result};
use crate::scalar::{Coefficient, Scalar};

fn sign(p: usize) -> Scalar {
    Scalar::from_int(if p % 2 == 0 { 1 } else { -1 })
}

pub fn codifferential<C: Coefficient>(alg: &GradedAlgebra, c: &Chain<C>) -> Result<Chain<C>> {
    let k = c.degree();
    if k == 0 {
        return Err(Error::InvalidArgument("the codifferential is not defined on 0-chains".into()));
    }
    c.check_positive(alg)?;
    let mut out = Chain::new(k - 1);
    for (slots, target, coef) in c.terms() {
        for i in 0..k {
            let rest: Vec<usize> = slots.iter().enumerate().filter(|(p, _)| *p != i).map(|(_, &a)| a).collect();
            let s = sign(i + 1);
            for (t, v) in alg.bracket_basis(slots[i], target) {
                out.add_term(rest.clone(), *t, coef, &(&s * v));
            }
        }
        for i in 0..k {
            for j in i + 1..k {
                let s = sign(i + j);
                for (w, v) in alg.bracket_basis(slots[i], slots[j]) {
                    let mut ns = vec![*w];
                    ns.extend(slots.iter().enumerate().filter(|(p, _)| *p != i && *p != j).map(|(_, &a)| a));
                    out.add_term(ns, target, coef, &(&s * v));
                }
            }
        }
    }
    Ok(out)
}

/// The dual of `dZ^c` for a `p₊` slot: `−Σ_{a<b} c^x_{ab} Z^a∧Z^b`, where
/// `X_x` is the `g_−` partner of the slot and `c` are the structure
/// constants of `g_−`.
fn slot_derivative(alg: &GradedAlgebra, slot: usize) -> Vec<(usize, usize, Scalar)> {
    let x = alg.dual(slot).expect("slot in p₊");
    let neg = alg.negative();
    let mut out = Vec::new();
    for (p, &a) in neg.iter().enumerate() {
        for &b in &neg[p + 1..] {
            for (c, v) in alg.bracket_basis(a, b) {
                if *c == x {
                    out.push((alg.dual(a).unwrap(), alg.dual(b).unwrap(), -v));
                }
            }
        }
    }
    out
}

pub fn differential<C: Coefficient>(alg: &GradedAlgebra, c: &Chain<C>) -> Result<Chain<C>> {
    c.check_positive(alg)?;
    let k = c.degree();
    let neg = alg.negative();
    let derivs: Vec<Option<Vec<(usize, usize, Scalar)>>> = (0..alg.dim())
        .map(|a| if alg.grade(a) > 0 { Some(slot_derivative(alg, a)) } else { None })
        .collect();
    let minus = Scalar::from_int(-1);
    let mut out = Chain::new(k + 1);
    for (slots, target, coef) in c.terms() {
        for &b in &neg {
            let zb = alg.dual(b).unwrap();
            let mut ns = vec![zb];
            ns.extend_from_slice(slots);
            for (t, v) in alg.bracket_basis(b, target) {
                out.add_term(ns.clone(), *t, coef, &(&minus * v));
            }
        }
        for (p, &s) in slots.iter().enumerate() {
            let sg = &minus * &sign(p);
            for (za, zb, v) in derivs[s].as_ref().unwrap() {
                let mut ns = slots[..p].to_vec();
                ns.push(*za);
                ns.push(*zb);
                ns.extend_from_slice(&slots[p + 1..]);
                out.add_term(ns, target, coef, &(&sg * v));
            }
        }
    }
    Ok(out)
}

/// Evaluates a 2-chain as the alternating map `g_− × g_− → g` on two basis
/// elements of `g_−`; returns target coordinates.
pub fn evaluate_two_chain(alg: &GradedAlgebra, c: &Chain<Scalar>, x: usize, y: usize) -> Vec<(usize, Scalar)> {
    let (Some(zx), Some(zy)) = (alg.dual(x), alg.dual(y)) else { return Vec::new() };
    (0..alg.dim())
        .filter_map(|t| {
            let v = c.get(&[zx, zy], t);
            (!v.is_zero()).then_some((t, v))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chain::basis_terms;
    use crate::algebra::{AlgebraKind, BasisIndex::*};
    use crate::linalg::sparse_from;

    fn g4() -> GradedAlgebra {
        GradedAlgebra::new(AlgebraKind::G, 4).unwrap()
    }

    fn single(k: usize, slots: Vec<usize>, t: usize) -> Chain<Scalar> {
        let mut c = Chain::new(k);
        c.add_term(slots, t, &Scalar::one(), &Scalar::one());
        c
    }

    #[test]
    fn codifferential_of_top_grade_chain_vanishes() {
        let g = g4();
        let c = single(2, vec![g.idx(UpperPair(0, 1)), g.idx(UpperPair(2, 3))], g.idx(UpperPair(0, 2)));
        assert!(codifferential(&g, &c).unwrap().is_zero());
    }

    #[test]
    fn codifferential_two_chain_by_hand() {
        let g = g4();
        let (z0, z1, a) = (g.idx(Upper(0)), g.idx(Upper(1)), g.idx(LowerPair(0, 1)));
        let got = codifferential(&g, &single(2, vec![z0, z1], a)).unwrap();
        let mut want: Chain<Scalar> = Chain::new(1);
        let one = Scalar::one();
        for (t, v) in g.bracket_basis(z1, a) {
            want.add_term(vec![z0], *t, v, &one);
        }
        for (t, v) in g.bracket_basis(z0, a) {
            want.add_term(vec![z1], *t, v, &Scalar::from_int(-1));
        }
        for (w, v) in g.bracket_basis(z0, z1) {
            want.add_term(vec![*w], a, v, &Scalar::from_int(-1));
        }
        assert_eq!(got, want);
        assert!(!got.is_zero());
        // [E^2, E_[12]] = E_1 and [E^1, E_[12]] = −E_2 with this basis
        assert_eq!(sparse_from(g.bracket_basis(z1, a).clone()), vec![(g.idx(Lower(0)), one.clone())]);
    }

    #[test]
    fn one_chain_codifferential_is_minus_bracket() {
        let g = g4();
        let (z, a) = (g.idx(Upper(2)), g.idx(Lower(2)));
        let got = codifferential(&g, &single(1, vec![z], a)).unwrap();
        let want = g.bracket_basis(z, a);
        assert_eq!(got.len(), want.len());
        for (t, v) in want {
            assert_eq!(got.get(&[], *t), -v);
        }
    }

    #[test]
    fn zero_chain_has_zero_differential() {
        let g = g4();
        let c: Chain<Scalar> = Chain::new(2);
        assert!(differential(&g, &c).unwrap().is_zero());
        assert!(codifferential(&g, &Chain::<Scalar>::new(0)).is_err());
    }

    #[test]
    fn squares_vanish_on_degree_one_basis() {
        let g = g4();
        for (s, t) in basis_terms(&g, 1, None) {
            let c = single(1, s, t);
            let dd = differential(&g, &differential(&g, &c).unwrap()).unwrap();
            assert!(dd.is_zero());
        }
    }

    #[test]
    fn differential_on_g_minus_one_matches_cyclic_formula() {
        // κ supported on g₁⊗g₂: on three elements of g_{−1} only the
        // κ([X,Y],Z) terms survive.
        let g = g4();
        let k = single(2, vec![g.idx(Upper(0)), g.idx(UpperPair(1, 2))], g.idx(Lower(3)));
        let dk = differential(&g, &k).unwrap();
        let xs: Vec<usize> = (0..4).map(|i| g.idx(Lower(i))).collect();
        let eval2 = |x: usize, y: usize| -> Vec<(usize, Scalar)> {
            // κ(x, y) for x ∈ g_{−2} ∪ g_{−1}, y likewise
            evaluate_two_chain(&g, &k, x, y)
        };
        for a in 0..4 {
            for b in a + 1..4 {
                for c in b + 1..4 {
                    let (x, y, z) = (xs[a], xs[b], xs[c]);
                    let mut want = Vec::new();
                    for (p, q, r) in [(x, y, z), (y, z, x), (z, x, y)] {
                        for (w, s) in g.bracket_basis(p, q) {
                            for (t, v) in eval2(*w, r) {
                                want.push((t, s * &v));
                            }
                        }
                    }
                    let want = sparse_from(want);
                    let slots = [g.dual(x).unwrap(), g.dual(y).unwrap(), g.dual(z).unwrap()];
                    let got: Vec<(usize, Scalar)> = (0..g.dim())
                        .filter_map(|t| {
                            let v = dk.get(&slots, t);
                            (!v.is_zero()).then_some((t, v))
                        })
                        .collect();
                    assert_eq!(got, want, "({a},{b},{c})");
                }
            }
        }
    }
}
