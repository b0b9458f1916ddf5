use std::collections::BTreeMap;

use super::lie::GradedAlgebra;
use crate::geometry::sort_with_sign;
use crate::poly::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::{Coefficient, Scalar};

/// Key of a chain term: strictly increasing `p₊` slots and a target.
pub type TermKey = (Vec<usize>, usize);

/// A `k`-chain in `Λ^k p₊ ⊗ g` (or the same for `g̃`), stored sparsely with
/// slots as basis positions of the algebra in increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain<C> {
    degree: usize,
    terms: BTreeMap<TermKey, C>,
}

/// Input-grade type of a 2-chain term, used for the `κ₁,₁ + κ₁,₂ + κ₂,₂`
/// decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlotType {
    OneOne,
    OneTwo,
    TwoTwo,
}

impl<C: Coefficient> Chain<C> {
    pub fn new(degree: usize) -> Self {
        Chain { degree, terms: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, usize, &C)> {
        self.terms.iter().map(|((s, t), c)| (s, *t, c))
    }

    /// Coefficient of `slots ⊗ target` with `slots` in any order.
    pub fn get(&self, slots: &[usize], target: usize) -> C {
        let mut s = slots.to_vec();
        match sort_with_sign(&mut s) {
            None => C::zero(),
            Some(sign) => self
                .terms
                .get(&(s, target))
                .map(|c| c.scaled(&Scalar::from_int(sign)))
                .unwrap_or_else(C::zero),
        }
    }

    /// Adds `s · c · (slots ⊗ target)`, reordering slots with sign; terms
    /// with a repeated slot vanish.
    pub fn add_term(&mut self, slots: Vec<usize>, target: usize, c: &C, s: &Scalar) {
        assert_eq!(slots.len(), self.degree, "slot count differs from chain degree");
        if c.is_zero() || s.is_zero() {
            return;
        }
        let mut slots = slots;
        let Some(sign) = sort_with_sign(&mut slots) else { return };
        let key = (slots, target);
        let f = if sign < 0 { -s } else { s.clone() };
        let e = self.terms.entry(key.clone()).or_insert_with(C::zero);
        e.add_scaled(c, &f);
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `self += s · other`.
    pub fn add_chain(&mut self, other: &Chain<C>, s: &Scalar) {
        assert_eq!(self.degree, other.degree, "adding chains of different degree");
        for ((slots, t), c) in &other.terms {
            self.add_term(slots.clone(), *t, c, s);
        }
    }

    pub fn scaled(&self, s: &Scalar) -> Chain<C> {
        let mut out = Chain::new(self.degree);
        out.add_chain(self, s);
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(&[usize], usize) -> bool) -> Chain<C> {
        Chain {
            degree: self.degree,
            terms: self.terms.iter().filter(|((s, t), _)| keep(s, *t)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    pub fn map_coefficients<D: Coefficient>(&self, mut f: impl FnMut(&C) -> D) -> Chain<D> {
        let mut out = Chain::new(self.degree);
        for ((s, t), c) in &self.terms {
            out.add_term(s.clone(), *t, &f(c), &Scalar::one());
        }
        out
    }

    /// The part of homogeneity `h` (sum of slot grades plus target grade).
    pub fn homogeneity_part(&self, alg: &GradedAlgebra, h: i32) -> Chain<C> {
        self.filter(|s, t| homogeneity(alg, s, t) == h)
    }

    /// The part whose slot grades match `ty`; only meaningful for 2-chains
    /// over `g`.
    pub fn slot_type_part(&self, alg: &GradedAlgebra, ty: SlotType) -> Chain<C> {
        self.filter(|s, _| slot_type(alg, s) == Some(ty))
    }

    /// Checks that every slot is a `p₊` basis position.
    pub fn check_positive(&self, alg: &GradedAlgebra) -> Result<()> {
        for (s, t, _) in self.terms() {
            if t >= alg.dim() || s.iter().any(|&a| a >= alg.dim() || alg.grade(a) <= 0) {
                return Err(Error::InvalidArgument("chain slot outside p₊ or index out of range".into()));
            }
        }
        Ok(())
    }

    /// Human-readable terms `(slot labels, target label, coefficient)`.
    pub fn labelled(&self, alg: &GradedAlgebra) -> Vec<(Vec<String>, String, C)> {
        self.terms().map(|(s, t, c)| (s.iter().map(|&a| alg.label(a)).collect(), alg.label(t), c.clone())).collect()
    }
}

impl Chain<Polynomial> {
    /// Converts a chain whose coefficients are all constants.
    pub fn to_constant(&self) -> Result<Chain<Scalar>> {
        let mut out = Chain::new(self.degree);
        for (s, t, c) in self.terms() {
            let v = c
                .as_constant()
                .ok_or_else(|| Error::InvalidArgument("chain has non-constant coefficients".into()))?;
            out.add_term(s.clone(), t, &v, &Scalar::one());
        }
        Ok(out)
    }

    /// Evaluates every coefficient at a point of the chart.
    pub fn evaluate_at(&self, point: &[Scalar]) -> Chain<Scalar> {
        self.map_coefficients(|p| p.evaluate_vars(point))
    }
}

pub fn homogeneity(alg: &GradedAlgebra, slots: &[usize], target: usize) -> i32 {
    slots.iter().map(|&a| alg.grade(a)).sum::<i32>() + alg.grade(target)
}

pub fn slot_type(alg: &GradedAlgebra, slots: &[usize]) -> Option<SlotType> {
    if slots.len() != 2 {
        return None;
    }
    match (alg.grade(slots[0]), alg.grade(slots[1])) {
        (1, 1) => Some(SlotType::OneOne),
        (1, 2) | (2, 1) => Some(SlotType::OneTwo),
        (2, 2) => Some(SlotType::TwoTwo),
        _ => None,
    }
}

/// All `k`-subsets of `items`, in lexicographic order.
pub fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Every basis term `slots ⊗ target` of `Λ^k p₊ ⊗ g` with the given
/// homogeneity (or all, for `None`).
pub fn basis_terms(alg: &GradedAlgebra, k: usize, h: Option<i32>) -> Vec<TermKey> {
    let pos = alg.positive();
    let mut out = Vec::new();
    for s in subsets(&pos, k) {
        for t in 0..alg.dim() {
            if h.map_or(true, |h| homogeneity(alg, &s, t) == h) {
                out.push((s.clone(), t));
            }
        }
    }
    out
}
