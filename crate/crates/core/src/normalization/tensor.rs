use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chart::{npairs, pairs};
use crate::poly::Polynomial;

/// Kind of a tensor slot: a single index `1..l` or an antisymmetric pair
/// `[jk]`, `j < k`, stored by pair position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slot {
    UpperSingle,
    UpperPair,
    LowerSingle,
    LowerPair,
}

impl Slot {
    fn is_pair(self) -> bool {
        matches!(self, Slot::UpperPair | Slot::LowerPair)
    }

    fn is_upper(self) -> bool {
        matches!(self, Slot::UpperSingle | Slot::UpperPair)
    }
}

/// A sparse polynomial-valued tensor with named slots.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    name: String,
    l: usize,
    slots: Vec<Slot>,
    entries: BTreeMap<Vec<usize>, Polynomial>,
}

/// One nonzero entry in printable form, as used by the JSON report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub index: String,
    pub value: String,
}

impl Tensor {
    pub fn new(name: &str, l: usize, slots: &[Slot]) -> Self {
        Tensor { name: name.to_string(), l, slots: slots.to_vec(), entries: BTreeMap::new() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    fn check(&self, idx: &[usize]) {
        assert_eq!(idx.len(), self.slots.len(), "{}: wrong number of indices", self.name);
        for (i, s) in idx.iter().zip(&self.slots) {
            let bound = if s.is_pair() { npairs(self.l) } else { self.l };
            assert!(*i < bound, "{}: index out of range", self.name);
        }
    }

    pub fn get(&self, idx: &[usize]) -> Polynomial {
        self.check(idx);
        self.entries.get(idx).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, idx: Vec<usize>, v: Polynomial) {
        self.check(&idx);
        if v.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&Vec<usize>, &Polynomial)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every index tuple of the tensor's shape.
    pub fn all_indices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for s in &self.slots {
            let bound = if s.is_pair() { npairs(self.l) } else { self.l };
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..bound).map(move |i| {
                        let mut q = p.clone();
                        q.push(i);
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Index label such as `^[34]_1[12]` (1-based).
    pub fn index_label(&self, idx: &[usize]) -> String {
        let ps = pairs(self.l);
        let fmt = |s: Slot, i: usize| {
            if s.is_pair() {
                let (a, b) = ps[i];
                format!("[{}{}]", a + 1, b + 1)
            } else {
                format!("{}", i + 1)
            }
        };
        let up: String = self.slots.iter().zip(idx).filter(|(s, _)| s.is_upper()).map(|(s, i)| fmt(*s, *i)).collect();
        let lo: String = self.slots.iter().zip(idx).filter(|(s, _)| !s.is_upper()).map(|(s, i)| fmt(*s, *i)).collect();
        let mut out = String::new();
        if !up.is_empty() {
            out.push('^');
            out.push_str(&up);
        }
        if !lo.is_empty() {
            out.push('_');
            out.push_str(&lo);
        }
        out
    }

    pub fn entries(&self) -> Vec<Entry> {
        self.entries.iter().map(|(k, v)| Entry { index: self.index_label(k), value: v.to_string() }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_are_one_based() {
        let mut t = Tensor::new("P", 4, &[Slot::UpperPair, Slot::LowerSingle, Slot::LowerPair]);
        t.set(vec![5, 0, 0], Polynomial::from_int(1));
        assert_eq!(t.entries()[0].index, "^[34]_1[12]");
        assert_eq!(t.len(), 1);
        t.set(vec![5, 0, 0], Polynomial::zero());
        assert!(t.is_zero());
        assert_eq!(t.all_indices().len(), 6 * 4 * 6);
    }
}
