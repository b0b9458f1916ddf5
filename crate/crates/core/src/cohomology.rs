//! Harmonic cochains `ker ∂ ∩ ker ∂*` of `g = so(l,l+1)`, by exact linear
//! algebra on each homogeneity separately.

use serde::{Deserialize, Serialize};

use crate::algebra::checks::{from_columns, TermIndex};
use crate::algebra::{basis_terms, codifferential, differential, AlgebraKind, BasisIndex, Chain, GradedAlgebra};
use crate::chart::{pair_pos, pairs};
use crate::error::{Error, Result};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct HarmonicSpace {
    pub l: usize,
    pub k: usize,
    pub h: i32,
    pub basis: Vec<Chain<Scalar>>,
}

impl HarmonicSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionEntry {
    pub k: usize,
    pub h: i32,
    pub dim: usize,
}

fn to_chain(k: usize, keys: &[(Vec<usize>, usize)], v: &SparseVec) -> Chain<Scalar> {
    let mut c = Chain::new(k);
    for (col, x) in v {
        let (s, t) = &keys[*col];
        c.add_term(s.clone(), *t, x, &Scalar::one());
    }
    c
}

pub fn harmonic_space_in(g: &GradedAlgebra, k: usize, h: i32) -> Result<HarmonicSpace> {
    if !(1..=2).contains(&k) {
        return Err(Error::InvalidArgument(format!("harmonic spaces are computed for k = 1, 2 (got {k})")));
    }
    let keys = basis_terms(g, k, Some(h));
    let mut rows = TermIndex::default();
    let mut cols = Vec::with_capacity(keys.len());
    for (s, t) in &keys {
        let mut c = Chain::new(k);
        c.add_term(s.clone(), *t, &Scalar::one(), &Scalar::one());
        let d = differential(g, &c)?;
        let ds = codifferential(g, &c)?;
        // the two images live in different degrees, so their keys never collide
        let mut v = rows.vector(&d);
        v.extend(rows.vector(&ds));
        v.sort_by_key(|(r, _)| *r);
        cols.push(v);
    }
    let kernel = from_columns(&cols).kernel();
    let basis = kernel.iter().map(|v| to_chain(k, &keys, v)).collect();
    Ok(HarmonicSpace { l: g.l(), k, h, basis })
}

pub fn harmonic_space(l: usize, k: usize, h: i32) -> Result<HarmonicSpace> {
    let g = GradedAlgebra::new(AlgebraKind::G, l)?;
    harmonic_space_in(&g, k, h)
}

/// Harmonic dimensions for every `h` in the range.
pub fn harmonic_scan(l: usize, k: usize, hs: impl IntoIterator<Item = i32>) -> Result<Vec<DimensionEntry>> {
    let g = GradedAlgebra::new(AlgebraKind::G, l)?;
    hs.into_iter().map(|h| Ok(DimensionEntry { k, h, dim: harmonic_space_in(&g, k, h)?.dim() })).collect()
}

pub fn harmonic_h1_scan(l: usize, hs: impl IntoIterator<Item = i32>) -> Result<Vec<DimensionEntry>> {
    harmonic_scan(l, 1, hs)
}

/// Dimension of the totally trace-free part of `g₁ ⊗ g₂ ⊗ g_{−2}`, i.e. of
/// tensors `P^{[rs]}_{i[jk]}` with `Σ_i P^{[is]}_{i[jk]} = 0` and
/// `Σ_j P^{[rj]}_{i[jk]} = 0`, computed as the kernel of the trace equations.
pub fn trace_free_dimension(l: usize) -> usize {
    let np = l * (l - 1) / 2;
    let var = |rs: usize, i: usize, jk: usize| (rs * l + i) * np + jk;
    let signed = |a: usize, b: usize| -> Option<(usize, i64)> { crate::chart::signed_pair(l, a, b) };
    let mut m = SparseMatrix::new(np * l * np);
    for s in 0..l {
        for (j, k) in pairs(l) {
            let jk = pair_pos(l, j, k);
            m.push_row((0..l).filter_map(|i| signed(i, s).map(|(p, sg)| (var(p, i, jk), Scalar::from_int(sg)))));
        }
    }
    for r in 0..l {
        for i in 0..l {
            for k in 0..l {
                m.push_row((0..l).filter_map(|j| {
                    let (p, s1) = signed(r, j)?;
                    let (q, s2) = signed(j, k)?;
                    Some((var(p, i, q), Scalar::from_int(s1 * s2)))
                }));
            }
        }
    }
    m.ncols() - m.rank()
}

/// Reads a chain in `g₁ ⊗ g₂ ⊗ g_{−2}` as the tensor `P^{[rs]}_{i[jk]}` and
/// checks that both single contractions vanish.
pub fn is_totally_trace_free(g: &GradedAlgebra, c: &Chain<Scalar>) -> bool {
    use BasisIndex::*;
    let l = g.l();
    let p = |rs: (usize, usize), i: usize, jk: (usize, usize)| -> Scalar {
        match (g.index(LowerPair(rs.0, rs.1)), g.index(Upper(i)), g.index(UpperPair(jk.0, jk.1))) {
            (Some((t, s1)), Some((a, _)), Some((b, s2))) if rs.0 != rs.1 && jk.0 != jk.1 => {
                &c.get(&[a, b], t) * &Scalar::from_int(s1 * s2)
            }
            _ => Scalar::zero(),
        }
    };
    for s in 0..l {
        for (j, k) in pairs(l) {
            let mut acc = Scalar::zero();
            for i in 0..l {
                acc += &p((i, s), i, (j, k));
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    for r in 0..l {
        for i in 0..l {
            for k in 0..l {
                let mut acc = Scalar::zero();
                for j in 0..l {
                    acc += &p((r, j), i, (j, k));
                }
                if !acc.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_chains_are_closed_and_coclosed() {
        let g = GradedAlgebra::new(AlgebraKind::G, 3).unwrap();
        // for l = 3 the harmonic 2-cochains sit in homogeneity 3
        let hs = harmonic_space_in(&g, 2, 3).unwrap();
        assert!(hs.dim() > 0);
        for c in &hs.basis {
            assert!(differential(&g, c).unwrap().is_zero());
            assert!(codifferential(&g, c).unwrap().is_zero());
        }
    }

    #[test]
    fn first_cohomology_vanishes_in_nonnegative_homogeneity() {
        for e in harmonic_h1_scan(3, 0..=3).unwrap() {
            assert_eq!(e.dim, 0, "h = {}", e.h);
        }
    }

    #[test]
    fn harmonic_dimension_matches_trace_oracle_l3() {
        assert_eq!(harmonic_space(3, 2, 1).unwrap().dim(), trace_free_dimension(3));
    }
}
