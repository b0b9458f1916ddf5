//! Normalization of the Cartan connection through homogeneity 2.
//!
//! Degree 1 fixes `A` and `C` by the gauge `Σ_i A^i_{ik} = 0`, `Q = 0` and
//! total trace-freeness of `P`. Degree 2 fixes `E` and a symmetric `F` by
//! the vanishing of `∂*` on the homogeneity-2 part of the curvature. Both
//! systems have constant coefficients. Their matrices are obtained by
//! running the curvature engine on the flat model with unit data, and they
//! are factored once per `l`.

mod curvature;
mod tensor;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use curvature::{chain_from_tensors, ConnectionData, Curvature, CurvatureTensors};
pub use tensor::{Entry, Slot, Tensor};

use crate::algebra::{basis_terms, codifferential, Chain, Embedding, GradedAlgebra, TermKey};
use crate::chart::{npairs, signed_pair};
use crate::error::{Error, Result};
use crate::geometry::{Frame, StructureFunctions};
use crate::linalg::{Factorization, SparseMatrix, SparseVec};
use crate::poly::{Monomial, Polynomial};
use crate::scalar::{Coefficient, Scalar};

use curvature::{curvature, Calculus, Pairs};

/// Whether the `κ₁,₁` part vanishes through the computed order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtensionVerdict {
    /// `Q` and `T` vanish. This certifies only the components computed here,
    /// i.e. homogeneities 1 and 2.
    NormalAtComputedOrder,
    /// `T ≠ 0`, so the induced connection on the spinorial extension is not
    /// normal.
    ObstructedByT,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureReport {
    pub l: usize,
    pub connection: ConnectionData,
    pub tensors: CurvatureTensors,
    pub flat: bool,
    pub kappa11_deg2_zero: bool,
    pub extension_normal_deg2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub kappa11_deg2_zero: bool,
    pub verdict: ExtensionVerdict,
    /// Plain statement of which homogeneities the verdict covers.
    pub scope: String,
}

fn scalar_column(rows: &[Polynomial]) -> Result<SparseVec> {
    rows.iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, p)| {
            p.as_constant()
                .map(|s| (i, s))
                .ok_or_else(|| Error::Internal("flat-model column is not constant".into()))
        })
        .collect()
}

/// The degree-1 equations in a fixed order: gauge (`l` rows), `Q` (`l·np`),
/// the contraction `Σ_i P^{[is]}_{i[jk]}` (`l·np`) and the contraction
/// `Σ_j P^{[rj]}_{i[jk]}` (`l³`).
fn degree1_rows(l: usize, a: &Tensor, p: &Tensor, q: &Tensor) -> Vec<Polynomial> {
    let np = npairs(l);
    let mut out = Vec::with_capacity(l + 2 * l * np + l * l * l);
    for k in 0..l {
        let mut acc = Polynomial::zero();
        for i in 0..l {
            acc.add_scaled(&a.get(&[i, i, k]), &Scalar::one());
        }
        out.push(acc);
    }
    for i in 0..l {
        for jk in 0..np {
            out.push(q.get(&[i, jk]));
        }
    }
    out.extend(p_contractions(l, p));
    out
}

/// Both families of single contractions of `P^{[rs]}_{i[jk]}`.
pub fn p_contractions(l: usize, p: &Tensor) -> Vec<Polynomial> {
    let np = npairs(l);
    let mut out = Vec::new();
    for s in 0..l {
        for jk in 0..np {
            let mut acc = Polynomial::zero();
            for i in 0..l {
                if let Some((is, sg)) = signed_pair(l, i, s) {
                    acc.add_scaled(&p.get(&[is, i, jk]), &Scalar::from_int(sg));
                }
            }
            out.push(acc);
        }
    }
    for r in 0..l {
        for i in 0..l {
            for k in 0..l {
                let mut acc = Polynomial::zero();
                for j in 0..l {
                    if let (Some((rj, s1)), Some((jk, s2))) = (signed_pair(l, r, j), signed_pair(l, j, k)) {
                        acc.add_scaled(&p.get(&[rj, i, jk]), &Scalar::from_int(s1 * s2));
                    }
                }
                out.push(acc);
            }
        }
    }
    out
}

/// Index of the symmetric `F` unknown for `a ≤ b`.
fn sym_pairs(l: usize) -> Vec<(usize, usize)> {
    (0..l).flat_map(|a| (a..l).map(move |b| (a, b))).collect()
}

/// Degree-1 and degree-2 solvers for one rank `l`, with factored systems.
pub struct Normalizer {
    l: usize,
    g: GradedAlgebra,
    degree1: Factorization,
    degree2: Factorization,
    keys2: HashMap<TermKey, usize>,
}

impl Normalizer {
    pub fn new(l: usize) -> Result<Self> {
        if l < 4 {
            return Err(Error::Unsupported(format!(
                "the normalization is carried out for l ≥ 4; l = {l} is the excluded low-dimensional case"
            )));
        }
        let g = GradedAlgebra::new(crate::algebra::AlgebraKind::G, l)?;
        let flat = Calculus::flat(l);
        let np = npairs(l);

        let mut cols = Vec::new();
        for i in 0..l {
            for k in 0..l {
                for j in 0..l {
                    let mut d = ConnectionData::zero(l);
                    d.a.set(vec![i, k, j], Polynomial::from_int(1));
                    cols.push(Self::degree1_column(&flat, &g, &d)?);
                }
            }
        }
        for i in 0..l {
            for p in 0..np {
                let mut d = ConnectionData::zero(l);
                d.c.set(vec![i, p], Polynomial::from_int(1));
                cols.push(Self::degree1_column(&flat, &g, &d)?);
            }
        }
        let nrows1 = l + 2 * l * np + l * l * l;
        let degree1 = Factorization::new(&SparseMatrix::from_columns(nrows1, &cols))
            .map_err(|e| Error::Internal(format!("degree-1 system: {e}")))?;

        let keys: Vec<TermKey> = basis_terms(&g, 1, Some(2));
        let keys2: HashMap<TermKey, usize> = keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut cols = Vec::new();
        for i in 0..l {
            for j in 0..l {
                for p in 0..np {
                    let mut d = ConnectionData::zero(l);
                    d.e.set(vec![i, j, p], Polynomial::from_int(1));
                    cols.push(scalar_column(&Self::degree2_rows(&flat, &g, &keys2, &d)?)?);
                }
            }
        }
        for (a, b) in sym_pairs(l) {
            let mut d = ConnectionData::zero(l);
            d.f.set(vec![a, b], Polynomial::from_int(1));
            d.f.set(vec![b, a], Polynomial::from_int(1));
            cols.push(scalar_column(&Self::degree2_rows(&flat, &g, &keys2, &d)?)?);
        }
        let degree2 = Factorization::new(&SparseMatrix::from_columns(keys2.len(), &cols))
            .map_err(|e| Error::Internal(format!("degree-2 system: {e}")))?;
        Ok(Normalizer { l, g, degree1, degree2, keys2 })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.g
    }

    fn degree1_column(flat: &Calculus, g: &GradedAlgebra, d: &ConnectionData) -> Result<SparseVec> {
        let t = curvature(flat, g, d, Pairs::NotPairPair).tensors(g);
        scalar_column(&degree1_rows(g.l(), &d.a, &t.p, &t.q))
    }

    /// Coordinates of the homogeneity-2 part of `∂*κ`.
    fn degree2_rows(
        calc: &Calculus,
        g: &GradedAlgebra,
        keys: &HashMap<TermKey, usize>,
        d: &ConnectionData,
    ) -> Result<Vec<Polynomial>> {
        let chain = curvature(calc, g, d, Pairs::All).chain(g);
        let ds = codifferential(g, &chain)?;
        let mut out = vec![Polynomial::zero(); keys.len()];
        for (slots, t, c) in ds.terms() {
            if let Some(&row) = keys.get(&(slots.clone(), t)) {
                out[row] = c.clone();
            }
        }
        Ok(out)
    }

    fn check_frame(&self, frame: &Frame) -> Result<()> {
        if frame.l() != self.l {
            return Err(Error::InvalidArgument(format!("normalizer for l = {} given a frame of rank {}", self.l, frame.l())));
        }
        Ok(())
    }

    /// Solves for `A` and `C`; returns the data with `E = F = 0`.
    pub fn solve_degree1(&self, frame: &Frame, sf: &StructureFunctions) -> Result<ConnectionData> {
        self.check_frame(frame)?;
        let l = self.l;
        let np = npairs(l);
        let calc = Calculus::new(frame, sf);
        let zero = ConnectionData::zero(l);
        let t = curvature(&calc, &self.g, &zero, Pairs::NotPairPair).tensors(&self.g);
        let rhs: Vec<Polynomial> = degree1_rows(l, &zero.a, &t.p, &t.q).iter().map(|p| -p).collect();
        let x = self.degree1.solve(&rhs).map_err(|e| Error::Internal(format!("degree-1 normalization: {e}")))?;
        let mut d = zero;
        let mut it = x.into_iter();
        for i in 0..l {
            for k in 0..l {
                for j in 0..l {
                    d.a.set(vec![i, k, j], it.next().unwrap());
                }
            }
        }
        for i in 0..l {
            for p in 0..np {
                d.c.set(vec![i, p], it.next().unwrap());
            }
        }
        Ok(d)
    }

    /// Solves for `E` and symmetric `F` given the degree-1 data.
    pub fn solve_degree2(&self, frame: &Frame, sf: &StructureFunctions, degree1: &ConnectionData) -> Result<ConnectionData> {
        self.check_frame(frame)?;
        let l = self.l;
        let np = npairs(l);
        let calc = Calculus::new(frame, sf);
        let mut d = degree1.clone();
        d.e = ConnectionData::zero(l).e;
        d.f = ConnectionData::zero(l).f;
        let rhs: Vec<Polynomial> =
            Self::degree2_rows(&calc, &self.g, &self.keys2, &d)?.iter().map(|p| -p).collect();
        let x = self.degree2.solve(&rhs).map_err(|e| Error::Internal(format!("degree-2 normalization: {e}")))?;
        let mut it = x.into_iter();
        for i in 0..l {
            for j in 0..l {
                for p in 0..np {
                    d.e.set(vec![i, j, p], it.next().unwrap());
                }
            }
        }
        for (a, b) in sym_pairs(l) {
            let v = it.next().unwrap();
            d.f.set(vec![a, b], v.clone());
            d.f.set(vec![b, a], v);
        }
        Ok(d)
    }

    /// The curvature of arbitrary connection data on a frame.
    pub fn curvature(&self, frame: &Frame, sf: &StructureFunctions, data: &ConnectionData) -> Result<Curvature> {
        self.check_frame(frame)?;
        Ok(curvature(&Calculus::new(frame, sf), &self.g, data, Pairs::All))
    }

    /// Full pipeline: both normalizations and the derived verdicts.
    pub fn analyze(&self, frame: &Frame, sf: &StructureFunctions) -> Result<CurvatureReport> {
        let d1 = self.solve_degree1(frame, sf)?;
        let data = self.solve_degree2(frame, sf, &d1)?;
        let tensors = self.curvature(frame, sf, &data)?.tensors(&self.g);
        let flat = flatness_test(&tensors.p);
        let kappa11_deg2_zero = tensors.q.is_zero() && tensors.t.is_zero();
        Ok(CurvatureReport {
            l: self.l,
            connection: data,
            tensors,
            flat,
            kappa11_deg2_zero,
            extension_normal_deg2: kappa11_deg2_zero,
        })
    }
}

/// The harmonic curvature: `P` itself, already totally trace-free.
pub fn fundamental_invariant(p: &Tensor) -> Tensor {
    p.clone()
}

pub fn flatness_test(p: &Tensor) -> bool {
    p.is_zero()
}

/// The degree-≤2 truncation of the curvature function as a chain.
pub fn curvature_chain(g: &GradedAlgebra, report: &CurvatureReport) -> Chain<Polynomial> {
    chain_from_tensors(g, &report.tensors)
}

pub fn extension_normality_report(report: &CurvatureReport) -> ExtensionReport {
    let zero = report.tensors.q.is_zero() && report.tensors.t.is_zero();
    ExtensionReport {
        kappa11_deg2_zero: zero,
        verdict: if zero { ExtensionVerdict::NormalAtComputedOrder } else { ExtensionVerdict::ObstructedByT },
        scope: "curvature components of homogeneity 1 and 2 only".into(),
    }
}

/// Splits a polynomial chain into one scalar chain per monomial.
pub fn monomial_parts(c: &Chain<Polynomial>) -> Vec<(Monomial, Chain<Scalar>)> {
    let mut parts: std::collections::BTreeMap<Monomial, Chain<Scalar>> = std::collections::BTreeMap::new();
    for (slots, t, p) in c.terms() {
        for (m, s) in p.terms() {
            parts.entry(m.clone()).or_insert_with(|| Chain::new(c.degree())).add_term(slots.clone(), t, s, &Scalar::one());
        }
    }
    parts.into_iter().collect()
}

/// The `κ₁,₁` normality test applied to a polynomial chain: the condition is
/// linear, so it holds identically iff it holds for every monomial part.
pub fn polynomial_normality_test(emb: &Embedding, c: &Chain<Polynomial>) -> Result<bool> {
    for (_, part) in monomial_parts(c) {
        if !emb.kappa11_normality_test(&part)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
