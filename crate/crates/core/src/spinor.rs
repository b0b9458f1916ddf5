//! The almost spinorial structure: tangent vectors as skew matrices of size
//! `l+1` via `TM ≅ Λ²S`, the Pfaffian, and the cone of null vectors.
//!
//! The identification sends `E_i` to `(1/√2) s₀∧s_i` and `E_[ij]` to
//! `s_i∧s_j`, matching the classes of `α(E_i)` and `α(E_[ij])` modulo
//! the parabolic of `g̃`.

use serde::{Deserialize, Serialize};

use crate::chart::{npairs, pairs};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Square matrix of exact scalars, row major.
pub type ScalarMatrix = Vec<Vec<Scalar>>;

/// A tangent vector in frame coordinates: `singles[i] = v^i`,
/// `pairs[p] = v^[jk]` for the `p`-th pair `j < k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub l: usize,
    pub singles: Vec<Scalar>,
    pub pairs: Vec<Scalar>,
}

impl TangentVector {
    pub fn zero(l: usize) -> Self {
        TangentVector { l, singles: vec![Scalar::zero(); l], pairs: vec![Scalar::zero(); npairs(l)] }
    }

    /// Coordinates in the order `v^1..v^l, v^[12], v^[13], …`.
    pub fn coordinates(&self) -> Vec<Scalar> {
        self.singles.iter().chain(&self.pairs).cloned().collect()
    }

    pub fn from_coordinates(l: usize, c: &[Scalar]) -> Result<Self> {
        if c.len() != l + npairs(l) {
            return Err(Error::InvalidArgument(format!("expected {} coordinates, got {}", l + npairs(l), c.len())));
        }
        Ok(TangentVector { l, singles: c[..l].to_vec(), pairs: c[l..].to_vec() })
    }
}

/// `M₀ᵢ = v^i/√2`, `Mᵢⱼ = v^[ij]` (1-based `i < j`), skew completion.
pub fn tangent_to_skew(v: &TangentVector) -> ScalarMatrix {
    let l = v.l;
    let mut m = vec![vec![Scalar::zero(); l + 1]; l + 1];
    let h = Scalar::inv_sqrt2();
    for i in 0..l {
        let x = &v.singles[i] * &h;
        m[0][i + 1] = x.clone();
        m[i + 1][0] = -x;
    }
    for (p, (i, j)) in pairs(l).into_iter().enumerate() {
        m[i + 1][j + 1] = v.pairs[p].clone();
        m[j + 1][i + 1] = -&v.pairs[p];
    }
    m
}

/// Inverse of [`tangent_to_skew`]; fails on a matrix that is not skew.
pub fn skew_to_tangent(m: &ScalarMatrix) -> Result<TangentVector> {
    let n = m.len();
    if n < 2 || m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("expected a square matrix of size at least 2".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if m[i][j] != -&m[j][i] {
                return Err(Error::InvalidArgument("matrix is not skew-symmetric".into()));
            }
        }
    }
    let l = n - 1;
    let singles = (0..l).map(|i| &m[0][i + 1] * &Scalar::sqrt2()).collect();
    let ps = pairs(l).into_iter().map(|(i, j)| m[i + 1][j + 1].clone()).collect();
    Ok(TangentVector { l, singles, pairs: ps })
}

fn pf_rec(m: &ScalarMatrix, idx: &[usize]) -> Scalar {
    if idx.is_empty() {
        return Scalar::one();
    }
    let first = idx[0];
    let mut acc = Scalar::zero();
    for k in 1..idx.len() {
        let a = &m[first][idx[k]];
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|(p, _)| *p + 1 != k).map(|(_, &x)| x).collect();
        let term = a * &pf_rec(m, &rest);
        // the sign is (−1)^{k+1} for the k-th position counted from 0
        if k % 2 == 1 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}

/// Pfaffian by expansion along the first row.
pub fn pfaffian(m: &ScalarMatrix) -> Result<Scalar> {
    let n = m.len();
    if n % 2 == 1 {
        return Err(Error::Unsupported(format!(
            "a skew matrix of odd size {n} has no Pfaffian; for odd l each such structure defines a cone, for even l it does not"
        )));
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(pf_rec(m, &idx))
}

/// Exact determinant by Gaussian elimination.
pub fn determinant(m: &ScalarMatrix) -> Scalar {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Scalar::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det = &det * &piv;
        let inv = piv.inv().expect("nonzero pivot");
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] * &inv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= &t;
            }
        }
    }
    det
}

fn check_odd(l: usize) -> Result<()> {
    if l % 2 == 0 {
        return Err(Error::Unsupported(format!(
            "the null cone is defined for odd l, where the Pfaffian of the (l+1)×(l+1) matrix exists; got l = {l}"
        )));
    }
    Ok(())
}

pub fn null_cone_member(v: &TangentVector) -> Result<bool> {
    check_odd(v.l)?;
    Ok(pfaffian(&tangent_to_skew(v))?.is_zero())
}

/// For `l = 3`: the symmetric form `B` on `(v¹, v², v³, v^[12], v^[13], v^[23])`
/// with `2·Pf(tangent_to_skew(v)) = B(v, v)`.
pub fn pfaffian_quadratic_form(l: usize) -> Result<ScalarMatrix> {
    if l != 3 {
        return Err(Error::Unsupported(format!("the Pfaffian quadratic form is provided for l = 3, got {l}")));
    }
    // 2·Pf = 2(M01 M23 − M02 M13 + M03 M12) = √2 (v¹v^[23] − v²v^[13] + v³v^[12])
    let r = Scalar::inv_sqrt2();
    let mut b = vec![vec![Scalar::zero(); 6]; 6];
    for (i, p, s) in [(0usize, 5usize, 1i64), (1, 4, -1), (2, 3, 1)] {
        let x = &r * &Scalar::from_int(s);
        b[i][p] = x.clone();
        b[p][i] = x;
    }
    Ok(b)
}

/// Signature `(positive, negative)` of a symmetric matrix, by symmetric
/// Gaussian elimination (congruence).
pub fn signature(m: &ScalarMatrix) -> (usize, usize) {
    let mut a = m.clone();
    let n = a.len();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let diag = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                // all diagonal entries vanish: pair up an off-diagonal entry
                let found = active.iter().flat_map(|&i| active.iter().map(move |&j| (i, j))).find(|&(i, j)| i != j && !a[i][j].is_zero());
                let Some((i, j)) = found else { break };
                // replace row/column i by i + j, making a[i][i] = 2 a[i][j] ≠ 0
                for k in 0..n {
                    let t = a[j][k].clone();
                    a[i][k] += &t;
                }
                for k in 0..n {
                    let t = a[k][j].clone();
                    a[k][i] += &t;
                }
                i
            }
        };
        let piv = a[p][p].clone();
        if piv.signum() > 0 {
            pos += 1;
        } else {
            neg += 1;
        }
        let inv = piv.inv().expect("nonzero pivot");
        for &r in &active {
            if r == p || a[r][p].is_zero() {
                continue;
            }
            let f = &a[r][p] * &inv;
            for k in 0..n {
                let t = &f * &a[p][k];
                a[r][k] -= &t;
            }
            for k in 0..n {
                let t = &f * &a[k][p];
                a[k][r] -= &t;
            }
        }
        active.retain(|&x| x != p);
    }
    (pos, neg)
}

/// A row of the table of exceptional inclusions of parabolic geometries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inclusion {
    pub algebras: String,
    pub groups: String,
    pub model: String,
    pub geometry: String,
}

pub fn list_inclusions() -> Vec<Inclusion> {
    vec![
        Inclusion {
            algebras: "C_l ⊂ A_{2l−1}: sp(2l,R) ⊂ sl(2l,R)".into(),
            groups: "P ⊂ Sp(2l,R) stabilizer of a line; P̃ ⊂ SL(2l,R) stabilizer of a line".into(),
            model: "RP^{2l−1}".into(),
            geometry: "contact projective structures inside projective structures".into(),
        },
        Inclusion {
            algebras: "G_2 ⊂ B_3: g_2 ⊂ so(3,4)".into(),
            groups: "P ⊂ G_2 stabilizer of a null line; P̃ ⊂ SO(3,4) stabilizer of a null line".into(),
            model: "Q5".into(),
            geometry: "generic rank 2 distributions in dimension 5 inside conformal structures of signature (2,3)".into(),
        },
        Inclusion {
            algebras: "B_l ⊂ D_{l+1}: so(l,l+1) ⊂ so(l+1,l+1)".into(),
            groups: "P ⊂ SO(l,l+1) stabilizer of a maximal isotropic subspace; P̃ ⊂ SO(l+1,l+1) stabilizer of a maximal isotropic subspace".into(),
            model: "the space of maximal isotropic subspaces".into(),
            geometry: "generic free distribution with growth vector (l, l(l+1)/2) inside almost spinorial structures; for l = 3 this is the rank 3 distribution in dimension 6 studied by Bryant, carrying a conformal structure of signature (3,3)".into(),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn vec_of(l: usize, singles: &[(usize, i64)], prs: &[(usize, i64)]) -> TangentVector {
        let mut v = TangentVector::zero(l);
        for &(i, x) in singles {
            v.singles[i] = s(x);
        }
        for &(p, x) in prs {
            v.pairs[p] = s(x);
        }
        v
    }

    #[test]
    fn unit_e1_direction() {
        let m = tangent_to_skew(&vec_of(3, &[(0, 1)], &[]));
        assert_eq!(m[0][1], Scalar::inv_sqrt2());
        assert_eq!(m[1][0], -Scalar::inv_sqrt2());
        let nonzero = m.iter().flatten().filter(|x| !x.is_zero()).count();
        assert_eq!(nonzero, 2);
        assert!(tangent_to_skew(&TangentVector::zero(3)).iter().flatten().all(Scalar::is_zero));
    }

    #[test]
    fn two_by_two_base_case() {
        let m = vec![vec![s(0), s(5)], vec![s(-5), s(0)]];
        assert_eq!(pfaffian(&m).unwrap(), s(5));
    }

    #[test]
    fn pfaffian_example_l3() {
        // v¹ = v^[23] = 1
        let v = vec_of(3, &[(0, 1)], &[(2, 1)]);
        assert_eq!(pfaffian(&tangent_to_skew(&v)).unwrap(), Scalar::inv_sqrt2());
        assert!(!null_cone_member(&v).unwrap());
        assert!(null_cone_member(&vec_of(3, &[(0, 1)], &[])).unwrap());
        assert!(null_cone_member(&TangentVector::zero(3)).unwrap());
    }

    #[test]
    fn even_rank_is_unsupported() {
        assert!(matches!(null_cone_member(&TangentVector::zero(4)), Err(Error::Unsupported(_))));
        assert!(matches!(pfaffian(&tangent_to_skew(&TangentVector::zero(4))), Err(Error::Unsupported(_))));
        assert!(pfaffian_quadratic_form(5).is_err());
    }

    #[test]
    fn quadratic_form_has_split_signature() {
        assert_eq!(signature(&pfaffian_quadratic_form(3).unwrap()), (3, 3));
        assert_eq!(signature(&vec![vec![s(1), s(0)], vec![s(0), s(-2)]]), (1, 1));
        assert_eq!(signature(&vec![vec![s(0), s(1)], vec![s(1), s(0)]]), (1, 1));
    }

    #[test]
    fn inclusion_table() {
        let t = list_inclusions();
        assert_eq!(t.len(), 3);
        assert_eq!(t[1].model, "Q5");
        assert!(t[2].geometry.contains("dimension 6") && t[2].geometry.contains("Bryant"));
    }

    fn scalar() -> impl Strategy<Value = Scalar> {
        (-4i64..=4, -3i64..=3).prop_map(|(a, b)| &s(a) + &(&s(b) * &Scalar::sqrt2()))
    }

    fn tangent(l: usize) -> impl Strategy<Value = TangentVector> {
        proptest::collection::vec(scalar(), l + npairs(l))
            .prop_map(move |c| TangentVector::from_coordinates(l, &c).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn pfaffian_squares_to_determinant(v in prop_oneof![tangent(3), tangent(5)]) {
            let m = tangent_to_skew(&v);
            let pf = pfaffian(&m).unwrap();
            prop_assert_eq!(&pf * &pf, determinant(&m));
        }

        #[test]
        fn identification_round_trips_and_is_linear(v in tangent(3), w in tangent(3), c in scalar()) {
            prop_assert_eq!(skew_to_tangent(&tangent_to_skew(&v)).unwrap(), v.clone());
            let sum: Vec<Scalar> = v.coordinates().iter().zip(w.coordinates()).map(|(a, b)| &(a * &c) + &b).collect();
            let lhs = tangent_to_skew(&TangentVector::from_coordinates(3, &sum).unwrap());
            let (mv, mw) = (tangent_to_skew(&v), tangent_to_skew(&w));
            for i in 0..4 {
                for j in 0..4 {
                    prop_assert_eq!(&lhs[i][j], &(&(&mv[i][j] * &c) + &mw[i][j]));
                }
            }
        }

        #[test]
        fn quadratic_form_is_twice_the_pfaffian(v in tangent(3)) {
            let b = pfaffian_quadratic_form(3).unwrap();
            let x = v.coordinates();
            let mut q = Scalar::zero();
            for i in 0..6 {
                for j in 0..6 {
                    q += &(&(&x[i] * &b[i][j]) * &x[j]);
                }
            }
            prop_assert_eq!(q, &s(2) * &pfaffian(&tangent_to_skew(&v)).unwrap());
        }

        #[test]
        fn decomposable_vectors_are_null(a in proptest::collection::vec(scalar(), 6), b in proptest::collection::vec(scalar(), 6)) {
            // s∧t for s, t ∈ S of dimension 6 (l = 5) and their 4-dimensional truncations (l = 3)
            for n in [4usize, 6] {
                let mut m = vec![vec![Scalar::zero(); n]; n];
                for i in 0..n {
                    for j in 0..n {
                        m[i][j] = &(&a[i] * &b[j]) - &(&a[j] * &b[i]);
                    }
                }
                let v = skew_to_tangent(&m).unwrap();
                prop_assert!(null_cone_member(&v).unwrap());
                let scaled = TangentVector::from_coordinates(v.l, &v.coordinates().iter().map(|x| x * &s(-3)).collect::<Vec<_>>()).unwrap();
                prop_assert!(null_cone_member(&scaled).unwrap());
            }
        }
    }
}
