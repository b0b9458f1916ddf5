use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::geometry::Frame;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Structure functions of the coframe.
///
/// Entry `(a, b, c)` is the coefficient of `θ^b∧θ^c` in `dθ^a` (for `b < c`,
/// stored antisymmetrically), after removing the term `θ^r∧θ^s` that
/// `dθ^[rs]` always carries. The four families `f^r_{i[jk]}`, `f^r_{PQ}`,
/// `f^{[rs]}_{i[jk]}`, `f^{[rs]}_{PQ}` are views into this array; the
/// single-single blocks are verified to vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureFunctions {
    chart: Chart,
    data: Vec<Polynomial>,
}

impl StructureFunctions {
    /// Computes `dθ^a` by exterior differentiation of the coframe and reads
    /// off its coefficients by evaluation on frame pairs.
    pub fn compute(frame: &Frame) -> Result<Self> {
        let chart = frame.chart();
        let n = chart.dim();
        let l = chart.l();
        let mut data = vec![Polynomial::zero(); n * n * n];
        for (a, theta) in frame.coframe().into_iter().enumerate() {
            let dtheta = theta.d();
            for b in 0..n {
                for c in b + 1..n {
                    let v = dtheta.evaluate(&[frame.field(b), frame.field(c)])?;
                    data[(a * n + c) * n + b] = -&v;
                    data[(a * n + b) * n + c] = v;
                }
            }
        }
        for a in 0..n {
            for p in 0..l {
                for q in p + 1..l {
                    let want = if a >= l && chart.pair_index(p, q) == a { 1 } else { 0 };
                    let got = &data[(a * n + p) * n + q];
                    if *got != Polynomial::from_int(want) {
                        return Err(Error::NotFreeDistribution(format!(
                            "coefficient of θ^{}∧θ^{} in dθ^{} is {got}, expected {want}",
                            p + 1,
                            q + 1,
                            chart.index_label(a)
                        )));
                    }
                    if want == 1 {
                        data[(a * n + p) * n + q] = Polynomial::zero();
                        data[(a * n + q) * n + p] = Polynomial::zero();
                    }
                }
            }
        }
        Ok(StructureFunctions { chart, data })
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    /// Coefficient of `θ^b∧θ^c` in `dθ^a` with the mandated term removed;
    /// antisymmetric in `(b, c)`. Indices are frame positions.
    pub fn get(&self, a: usize, b: usize, c: usize) -> &Polynomial {
        let n = self.chart.dim();
        &self.data[(a * n + b) * n + c]
    }

    /// `f^r_{i[jk]}` with 0-based `r`, `i` and pair `(j,k)`, `j < k`.
    pub fn single_mixed(&self, r: usize, i: usize, j: usize, k: usize) -> &Polynomial {
        self.get(r, i, self.chart.pair_index(j, k))
    }

    /// `f^{[rs]}_{i[jk]}`.
    pub fn pair_mixed(&self, rs: (usize, usize), i: usize, jk: (usize, usize)) -> &Polynomial {
        self.get(self.chart.pair_index(rs.0, rs.1), i, self.chart.pair_index(jk.0, jk.1))
    }

    /// `f^a_{[ij][kl]}` for a frame position `a`.
    pub fn pair_pair(&self, a: usize, ij: (usize, usize), kl: (usize, usize)) -> &Polynomial {
        self.get(a, self.chart.pair_index(ij.0, ij.1), self.chart.pair_index(kl.0, kl.1))
    }

    /// All nonzero entries `(a, b, c, value)` with `b < c`.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, usize, Polynomial)> {
        let n = self.chart.dim();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in b + 1..n {
                    let v = self.get(a, b, c);
                    if !v.is_zero() {
                        out.push((a, b, c, v.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Polynomial::is_zero)
    }

    /// The full coefficient of `θ^b∧θ^c` in `dθ^a`, mandated term included.
    pub fn full(&self, a: usize, b: usize, c: usize) -> Polynomial {
        let l = self.chart.l();
        let mut v = self.get(a, b, c).clone();
        if a >= l && b < l && c < l && b != c {
            let (p, q, s) = if b < c { (b, c, 1) } else { (c, b, -1) };
            if self.chart.pair_index(p, q) == a {
                v = &v + &Polynomial::constant(Scalar::from_int(s));
            }
        }
        v
    }
}

/// Frame coefficients of brackets: entry `[a][b][c] = θ^a([X_b, X_c])`.
/// This is an independent route to the structure functions, since
/// `dθ^a(X_b, X_c) = −θ^a([X_b, X_c])` for a dual coframe.
pub fn bracket_coefficients(frame: &Frame) -> Result<Vec<Vec<Vec<Polynomial>>>> {
    let n = frame.chart().dim();
    let mut out = vec![vec![vec![Polynomial::zero(); n]; n]; n];
    for b in 0..n {
        for c in b + 1..n {
            let br = frame.field(b).bracket(frame.field(c))?;
            for (a, v) in frame.decompose(&br).into_iter().enumerate() {
                out[a][c][b] = -&v;
                out[a][b][c] = v;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn reconstruct(frame: &Frame) {
        let sf = StructureFunctions::compute(frame).unwrap();
        let br = bracket_coefficients(frame).unwrap();
        let n = frame.chart().dim();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    assert_eq!(sf.full(a, b, c), -&br[a][b][c], "entry ({a},{b},{c})");
                }
            }
        }
    }

    #[test]
    fn flat_model_has_no_structure_functions() {
        let f = fixtures::flat_frame(4);
        let sf = StructureFunctions::compute(&f).unwrap();
        assert!(sf.is_zero());
        reconstruct(&f);
    }

    #[test]
    fn armstrong_has_a_single_entry() {
        for l in 4..=5 {
            let f = fixtures::armstrong_frame(l);
            let sf = StructureFunctions::compute(&f).unwrap();
            let nz = sf.nonzero_entries();
            assert_eq!(nz.len(), 1);
            assert_eq!(*sf.pair_mixed((2, 3), 0, (0, 1)), Polynomial::from_int(1));
            reconstruct(&f);
        }
    }

    #[test]
    fn coframe_derivatives_are_closed() {
        let f = fixtures::armstrong_frame(4);
        for th in f.coframe() {
            assert!(th.d().d().is_zero());
        }
    }
}
