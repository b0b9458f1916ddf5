use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::geometry::{Form, VectorField};
use crate::poly::Polynomial;
use crate::scalar::{Coefficient, Scalar};

type PolyMatrix = Vec<Vec<Polynomial>>;

fn matmul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    let mut out = vec![vec![Polynomial::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                let t = &a[i][k] * &b[k][j];
                out[i][j].add_scaled(&t, &Scalar::one());
            }
        }
    }
    out
}

/// Determinant and adjugate by the Faddeev–LeVerrier recursion. It divides
/// only by the integers 1..n, so it stays inside the polynomial ring.
fn det_and_adjugate(a: &PolyMatrix) -> (Polynomial, PolyMatrix) {
    let n = a.len();
    let mut m = vec![vec![Polynomial::zero(); n]; n];
    let mut c = Polynomial::from_int(1);
    for k in 1..=n {
        for (i, row) in m.iter_mut().enumerate() {
            row[i].add_scaled(&c, &Scalar::one());
        }
        let am = matmul(a, &m);
        let mut tr = Polynomial::zero();
        for (i, row) in am.iter().enumerate() {
            tr.add_scaled(&row[i], &Scalar::one());
        }
        c = tr.scale(&Scalar::from_ratio(-1, k as i64));
        if k < n {
            m = am;
        }
    }
    // det(λ − A) has constant term c_0 = c; det A = (−1)^n c_0 and
    // adj A = (−1)^{n+1} M_n.
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let det = c.scale(&Scalar::from_int(sign));
    let adj = m
        .into_iter()
        .map(|row| row.into_iter().map(|p| p.scale(&Scalar::from_int(-sign))).collect())
        .collect();
    (det, adj)
}

/// An adapted frame `{X_i, X_[jk] = −[X_j, X_k]}` with its polynomial
/// inverse. Frame positions follow the chart: singles then pairs.
#[derive(Clone, Debug)]
pub struct Frame {
    chart: Chart,
    fields: Vec<VectorField>,
    matrix: PolyMatrix,
    inverse: PolyMatrix,
    det: Scalar,
    base_point: Vec<Scalar>,
}

impl Frame {
    /// Builds the frame from the distribution fields `X_1..X_l`. The base
    /// point defaults to the origin.
    pub fn new(chart: Chart, distribution: Vec<VectorField>, base_point: Option<Vec<Scalar>>) -> Result<Self> {
        let l = chart.l();
        if distribution.len() != l {
            return Err(Error::InvalidArgument(format!("expected {l} fields, got {}", distribution.len())));
        }
        if let Some(v) = distribution.iter().find(|v| v.chart() != chart) {
            return Err(Error::ChartMismatch { left: chart.l(), right: v.chart().l() });
        }
        let base_point = base_point.unwrap_or_else(|| vec![Scalar::zero(); chart.dim()]);
        if base_point.len() != chart.dim() {
            return Err(Error::InvalidArgument("base point has the wrong dimension".into()));
        }
        let mut fields = distribution;
        for (j, k) in chart.pairs() {
            let b = fields[j].bracket(&fields[k])?;
            fields.push(b.scale(&Scalar::from_int(-1)));
        }
        let n = chart.dim();
        let matrix: PolyMatrix = fields.iter().map(|f| (0..n).map(|c| f.component(c)).collect()).collect();
        let (det, adj) = det_and_adjugate(&matrix);
        if det.evaluate_vars(&base_point).is_zero() {
            return Err(Error::Degenerate(
                "the fields X_i and their brackets do not span the tangent space at the base point".into(),
            ));
        }
        let det = det.as_constant().ok_or_else(|| {
            Error::UnsupportedFrame(format!("frame determinant {det} is not a nonzero constant"))
        })?;
        let inv_det = det.inv()?;
        let inverse = adj.into_iter().map(|row| row.into_iter().map(|p| p.scale(&inv_det)).collect()).collect();
        Ok(Frame { chart, fields, matrix, inverse, det, base_point })
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn l(&self) -> usize {
        self.chart.l()
    }

    /// All `n = l(l+1)/2` frame fields.
    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn field(&self, a: usize) -> &VectorField {
        &self.fields[a]
    }

    /// Row `b` holds the coordinate components of frame field `b`.
    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn determinant(&self) -> &Scalar {
        &self.det
    }

    pub fn base_point(&self) -> &[Scalar] {
        &self.base_point
    }

    /// Always true for a constructed frame: unimodularity is checked on
    /// construction, so the frame is a basis at every point.
    pub fn is_nondegenerate(&self) -> bool {
        !self.det.is_zero()
    }

    /// Coefficient of `dc` in `θ^a`.
    pub fn coframe_entry(&self, a: usize, c: usize) -> &Polynomial {
        &self.inverse[c][a]
    }

    /// The dual coframe `θ^a = Σ_c (F^{-1})_{ca} dc`.
    pub fn coframe(&self) -> Vec<Form> {
        let n = self.chart.dim();
        (0..n)
            .map(|a| {
                let coeffs: Vec<Polynomial> = (0..n).map(|c| self.inverse[c][a].clone()).collect();
                Form::one_form(self.chart, &coeffs)
            })
            .collect()
    }

    /// Frame coordinates of a vector field: `v = Σ_a θ^a(v) X_a`.
    pub fn decompose(&self, v: &VectorField) -> Vec<Polynomial> {
        let n = self.chart.dim();
        (0..n)
            .map(|a| {
                let mut acc = Polynomial::zero();
                for (c, p) in v.components() {
                    let g = &self.inverse[c][a];
                    if !g.is_zero() {
                        acc.add_scaled(&(g * p), &Scalar::one());
                    }
                }
                acc
            })
            .collect()
    }
}

/// True iff the fields generate a unimodular frame.
pub fn check_nondegenerate(chart: Chart, distribution: Vec<VectorField>) -> bool {
    Frame::new(chart, distribution, None).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::parse::parse_vector_field;

    fn assert_dual(frame: &Frame) {
        let cof = frame.coframe();
        for (a, th) in cof.iter().enumerate() {
            for b in 0..frame.chart().dim() {
                let v = th.evaluate(&[frame.field(b)]).unwrap();
                assert_eq!(v, Polynomial::from_int(i64::from(a == b)), "<θ^{a}, X_{b}>");
            }
        }
    }

    #[test]
    fn flat_frame_is_unimodular() {
        let f = fixtures::flat_frame(4);
        assert!(f.determinant() == &Scalar::one() || f.determinant() == &Scalar::from_int(-1));
        assert!(f.is_nondegenerate());
        assert_dual(&f);
        // θ^i = dx_i for the flat model
        let cof = f.coframe();
        for (i, th) in cof.iter().enumerate().take(4) {
            let terms: Vec<_> = th.terms().collect();
            assert_eq!(terms.len(), 1);
            assert_eq!(terms[0].0, &vec![i]);
        }
    }

    #[test]
    fn armstrong_frame_is_valid() {
        for l in 4..=6 {
            let f = fixtures::armstrong_frame(l);
            assert!(f.is_nondegenerate());
            assert_dual(&f);
        }
    }

    #[test]
    fn coordinate_frame_gives_coordinate_coframe() {
        // A frame whose derived fields are ±∂y: X_i = ∂x_i − Σ_{p>i} x_p ∂y_ip
        // is the flat one; the pure coordinate distribution is integrable.
        let c = Chart::new(3).unwrap();
        let fields = (1..=3).map(|i| parse_vector_field(&format!("Dx{i}"), c).unwrap()).collect();
        assert!(matches!(Frame::new(c, fields, None), Err(Error::Degenerate(_))));
        let fields: Vec<_> = (1..=3).map(|i| parse_vector_field(&format!("Dx{i}"), c).unwrap()).collect();
        assert!(!check_nondegenerate(c, fields));
    }

    #[test]
    fn non_unimodular_frame_is_rejected() {
        let c = Chart::new(3).unwrap();
        let fields = vec![
            parse_vector_field("Dx1 - x2*Dy[1,2] - x3*Dy[1,3]", c).unwrap(),
            parse_vector_field("Dx2 - x3*Dy[2,3]", c).unwrap(),
            parse_vector_field("Dx3 + x2*x3*Dy[2,3]", c).unwrap(),
        ];
        // X_[23] = −[X2,X3] gains the non-constant factor (1 + x3) along ∂y23
        let base = vec![Scalar::zero(); 6];
        assert!(matches!(Frame::new(c, fields, Some(base)), Err(Error::UnsupportedFrame(_))));
    }

    #[test]
    fn adjugate_of_small_matrix() {
        let c = Chart::new(2).unwrap();
        let x = Polynomial::var(c, 0);
        let y = Polynomial::var(c, 1);
        let one = Polynomial::from_int(1);
        // [[1 + xy, x], [y, 1]] has determinant 1
        let m = vec![vec![&one + &(&x * &y), x.clone()], vec![y.clone(), one.clone()]];
        let (det, adj) = det_and_adjugate(&m);
        assert_eq!(det, one);
        assert_eq!(adj[0][0], one);
        assert_eq!(adj[0][1], -&x);
        assert_eq!(adj[1][0], -&y);
    }
}
