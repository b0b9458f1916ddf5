use std::collections::BTreeMap;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::geometry::VectorField;
use crate::poly::Polynomial;
use crate::scalar::{Coefficient, Scalar};

/// A polynomial differential k-form `Σ_I f_I dc_{i1}∧…∧dc_{ik}` with strictly
/// increasing variable multi-indices `I`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Form {
    chart: Chart,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Polynomial>,
}

/// Sorts `idx` in place and returns the permutation sign, or `None` if an
/// index repeats.
pub(crate) fn sort_with_sign(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            let moved = (p.len() - pos) as i64;
            out.push((q, if moved % 2 == 0 { s } else { -s }));
        }
    }
    out
}

impl Form {
    pub fn zero(chart: Chart, degree: usize) -> Self {
        Form { chart, degree, terms: BTreeMap::new() }
    }

    /// The 1-form `Σ_c coeffs[c] dc`.
    pub fn one_form(chart: Chart, coeffs: &[Polynomial]) -> Self {
        let mut f = Form::zero(chart, 1);
        for (c, p) in coeffs.iter().enumerate() {
            f.add_term(vec![c], p);
        }
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Polynomial)> {
        self.terms.iter()
    }

    /// Adds `p · dc_{idx}` with `idx` in any order.
    pub fn add_term(&mut self, mut idx: Vec<usize>, p: &Polynomial) {
        assert_eq!(idx.len(), self.degree);
        if p.is_zero() {
            return;
        }
        let Some(sign) = sort_with_sign(&mut idx) else { return };
        let e = self.terms.entry(idx.clone()).or_default();
        e.add_scaled(p, &Scalar::from_int(sign));
        if e.is_zero() {
            self.terms.remove(&idx);
        }
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::InvalidArgument("adding forms of different degree".into()));
        }
        let mut out = self.clone();
        for (i, p) in &other.terms {
            out.add_term(i.clone(), p);
        }
        Ok(out)
    }

    fn compatible(&self, other: &Form) -> Result<()> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch { left: self.chart.l(), right: other.chart.l() });
        }
        Ok(())
    }

    pub fn wedge(&self, other: &Form) -> Result<Form> {
        self.compatible(other)?;
        let mut out = Form::zero(self.chart, self.degree + other.degree);
        for (i, p) in &self.terms {
            for (j, q) in &other.terms {
                let mut idx = i.clone();
                idx.extend_from_slice(j);
                out.add_term(idx, &(p * q));
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        let mut out = Form::zero(self.chart, self.degree + 1);
        for (i, p) in &self.terms {
            for v in 0..self.chart.dim() {
                let dp = p.derivative(v);
                if dp.is_zero() {
                    continue;
                }
                let mut idx = vec![v];
                idx.extend_from_slice(i);
                out.add_term(idx, &dp);
            }
        }
        out
    }

    /// Evaluation `ω(V_1, …, V_k)` with the determinant convention
    /// `(α∧β)(u,v) = α(u)β(v) − α(v)β(u)`.
    pub fn evaluate(&self, fields: &[&VectorField]) -> Result<Polynomial> {
        if fields.len() != self.degree {
            return Err(Error::InvalidArgument(format!(
                "a {}-form needs {} arguments, got {}",
                self.degree,
                self.degree,
                fields.len()
            )));
        }
        let perms = permutations(self.degree);
        let mut out = Polynomial::zero();
        for (idx, p) in &self.terms {
            let mut det = Polynomial::zero();
            for (perm, s) in &perms {
                let mut prod = Polynomial::from_int(*s);
                for (a, &b) in perm.iter().enumerate() {
                    prod = &prod * &fields[a].component(idx[b]);
                    if prod.is_zero() {
                        break;
                    }
                }
                det = &det + &prod;
            }
            if !det.is_zero() {
                out = &out + &(p * &det);
            }
        }
        Ok(out)
    }
}
