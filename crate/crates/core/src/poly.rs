//! Sparse multivariate polynomials over ℚ(√2) in the chart coordinates.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::chart::{Chart, Coordinate};
use crate::error::{Error, Result};
use crate::scalar::{Coefficient, Scalar};

/// Exponent vector stored sparsely as `(variable, exponent)` pairs sorted
/// by variable. Ordering is lexicographic on the dense exponent vector
/// `(x1, …, xl, y12, …)`, so `x1 > x2 > … > y[l-1,l]`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: usize) -> Self {
        Monomial(vec![(v as u32, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.0.iter().find(|(w, _)| *w as usize == v).map_or(0, |(_, e)| *e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|&(v, e)| (v as usize, e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Derivative with respect to variable `v`: `(multiplicity, monomial)`.
    fn differentiate(&self, v: usize) -> Option<(u32, Monomial)> {
        let pos = self.0.iter().position(|(w, _)| *w as usize == v)?;
        let e = self.0[pos].1;
        let mut rest = self.0.clone();
        if e == 1 {
            rest.remove(pos);
        } else {
            rest[pos].1 = e - 1;
        }
        Some((e, Monomial(rest)))
    }

    fn max_var(&self) -> Option<usize> {
        self.0.last().map(|(v, _)| *v as usize)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with no stored zero coefficients.
///
/// Constants are chart-free (`chart() == None`) so that `0` and `1` compare
/// equal regardless of provenance; any polynomial with a variable carries
/// its chart and mixing charts is an error.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    chart: Option<Chart>,
    terms: BTreeMap<Monomial, Scalar>,
}

fn join(a: Option<Chart>, b: Option<Chart>) -> Result<Option<Chart>> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(Error::ChartMismatch { left: x.l(), right: y.l() }),
        (Some(x), _) | (_, Some(x)) => Ok(Some(x)),
        _ => Ok(None),
    }
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { chart: None, terms }
    }

    pub fn from_int(n: i64) -> Self {
        Polynomial::constant(Scalar::from_int(n))
    }

    /// The coordinate function `c` on `chart`.
    pub fn coordinate(chart: Chart, c: Coordinate) -> Result<Self> {
        Ok(Polynomial::var(chart, chart.var_index(c)?))
    }

    /// The coordinate with variable index `v`.
    pub fn var(chart: Chart, v: usize) -> Self {
        assert!(v < chart.dim(), "variable index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), Scalar::one());
        Polynomial { chart: Some(chart), terms }
    }

    /// Builds from raw terms; zero coefficients are dropped.
    pub fn from_terms(chart: Chart, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Polynomial { chart: Some(chart), terms: BTreeMap::new() };
        for (m, c) in terms {
            if let Some(v) = m.max_var() {
                assert!(v < chart.dim(), "variable index out of range");
            }
            p.add_term(m, c);
        }
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        if self.terms.keys().all(Monomial::is_one) {
            self.chart = None;
        }
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn chart(&self) -> Option<Chart> {
        self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.chart.is_none()
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Scalar::zero))
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn try_add(&self, rhs: &Polynomial) -> Result<Polynomial> {
        let chart = join(self.chart, rhs.chart)?;
        let mut out = Polynomial { chart, terms: self.terms.clone() };
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out.normalize();
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Polynomial) -> Result<Polynomial> {
        self.try_add(&-rhs)
    }

    pub fn try_mul(&self, rhs: &Polynomial) -> Result<Polynomial> {
        let chart = join(self.chart, rhs.chart)?;
        let mut out = Polynomial { chart, terms: BTreeMap::new() };
        if self.is_zero() || rhs.is_zero() {
            return Ok(Polynomial::zero());
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out.normalize();
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            chart: self.chart,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::from_int(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to the variable index `v`.
    pub fn derivative(&self, v: usize) -> Polynomial {
        let mut out = Polynomial { chart: self.chart, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.differentiate(v) {
                out.add_term(rest, c * &Scalar::from_int(e as i64));
            }
        }
        out.normalize();
        out
    }

    /// Partial derivative along a named coordinate of `chart`.
    pub fn partial_derivative(&self, chart: Chart, c: Coordinate) -> Result<Polynomial> {
        join(self.chart, Some(chart))?;
        Ok(self.derivative(chart.var_index(c)?))
    }

    /// Exact substitution of a point given by coordinate names.
    pub fn evaluate(&self, point: &HashMap<Coordinate, Scalar>) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                let chart = self.chart.expect("non-constant polynomial has a chart");
                let name = chart.coordinate(v);
                let val = point.get(&name).ok_or_else(|| Error::MissingCoordinate(name.to_string()))?;
                t = &t * &val.pow(e);
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Substitution with values listed by variable index.
    pub fn evaluate_vars(&self, values: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                t = &t * &values[v].pow(e);
            }
            acc += &t;
        }
        acc
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let body = if m.is_one() {
                c.to_string()
            } else {
                let chart = self.chart.expect("non-constant polynomial has a chart");
                let mono = m
                    .factors()
                    .map(|(v, e)| {
                        let name = chart.coordinate(v).to_string();
                        if e == 1 {
                            name
                        } else {
                            format!("{name}^{e}")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*");
                if c.is_one() {
                    mono
                } else if (-c).is_one() {
                    format!("-{mono}")
                } else {
                    format!("{c}*{mono}")
                }
            };
            if first {
                write!(f, "{body}")?;
                first = false;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial chart mismatch")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial chart mismatch")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial chart mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            chart: self.chart,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Coefficient for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn from_scalar(s: Scalar) -> Self {
        Polynomial::constant(s)
    }
    fn add_scaled(&mut self, other: &Self, s: &Scalar) {
        if s.is_zero() || other.is_zero() {
            return;
        }
        self.chart = join(self.chart, other.chart).expect("polynomial chart mismatch");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * s);
        }
        self.normalize();
    }
    fn scaled(&self, s: &Scalar) -> Self {
        self.scale(s)
    }
}
