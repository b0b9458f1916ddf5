use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Scalar;

/// A sparse square matrix over ℚ(√2).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Matrix {
    n: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Matrix { n, entries: BTreeMap::new() }
    }

    /// The elementary matrix `e(r,c)`.
    pub fn unit(n: usize, r: usize, c: usize) -> Self {
        let mut m = Matrix::zero(n);
        m.add_entry(r, c, &Scalar::one());
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_entry(&mut self, r: usize, c: usize, v: &Scalar) {
        assert!(r < self.n && c < self.n, "matrix index out of range");
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry((r, c)).or_insert_with(Scalar::zero);
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    /// `self + s·other`.
    pub fn add_scaled(&mut self, other: &Matrix, s: &Scalar) {
        assert_eq!(self.n, other.n);
        for (&(r, c), v) in &other.entries {
            self.add_entry(r, c, &(s * v));
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let mut out = Matrix::zero(self.n);
        out.add_scaled(self, s);
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.n);
        for (&(r, c), v) in &self.entries {
            out.add_entry(c, r, v);
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let mut rows: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            rows.entry(r).or_default().push((c, v));
        }
        let mut out = Matrix::zero(self.n);
        for (&(r, k), v) in &self.entries {
            if let Some(row) = rows.get(&k) {
                for (c, w) in row {
                    out.add_entry(r, *c, &(v * *w));
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Matrix) -> Matrix {
        let mut out = self.mul(other);
        out.add_scaled(&other.mul(self), &Scalar::from_int(-1));
        out
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for (&(r, c), v) in &self.entries {
            if r == c {
                t += v;
            }
        }
        t
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Matrix) -> Scalar {
        let mut t = Scalar::zero();
        for (&(r, c), v) in &self.entries {
            if let Some(w) = other.entries.get(&(c, r)) {
                t += &(v * w);
            }
        }
        t
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}]{{", self.n)?;
        for (i, (&(r, c), v)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({r},{c}): {v}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_multiply() {
        let a = Matrix::unit(3, 0, 1);
        let b = Matrix::unit(3, 1, 2);
        assert_eq!(a.mul(&b), Matrix::unit(3, 0, 2));
        assert!(b.mul(&a).is_zero());
        assert_eq!(a.trace_product(&Matrix::unit(3, 1, 0)), Scalar::one());
        assert_eq!(a.commutator(&b), Matrix::unit(3, 0, 2));
    }
}
