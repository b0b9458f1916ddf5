use std::collections::BTreeMap;
use std::fmt;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{Coefficient, Scalar};

/// A polynomial vector field `Σ_c v^c ∂/∂c`, keyed by variable index.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    chart: Chart,
    comps: BTreeMap<usize, Polynomial>,
}

impl VectorField {
    pub fn zero(chart: Chart) -> Self {
        VectorField { chart, comps: BTreeMap::new() }
    }

    /// The coordinate field `∂/∂c` for variable index `v`.
    pub fn coordinate(chart: Chart, v: usize) -> Self {
        let mut comps = BTreeMap::new();
        comps.insert(v, Polynomial::from_int(1));
        VectorField { chart, comps }
    }

    pub fn from_components(chart: Chart, comps: impl IntoIterator<Item = (usize, Polynomial)>) -> Self {
        let comps = comps.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        VectorField { chart, comps }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn component(&self, v: usize) -> Polynomial {
        self.comps.get(&v).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Polynomial)> {
        self.comps.iter().map(|(k, v)| (*k, v))
    }

    /// Directional derivative `v(f) = Σ_c v^c ∂f/∂c`.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (v, c) in &self.comps {
            let d = f.derivative(*v);
            if !d.is_zero() {
                out = &out + &(c * &d);
            }
        }
        out
    }

    fn check(&self, other: &VectorField) -> Result<()> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch { left: self.chart.l(), right: other.chart.l() });
        }
        Ok(())
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        self.check(other)?;
        Ok(self.add_scaled_field(other, &Polynomial::from_int(1)))
    }

    pub fn scale(&self, s: &Scalar) -> VectorField {
        VectorField::from_components(self.chart, self.comps.iter().map(|(k, v)| (*k, v.scale(s))))
    }

    /// `self + f·other`.
    pub fn add_scaled_field(&self, other: &VectorField, f: &Polynomial) -> VectorField {
        let mut comps = self.comps.clone();
        for (k, v) in &other.comps {
            let e = comps.entry(*k).or_insert_with(Polynomial::zero);
            *e = &*e + &(f * v);
        }
        VectorField::from_components(self.chart, comps)
    }

    /// Lie bracket `[v,w]^c = Σ_d (v^d ∂_d w^c − w^d ∂_d v^c)`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        self.check(other)?;
        let mut comps: BTreeMap<usize, Polynomial> = BTreeMap::new();
        for (c, wc) in &other.comps {
            let t = self.apply(wc);
            comps.entry(*c).or_default().add_scaled(&t, &Scalar::one());
        }
        for (c, vc) in &self.comps {
            let t = other.apply(vc);
            comps.entry(*c).or_default().add_scaled(&t, &Scalar::from_int(-1));
        }
        Ok(VectorField::from_components(self.chart, comps))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(v, c)| {
                let name = match self.chart.coordinate(*v) {
                    crate::chart::Coordinate::X(i) => format!("Dx{i}"),
                    crate::chart::Coordinate::Y(j, k) => format!("Dy[{j},{k}]"),
                };
                format!("({c})*{name}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_vector_field;
    use crate::poly::Monomial;
    use proptest::prelude::*;

    fn c4() -> Chart {
        Chart::new(4).unwrap()
    }

    #[test]
    fn coordinate_fields_commute() {
        let a = VectorField::coordinate(c4(), 0);
        let b = VectorField::coordinate(c4(), 1);
        assert!(a.bracket(&b).unwrap().is_zero());
    }

    #[test]
    fn modified_field_against_y12() {
        let x1 = parse_vector_field("Dx1 - x2*Dy[1,2] - x3*Dy[1,3] - x4*Dy[1,4] + y[1,2]*Dy[3,4]", c4()).unwrap();
        let y12 = parse_vector_field("Dy[1,2]", c4()).unwrap();
        let want = parse_vector_field("-Dy[3,4]", c4()).unwrap();
        assert_eq!(x1.bracket(&y12).unwrap(), want);
    }

    #[test]
    fn flat_model_bracket() {
        let x1 = parse_vector_field("Dx1 - x2*Dy[1,2] - x3*Dy[1,3] - x4*Dy[1,4]", c4()).unwrap();
        let x2 = parse_vector_field("Dx2 - x3*Dy[2,3] - x4*Dy[2,4]", c4()).unwrap();
        assert_eq!(x1.bracket(&x2).unwrap(), parse_vector_field("Dy[1,2]", c4()).unwrap());
    }

    fn arb_field() -> impl Strategy<Value = VectorField> {
        let coef = prop::collection::vec((0usize..10, -3i64..4), 0..3).prop_map(|ts| {
            Polynomial::from_terms(c4(), ts.into_iter().map(|(v, n)| (Monomial::var(v), Scalar::from_int(n))))
        });
        prop::collection::vec((0usize..10, coef), 0..4)
            .prop_map(|cs| VectorField::from_components(c4(), cs))
    }

    proptest! {
        #[test]
        fn jacobi_and_antisymmetry(u in arb_field(), v in arb_field(), w in arb_field()) {
            let uv = u.bracket(&v).unwrap();
            prop_assert_eq!(uv.clone(), v.bracket(&u).unwrap().scale(&Scalar::from_int(-1)));
            let j = u.bracket(&v.bracket(&w).unwrap()).unwrap()
                .add(&v.bracket(&w.bracket(&u).unwrap()).unwrap()).unwrap()
                .add(&w.bracket(&uv).unwrap()).unwrap();
            prop_assert!(j.is_zero());
        }
    }
}
