//! Exact computation of the canonical Cartan-connection data of a free
//! rank-l distribution (growth vector `(l, l(l+1)/2)`), the graded Lie
//! algebra machinery of `so(l,l+1) ⊂ so(l+1,l+1)` behind it, and the induced
//! almost spinorial structure.
//!
//! Everything is exact: scalars live in ℚ(√2) and functions are
//! polynomials in the chart coordinates `x_i`, `y_[jk]`.

pub mod algebra;
pub mod chart;
pub mod cohomology;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod linalg;
pub mod normalization;
pub mod parse;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod spinor;

pub use chart::{Chart, Coordinate};
pub use error::{Error, Result};
pub use poly::{Monomial, Polynomial};
pub use scalar::{Coefficient, Scalar};
