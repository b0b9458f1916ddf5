//! Vector fields, differential forms, adapted frames and coframes, and the
//! structure functions of a rank-l distribution on the chart.

mod field;
mod form;
mod frame;
mod structure;

pub use field::VectorField;
pub use form::Form;
pub(crate) use form::sort_with_sign;
pub use frame::{check_nondegenerate, Frame};
pub use structure::{bracket_coefficients, StructureFunctions};
