//! The graded Lie algebras `g = so(l,l+1)` and `g̃ = so(l+1,l+1)` as matrix
//! algebras, chains over them, `∂`, `∂*`, the embedding `α`, the map `φ` and
//! the operator `[∂*, φ]`.

mod chain;
pub mod checks;
mod embedding;
mod lie;
mod matrix;
mod ops;

pub use chain::{basis_terms, homogeneity, slot_type, subsets, Chain, SlotType, TermKey};
pub use embedding::{alpha_matrix, phi_matrix, Embedding};
pub use lie::{AlgebraElement, AlgebraKind, BasisIndex, GradedAlgebra};
pub use matrix::Matrix;
pub use ops::{codifferential, differential, evaluate_two_chain};
