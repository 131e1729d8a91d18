//! Exact integer linear algebra for lattices with symmetric bilinear forms.

mod form;
pub mod linalg;
mod matrix;
pub mod snf;
pub mod standard;
mod sublattice;

pub use form::{pairing, FormClass, Lattice, LatticeVector};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};
pub use sublattice::{
    solve_pairing_value, FiniteAbelianGroup, LatticeEmbedding, QuotientStructure, Sublattice,
};
