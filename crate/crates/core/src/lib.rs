//! Exact lattice arithmetic for K3 surfaces.
//!
//! The crate covers the integral cohomology side of moduli of sheaves on a
//! K3 surface: the Mukai lattice, Brauer classes as finite-order functionals
//! on the transcendental lattice, the lattice v⊥/v, the fineness index and the
//! obstruction group to universal sheaves, plus rank-one twisted gluing data
//! on finite nerves. Everything is exact; no floating point is used anywhere.

pub mod error;
pub mod lattice;
pub mod mukai;
pub mod brauer;
pub mod moduli;
pub mod dp_twist;
pub mod cech;

pub use error::{Error, Result};
