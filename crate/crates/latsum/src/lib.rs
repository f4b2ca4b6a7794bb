//! Two-dimensional lattice sums: generalized Eisenstein series σₙ⁽ᵐ⁾(τ) and
//! cylindrical harmonic sums S_{l,m,n}(u; τ, a) over Bravais lattices and
//! displaced high-symmetry point sets, with a brute-force oracle.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cylsum;
pub mod displaced;
pub mod eisenstein;
pub mod error;
pub mod lattice;
pub mod modular;
pub mod oracle;
pub mod special;

pub use error::{Error, Result};
pub use lattice::{CanonicalLattice, LatticePoint, LatticeSpec};
