//! Gröbner bases, quotient algebras and Grothendieck residues.

pub mod algebra;
pub mod groebner;
pub mod residue;

pub use algebra::{build_quotient, QuotientAlgebra};
pub use groebner::{groebner_basis, normal_form, GroebnerBasis, IdealBasis};
pub use residue::{grothendieck_residue, grothendieck_residue_by_trace, JacobianResidue};
