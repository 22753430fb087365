//! Exact reconstruction of the Frobenius manifold attached to the cusp
//! polynomial f_A = x1^{a1} + x2^{a2} + x3^{a3} − s^{-1} x1x2x3, with
//! independent cross-checks through residues, the intersection form and
//! the lattice data of the star-shaped Dynkin diagram.

pub mod algebra;
pub mod cli;
pub mod cusp;
pub mod error;
pub mod intersection;
pub mod quotient;
pub mod series;
pub mod wdvv;
pub mod weyl;

pub use error::{Error, Result};
