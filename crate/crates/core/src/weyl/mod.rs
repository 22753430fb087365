//! Cartan data of the star-shaped diagram and the extended affine Weyl action.

pub mod cartan;
pub mod extended;

pub use cartan::{
    cartan_matrix, expected_determinant, fundamental_coweights, gram_check, gram_data, CartanData, CorootVector,
    GramData, GramReport, GRAM_TAG,
};
pub use extended::{ExtendedElement, ExtendedWeyl};
