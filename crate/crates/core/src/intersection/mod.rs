//! The intersection form of the potential and its Christoffel symbols.

pub mod christoffel;
pub mod form;

pub use christoffel::{
    christoffel_at_point, qmat_inverse, raised_three_point, reconstruct_from_intersection, round_trip_mismatches,
    verify_gamma_relation, ChristoffelSample, GammaRelationReport, QMat, ThreePointTable,
};
pub use form::{degree_constant, intersection_form, IdentityViolation, IntersectionForm};
