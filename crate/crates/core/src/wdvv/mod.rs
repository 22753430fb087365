//! Reconstruction of the potential from the WDVV equations.

pub mod ansatz;
mod engine;
pub mod potential;

pub use ansatz::{
    cubic_part, default_normalization_monomial, enumerate_monomials, enumerate_unknowns, limit_three_point,
    required_t_degree, seed_cubic, Normalization, ReconstructionConfig,
};
pub use engine::SolveStats;
pub use potential::{solve, MixedArmCheck, Potential, ResidualTerm};
